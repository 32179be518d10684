#pragma once

#include <vector>

#include "dcsbm/graph.hpp"

namespace dcsbm {

// Per-block edge counts and degree sums for an assignment.
// m_rs = sum_ij A_ij z_ir z_js over ordered pairs, so m_rr counts internal
// edges twice and includes the diagonal self-loop entries; kappa_r is the
// degree sum of group r. sum_rs m_rs = sum_r kappa_r = 2m.
struct BlockStats {
    int K = 0;
    long long two_m = 0;
    std::vector<long long> m_rs;   // row-major K*K, symmetric
    std::vector<long long> kappa;  // length K

    BlockStats() = default;
    BlockStats(const Graph& g, const Assignment& a);

    long long m(int r, int s) const { return m_rs[static_cast<size_t>(r) * K + s]; }
    long long& m(int r, int s) { return m_rs[static_cast<size_t>(r) * K + s]; }
    bool consistent() const; // sum m_rs == 2m and sum kappa == 2m
};

// Log-likelihood split into the assignment/omega-dependent core and the
// graph-only constant, with total = core + constant and the minimization
// objective being -total.
struct LikelihoodValue {
    double core = 0.0;
    double constant = 0.0;
    double total() const { return core + constant; }
    double objective() const { return -total(); }
};

// The constant term of the log-likelihood:
//   sum_{i<j} [A_ij log(k_i k_j / 2m) - log(A_ij!)]
// + sum_i    [(A_ii/2) log(k_i^2 / 4m) - log((A_ii/2)!)]
// with the 0 log 0 = 0 convention for degree-zero pairs. Requires m >= 1.
double constant_term(const Graph& g);

// Core evaluated through block sums:
//   (1/2) sum_rs [m_rs log w_rs - (kappa_r kappa_s / 2m) w_rs]
// 0 log 0 = 0; a block with m_rs > 0 and w_rs = 0 yields core = -inf.
LikelihoodValue log_likelihood(const Graph& g, const Assignment& a, const AffinityMatrix& om);
double core_from_stats(const BlockStats& st, const AffinityMatrix& om);

// Closed-form maximizer of the core for a fixed assignment:
// w*_rs = 2m m_rs / (kappa_r kappa_s), and 0 when a group is empty.
AffinityMatrix m_step(const Graph& g, const Assignment& a);
AffinityMatrix m_step(const BlockStats& st);

// Core at the closed-form optimum:
//   (1/2) sum_{rs : m_rs > 0} m_rs log(2m m_rs / (kappa_r kappa_s)) - m
double profile_log_likelihood(const Graph& g, const BlockStats& st);
double profile_log_likelihood(const BlockStats& st);

// Edge weights from one vertex into each group, used for O(K + deg) move
// evaluation. self is the diagonal entry A_vv.
struct VertexIncidence {
    std::vector<long long> to_group; // length K, excludes the diagonal
    long long self = 0;
    int degree = 0;
};

VertexIncidence vertex_incidence(const Graph& g, const Assignment& a, int v);

// Change in profile_log_likelihood if vertex v (with incidence inc, currently
// in group r0) moved to group s. st is restored before returning. O(K).
double relocation_delta_eval(BlockStats& st, const VertexIncidence& inc, int r0, int s);

// In-place stats update for the same move, O(K).
void apply_relocation(BlockStats& st, const VertexIncidence& inc, int r0, int s);

// Moves vertex v to group s: updates a and st incrementally and returns the
// profile delta. s must differ from the current label.
double relocation_delta(const Graph& g, BlockStats& st, Assignment& a, int v, int s);

} // namespace dcsbm
