#pragma once

#include <string>
#include <vector>

#include "dcsbm/graph.hpp"

namespace dcsbm {

// Supporting line of the convex pair cost f_ij at breakpoint w_tilde:
// a w + b <= f_ij(w) for all w > 0, with equality at w_tilde.
struct TangentCut {
    int i = 0, j = 0;
    double w_tilde = 0.0;
    double a = 0.0; // -A_ij / w_tilde + k_i k_j / 2m
    double b = 0.0; // A_ij (1 - log w_tilde)
};

TangentCut tangent_cut(const Graph& g, int i, int j, double w_tilde);

// Pair cost f_ij(w) = -A_ij log w + (k_i k_j / 2m) w. Defined at w = 0 only
// when A_ij = 0 (value 0); +inf is returned for w = 0 with A_ij > 0.
double f_eval(const Graph& g, int i, int j, double w);

// Variable and function bounds derived from the graph:
// rho = max A_ij / (k_i k_j), omega in [1e-12, 2m rho], and per-pair bounds
// Mlow_ij <= f_ij <= Mup_ij over that interval.
struct BoundSet {
    double rho = 0.0;
    double omega_lower = 1e-12;
    double omega_upper = 0.0;
    std::vector<std::vector<double>> m_low; // n x n
    std::vector<std::vector<double>> m_up;  // n x n
};

BoundSet build_bounds(const Graph& g);

// A candidate solution point for cut separation: a K x K omega matrix and the
// set of active product cells y_ijrs = 1.
struct ActiveCell {
    int i = 0, j = 0, r = 0, s = 0;
};

struct MilpPoint {
    AffinityMatrix omega;
    std::vector<ActiveCell> active;
};

// Emits the tangent cut at the current omega value for every active cell
// whose true pair cost exceeds the piecewise-linear underestimate given by
// the existing cuts by more than eps. Empty result means eps-feasible.
std::vector<TangentCut> separate_cuts(const Graph& g, const MilpPoint& point,
                                      const std::vector<TangentCut>& existing, double eps);

// Breakpoint grid for the initial outer approximation: count log-spaced
// points on [max(omega_lower, 1e-3), omega_upper].
std::vector<double> initial_breakpoints(const BoundSet& bounds, int count);

struct MilpExportConfig {
    std::vector<double> breakpoints;
    double eps = 1e-6;
    bool sbc = true;
};

// Writes the linearized model in LP format plus a sidecar cut-recipe file
// (<path>.cuts) with one line per pair for lazy separation.
void export_milp(const Instance& inst, const BoundSet& bounds, const MilpExportConfig& cfg,
                 const std::string& path);
std::string milp_to_string(const Instance& inst, const BoundSet& bounds,
                           const MilpExportConfig& cfg);
std::string cut_recipe_to_string(const Instance& inst, const BoundSet& bounds,
                                 const MilpExportConfig& cfg);

} // namespace dcsbm
