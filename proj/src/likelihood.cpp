#include "dcsbm/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dcsbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// m_rs log(2m m_rs / (kappa_r kappa_s)), the profile contribution of one
// block; 0 when the block carries no edges.
double block_profile_term(long long m_rs, long long kr, long long ks, long long two_m) {
    if (m_rs == 0) return 0.0;
    return static_cast<double>(m_rs) *
           std::log(static_cast<double>(two_m) * m_rs /
                    (static_cast<double>(kr) * static_cast<double>(ks)));
}

} // namespace

BlockStats::BlockStats(const Graph& g, const Assignment& a) {
    if (a.n() != g.n()) throw std::invalid_argument("block stats: assignment size mismatch");
    K = a.K;
    two_m = 2 * g.m();
    m_rs.assign(static_cast<size_t>(K) * K, 0);
    kappa.assign(K, 0);
    for (int i = 0; i < g.n(); ++i) {
        const int r = a.labels[i];
        kappa[r] += g.degree(i);
        m(r, r) += g.adj(i, i);
        for (const auto& [j, w] : g.neighbors(i)) {
            m(r, a.labels[j]) += w;
        }
    }
}

bool BlockStats::consistent() const {
    long long sm = 0, sk = 0;
    for (long long v : m_rs) {
        if (v < 0) return false;
        sm += v;
    }
    for (long long v : kappa) {
        if (v < 0) return false;
        sk += v;
    }
    return sm == two_m && sk == two_m;
}

double constant_term(const Graph& g) {
    if (g.m() < 1) throw std::invalid_argument("constant_term: graph has no edges");
    const double two_m = 2.0 * g.m();
    double c = 0.0;
    for (int i = 0; i < g.n(); ++i) {
        const double ki = g.degree(i);
        for (int j = i + 1; j < g.n(); ++j) {
            const int a = g.adj(i, j);
            if (a > 0) c += a * std::log(ki * g.degree(j) / two_m) - std::lgamma(a + 1.0);
        }
        const int half_loops = g.adj(i, i) / 2;
        if (half_loops > 0)
            c += half_loops * std::log(ki * ki / (2.0 * two_m)) - std::lgamma(half_loops + 1.0);
    }
    return c;
}

double core_from_stats(const BlockStats& st, const AffinityMatrix& om) {
    if (om.K != st.K) throw std::invalid_argument("core: omega dimension mismatch");
    double acc = 0.0;
    for (int r = 0; r < st.K; ++r)
        for (int s = 0; s < st.K; ++s) {
            const double w = om(r, s);
            const long long mrs = st.m(r, s);
            if (mrs > 0) {
                if (w <= 0.0) return -kInf;
                acc += static_cast<double>(mrs) * std::log(w);
            }
            acc -= static_cast<double>(st.kappa[r]) * st.kappa[s] / st.two_m * w;
        }
    return 0.5 * acc;
}

LikelihoodValue log_likelihood(const Graph& g, const Assignment& a, const AffinityMatrix& om) {
    if (g.m() < 1) throw std::invalid_argument("log_likelihood: graph has no edges");
    BlockStats st(g, a);
    LikelihoodValue v;
    v.core = core_from_stats(st, om);
    v.constant = constant_term(g);
    return v;
}

AffinityMatrix m_step(const BlockStats& st) {
    AffinityMatrix om(st.K);
    for (int r = 0; r < st.K; ++r)
        for (int s = r; s < st.K; ++s) {
            const double kk = static_cast<double>(st.kappa[r]) * st.kappa[s];
            om.set(r, s, kk > 0.0 ? static_cast<double>(st.two_m) * st.m(r, s) / kk : 0.0);
        }
    return om;
}

AffinityMatrix m_step(const Graph& g, const Assignment& a) {
    BlockStats st(g, a);
    return m_step(st);
}

double profile_log_likelihood(const BlockStats& st) {
    double acc = 0.0;
    for (int r = 0; r < st.K; ++r)
        for (int s = 0; s < st.K; ++s)
            acc += block_profile_term(st.m(r, s), st.kappa[r], st.kappa[s], st.two_m);
    return 0.5 * acc - static_cast<double>(st.two_m) / 2.0;
}

double profile_log_likelihood(const Graph& g, const BlockStats& st) {
    (void)g;
    return profile_log_likelihood(st);
}

VertexIncidence vertex_incidence(const Graph& g, const Assignment& a, int v) {
    VertexIncidence inc;
    inc.to_group.assign(a.K, 0);
    inc.self = g.adj(v, v);
    inc.degree = g.degree(v);
    for (const auto& [j, w] : g.neighbors(v)) inc.to_group[a.labels[j]] += w;
    return inc;
}

namespace {

// Sum of profile terms over all cells in rows/columns r0 and s, each cell
// counted once.
double affected_sum(const BlockStats& st, int r0, int s) {
    double acc = 0.0;
    for (int t = 0; t < st.K; ++t) {
        acc += block_profile_term(st.m(r0, t), st.kappa[r0], st.kappa[t], st.two_m);
        acc += block_profile_term(st.m(t, r0), st.kappa[t], st.kappa[r0], st.two_m);
        acc += block_profile_term(st.m(s, t), st.kappa[s], st.kappa[t], st.two_m);
        acc += block_profile_term(st.m(t, s), st.kappa[t], st.kappa[s], st.two_m);
    }
    // the four intersection cells were counted twice
    acc -= block_profile_term(st.m(r0, r0), st.kappa[r0], st.kappa[r0], st.two_m);
    acc -= block_profile_term(st.m(r0, s), st.kappa[r0], st.kappa[s], st.two_m);
    acc -= block_profile_term(st.m(s, r0), st.kappa[s], st.kappa[r0], st.two_m);
    acc -= block_profile_term(st.m(s, s), st.kappa[s], st.kappa[s], st.two_m);
    return acc;
}

} // namespace

void apply_relocation(BlockStats& st, const VertexIncidence& inc, int r0, int s) {
    for (int t = 0; t < st.K; ++t) {
        const long long e = inc.to_group[t];
        if (e == 0) continue;
        st.m(r0, t) -= e;
        st.m(t, r0) -= e;
        st.m(s, t) += e;
        st.m(t, s) += e;
    }
    st.m(r0, r0) -= inc.self;
    st.m(s, s) += inc.self;
    st.kappa[r0] -= inc.degree;
    st.kappa[s] += inc.degree;
}

double relocation_delta_eval(BlockStats& st, const VertexIncidence& inc, int r0, int s) {
    if (inc.degree == 0 && inc.self == 0) return 0.0;
    // evaluate before/after on the affected rows and columns only
    const double before = affected_sum(st, r0, s);
    apply_relocation(st, inc, r0, s);
    const double after = affected_sum(st, r0, s);
    apply_relocation(st, inc, s, r0); // undo, integer-exact
    return 0.5 * (after - before);
}

double relocation_delta(const Graph& g, BlockStats& st, Assignment& a, int v, int s) {
    if (s < 0 || s >= st.K) throw std::invalid_argument("relocation: group index out of range");
    const int r0 = a.labels[v];
    if (s == r0) throw std::invalid_argument("relocation: target equals current group");
    const VertexIncidence inc = vertex_incidence(g, a, v);
    const double delta = relocation_delta_eval(st, inc, r0, s);
    apply_relocation(st, inc, r0, s);
    a.labels[v] = s;
    return delta;
}

} // namespace dcsbm
