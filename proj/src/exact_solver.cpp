#include "dcsbm/exact_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dcsbm/em.hpp"
#include "dcsbm/likelihood.hpp"

namespace dcsbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPruneTol = 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> vertex_order(const Graph& g, VertexOrder ord) {
    std::vector<int> order(g.n());
    std::iota(order.begin(), order.end(), 0);
    if (ord == VertexOrder::DegreeDesc)
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return g.degree(a) > g.degree(b); });
    return order;
}

// min over [lo, hi] of -m_rs log w + (kk / 2m) w, via the clamped stationary
// point; 0 for edge-free blocks, matching the profile convention.
double block_min(long long m_rs, long long kr, long long ks, long long two_m, double lo,
                 double hi) {
    if (m_rs == 0) return 0.0;
    const double rate = static_cast<double>(kr) * static_cast<double>(ks) / two_m;
    double w = static_cast<double>(m_rs) / rate; // = 2m m_rs / (kr ks)
    w = std::clamp(w, lo, hi);
    return -static_cast<double>(m_rs) * std::log(w) + rate * w;
}

// Branch-and-bound state for solve_exact.
struct MlSearch {
    const Graph& g;
    const BoundSet& bounds;
    int K;
    bool sbc;
    double constant;
    std::vector<int> order;        // search position -> vertex
    std::vector<double> s_pref;    // sum of Mlow over ordered pairs within first d vertices
    double s_all = 0.0;

    std::vector<long long> m_rs;   // K x K partial block stats
    std::vector<long long> kappa;
    std::vector<int> label;        // per vertex, -1 = unassigned

    double incumbent = kInf;
    std::vector<int> best_label;
    long long nodes = 0;
    double root_bound = -kInf;     // valid global lower bound throughout the run
    double frontier_lb = kInf;     // min bound over subproblems cut off by the time limit
    bool timed_out = false;

    Clock::time_point t0;
    double time_limit;
    const std::function<void(const TraceEvent&)>* trace;

    MlSearch(const Graph& graph, const BoundSet& bs, int k, const SolveConfig& cfg)
        : g(graph), bounds(bs), K(k), sbc(cfg.use_sbc), constant(constant_term(graph)),
          order(vertex_order(graph, cfg.vertex_order)),
          m_rs(static_cast<size_t>(k) * k, 0), kappa(k, 0), label(graph.n(), -1),
          t0(Clock::now()), time_limit(cfg.time_limit_s), trace(&cfg.trace) {
        const int n = g.n();
        s_pref.assign(n + 1, 0.0);
        for (int d = 0; d < n; ++d) {
            const int v = order[d];
            double add = bounds.m_low[v][v];
            for (int e = 0; e < d; ++e) add += 2.0 * bounds.m_low[order[e]][v];
            s_pref[d + 1] = s_pref[d] + add;
        }
        s_all = s_pref[n];
    }

    long long& m(int r, int s) { return m_rs[static_cast<size_t>(r) * K + s]; }

    void assign(int v, int c) {
        kappa[c] += g.degree(v);
        m(c, c) += g.adj(v, v);
        for (const auto& [u, w] : g.neighbors(v))
            if (label[u] >= 0) {
                m(c, label[u]) += w;
                m(label[u], c) += w;
            }
        label[v] = c;
    }

    void unassign(int v, int c) {
        label[v] = -1;
        kappa[c] -= g.degree(v);
        m(c, c) -= g.adj(v, v);
        for (const auto& [u, w] : g.neighbors(v))
            if (label[u] >= 0) {
                m(c, label[u]) -= w;
                m(label[u], c) -= w;
            }
    }

    double node_bound(int depth) {
        double acc = 0.0;
        for (int r = 0; r < K; ++r)
            for (int s = 0; s < K; ++s)
                acc += block_min(m(r, s), kappa[r], kappa[s], 2 * g.m(), bounds.omega_lower,
                                 bounds.omega_upper);
        return 0.5 * (acc + (s_all - s_pref[depth])) - constant;
    }

    void accept_incumbent(double obj) {
        incumbent = obj;
        best_label = label;
        if (*trace) {
            TraceEvent ev;
            ev.t_s = seconds_since(t0);
            ev.incumbent = incumbent;
            ev.bound = root_bound;
            ev.nodes = nodes;
            (*trace)(ev);
        }
    }

    void dfs(int depth, int groups_used) {
        if (timed_out) return;
        if (depth == g.n()) {
            ++nodes;
            const double obj = node_bound(depth); // tight at leaves
            if (obj < incumbent - kPruneTol) accept_incumbent(obj);
            return;
        }
        const int v = order[depth];
        const int max_label = sbc ? std::min(groups_used, K - 1) : K - 1;
        for (int c = 0; c <= max_label; ++c) {
            assign(v, c);
            const double lb = node_bound(depth + 1);
            if (lb >= incumbent - kPruneTol) {
                ++nodes; // pruned subproblem
            } else if (seconds_since(t0) > time_limit) {
                timed_out = true;
                frontier_lb = std::min(frontier_lb, lb);
            } else {
                dfs(depth + 1, std::max(groups_used, c + 1));
                if (timed_out) frontier_lb = std::min(frontier_lb, lb);
            }
            unassign(v, c);
            if (timed_out) {
                // siblings c+1.. were never bounded; this prefix's own bound
                // covers them
                if (c < max_label) frontier_lb = std::min(frontier_lb, node_bound(depth));
                return;
            }
        }
    }
};

} // namespace

SolveReport solve_exact(const Instance& inst, const SolveConfig& cfg) {
    const Graph& g = inst.graph;
    if (g.m() < 1) throw std::invalid_argument("solve_exact: graph has no edges");
    const auto t0 = Clock::now();
    const int K = std::min(inst.K, g.n());
    const BoundSet bounds = build_bounds(g);

    MlSearch search(g, bounds, K, cfg);

    // warm start: one deterministic profile local search seeds the incumbent
    {
        Rng warm_rng(0x5eedULL);
        TrialResult warm = em_ls2(inst, warm_rng, EmConfig{});
        search.incumbent = warm.objective;
        search.best_label = warm.assignment.labels;
    }

    search.root_bound = search.node_bound(0);
    search.dfs(0, 0);

    SolveReport rep;
    rep.nodes = search.nodes;
    rep.wall_time_s = seconds_since(t0);
    Assignment raw;
    raw.K = inst.K;
    raw.labels = search.best_label;
    rep.best = canonicalize(raw);
    rep.best.K = inst.K;
    rep.omega = m_step(g, rep.best);
    rep.objective = search.incumbent;
    if (search.timed_out) {
        rep.status = "time-limit";
        rep.bound = std::min(search.frontier_lb, search.incumbent - kPruneTol);
        rep.gap = (rep.objective - rep.bound) / rep.objective;
    } else {
        rep.status = "optimal";
        rep.bound = rep.objective;
        rep.gap = 0.0;
    }
    return rep;
}

namespace {

// Branch-and-bound over all K^n labelings at fixed omega.
struct EstepSearch {
    const Graph& g;
    int K;
    std::vector<double> cell_cost;  // pair (i,j) x cell (r,s)
    std::vector<double> t_pref;     // frontier min-cost prefix sums, input order
    double t_all = 0.0;

    std::vector<int> label;
    double prefix_cost = 0.0;

    double best = kInf;
    std::vector<int> best_label;
    bool timed_out = false;

    Clock::time_point t0;
    double time_limit;

    EstepSearch(const Graph& graph, const AffinityMatrix& om, double limit)
        : g(graph), K(om.K), label(graph.n(), -1), t0(Clock::now()), time_limit(limit) {
        const int n = g.n();
        cell_cost.assign(static_cast<size_t>(n) * n * K * K, 0.0);
        std::vector<double> pair_min(static_cast<size_t>(n) * n, kInf);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double mn = kInf;
                for (int r = 0; r < K; ++r)
                    for (int s = 0; s < K; ++s) {
                        const double w = om(r, s);
                        double c;
                        if (w <= 0.0)
                            c = g.adj(i, j) > 0 ? kInf : 0.0;
                        else
                            c = f_eval(g, i, j, w);
                        cost(i, j, r, s) = c;
                        mn = std::min(mn, c);
                    }
                pair_min[static_cast<size_t>(i) * n + j] = mn;
            }
        t_pref.assign(n + 1, 0.0);
        for (int d = 0; d < n; ++d) {
            double add = 0.5 * pair_min[static_cast<size_t>(d) * n + d];
            for (int e = 0; e < d; ++e) add += pair_min[static_cast<size_t>(e) * n + d];
            t_pref[d + 1] = t_pref[d] + add;
        }
        t_all = t_pref[n];
    }

    double& cost(int i, int j, int r, int s) {
        return cell_cost[((static_cast<size_t>(i) * g.n() + j) * K + r) * K + s];
    }

    // weighted cost of the pairs vertex v forms with the assigned prefix
    double attach_cost(int v, int c) {
        double add = 0.5 * cost(v, v, c, c);
        for (int u = 0; u < v; ++u) add += cost(u, v, label[u], c);
        return add;
    }

    void dfs(int depth) {
        if (timed_out) return;
        if (depth == g.n()) {
            if (prefix_cost < best) {
                best = prefix_cost;
                best_label = label;
            }
            return;
        }
        if (seconds_since(t0) > time_limit) {
            timed_out = true;
            return;
        }
        for (int c = 0; c < K; ++c) {
            const double add = attach_cost(depth, c);
            const double lb = prefix_cost + add + (t_all - t_pref[depth + 1]);
            if (lb >= best) continue;
            label[depth] = c;
            prefix_cost += add;
            dfs(depth + 1);
            prefix_cost -= add;
            label[depth] = -1;
            if (timed_out) return;
        }
    }
};

} // namespace

EstepResult solve_estep_exact(const Instance& inst, const AffinityMatrix& om,
                              const EstepConfig& cfg) {
    const Graph& g = inst.graph;
    if (g.m() < 1) throw std::invalid_argument("solve_estep_exact: graph has no edges");
    if (om.K != inst.K) throw std::invalid_argument("solve_estep_exact: omega K mismatch");

    EstepSearch search(g, om, cfg.time_limit_s);
    search.dfs(0);

    EstepResult res;
    res.proven_optimal = !search.timed_out;
    res.assignment.K = inst.K;
    if (search.best_label.empty()) {
        // no complete labeling visited before the time limit
        res.assignment.labels.assign(g.n(), 0);
        res.proven_optimal = false;
    } else {
        res.assignment.labels = search.best_label;
    }
    return res;
}

} // namespace dcsbm
