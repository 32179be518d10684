#include "dcsbm/em.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "dcsbm/exact_solver.hpp"
#include "dcsbm/likelihood.hpp"

namespace dcsbm {

namespace {

constexpr double kMoveTol = 1e-12;  // minimum accepted improvement per move
constexpr double kOuterTol = 1e-9;  // outer-loop convergence threshold
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Assignment random_assignment(int n, int K, Rng& rng) {
    Assignment a;
    a.K = K;
    a.labels.resize(n);
    for (int i = 0; i < n; ++i) a.labels[i] = static_cast<int>(rng.uniform_int(K));
    return a;
}

// core change for moving vertex v from r0 to s at fixed omega, using the
// neighbor-group weights in inc; -inf when the move lands edges on a zero cell
double fixed_omega_delta(const BlockStats& st, const VertexIncidence& inc,
                         const AffinityMatrix& om, const std::vector<double>& log_om, int r0,
                         int s) {
    const int K = st.K;
    const double two_m = static_cast<double>(st.two_m);
    const double kv = static_cast<double>(inc.degree);
    double delta = 0.0;
    for (int t = 0; t < K; ++t) {
        const long long e = inc.to_group[t];
        if (e > 0) {
            const double lw_new = log_om[static_cast<size_t>(s) * K + t];
            const double lw_old = log_om[static_cast<size_t>(r0) * K + t];
            if (lw_new == -kInf) return -kInf;
            delta += static_cast<double>(e) * (lw_new - lw_old);
        }
        const double d_t = static_cast<double>(st.kappa[t]) - (t == r0 ? kv : 0.0);
        delta -= kv / two_m * d_t * (om(s, t) - om(r0, t));
    }
    if (inc.self > 0) {
        const double lw_new = log_om[static_cast<size_t>(s) * K + s];
        const double lw_old = log_om[static_cast<size_t>(r0) * K + r0];
        if (lw_new == -kInf) return -kInf;
        delta += 0.5 * static_cast<double>(inc.self) * (lw_new - lw_old);
    }
    delta -= kv * kv / (2.0 * two_m) * (om(s, s) - om(r0, r0));
    return delta;
}

struct LsOutcome {
    long relocations = 0;
    bool capped = false;
};

// first-improvement scan until a full pass accepts nothing, at fixed omega
LsOutcome local_search_fixed_omega(const Graph& g, BlockStats& st, Assignment& a,
                                   const AffinityMatrix& om, long cap, long used) {
    const int K = st.K;
    std::vector<double> log_om(static_cast<size_t>(K) * K);
    for (int r = 0; r < K; ++r)
        for (int s = 0; s < K; ++s)
            log_om[static_cast<size_t>(r) * K + s] = om(r, s) > 0.0 ? std::log(om(r, s)) : -kInf;

    LsOutcome out;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int v = 0; v < g.n(); ++v) {
            VertexIncidence inc = vertex_incidence(g, a, v);
            for (int s = 0; s < K; ++s) {
                const int r0 = a.labels[v];
                if (s == r0) continue;
                const double delta = fixed_omega_delta(st, inc, om, log_om, r0, s);
                if (delta > kMoveTol) {
                    apply_relocation(st, inc, r0, s);
                    a.labels[v] = s;
                    improved = true;
                    if (++out.relocations + used >= cap) {
                        out.capped = true;
                        return out;
                    }
                }
            }
        }
    }
    return out;
}

} // namespace

TrialResult em_ls1(const Instance& inst, Rng& rng, const EmConfig& cfg) {
    const Graph& g = inst.graph;
    if (g.m() < 1) throw std::invalid_argument("em_ls1: graph has no edges");
    const auto t0 = Clock::now();
    const double constant = constant_term(g);

    Assignment a = random_assignment(g.n(), inst.K, rng);
    BlockStats st(g, a);

    TrialResult res;
    res.converged = true;
    double profile_prev = -kInf;
    for (;;) {
        const AffinityMatrix om = m_step(st);
        LsOutcome pass =
            local_search_fixed_omega(g, st, a, om, cfg.max_relocations, res.iterations);
        res.iterations += pass.relocations;
        if (pass.capped) {
            res.converged = false;
            break;
        }
        const double profile = profile_log_likelihood(st);
        if (profile <= profile_prev + kOuterTol) break;
        profile_prev = profile;
    }

    res.assignment = a;
    res.omega = m_step(st);
    res.objective = -(profile_log_likelihood(st) + constant);
    res.wall_time_s = seconds_since(t0);
    return res;
}

TrialResult em_ls2(const Instance& inst, Rng& rng, const EmConfig& cfg) {
    const Graph& g = inst.graph;
    if (g.m() < 1) throw std::invalid_argument("em_ls2: graph has no edges");
    const auto t0 = Clock::now();
    const double constant = constant_term(g);

    Assignment a = random_assignment(g.n(), inst.K, rng);
    BlockStats st(g, a);

    TrialResult res;
    res.converged = true;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int v = 0; v < g.n(); ++v) {
            VertexIncidence inc = vertex_incidence(g, a, v);
            for (int s = 0; s < st.K; ++s) {
                const int r0 = a.labels[v];
                if (s == r0) continue;
                const double delta = relocation_delta_eval(st, inc, r0, s);
                if (delta > kMoveTol) {
                    apply_relocation(st, inc, r0, s);
                    a.labels[v] = s;
                    improved = true;
                    if (++res.iterations >= cfg.max_relocations) {
                        res.converged = false;
                        improved = false;
                        break;
                    }
                }
            }
            if (!res.converged) break;
        }
    }

    res.assignment = a;
    res.omega = m_step(st);
    res.objective = -(profile_log_likelihood(st) + constant);
    res.wall_time_s = seconds_since(t0);
    return res;
}

TrialResult em_exact(const Instance& inst, Rng& rng, const EmConfig& cfg) {
    const Graph& g = inst.graph;
    if (g.m() < 1) throw std::invalid_argument("em_exact: graph has no edges");
    const auto t0 = Clock::now();
    const double constant = constant_term(g);

    Assignment a = random_assignment(g.n(), inst.K, rng);

    TrialResult res;
    res.converged = true;
    double obj_prev = kInf;
    for (long round = 0; round < cfg.max_em_rounds; ++round) {
        const AffinityMatrix om = m_step(g, a);
        EstepResult estep = solve_estep_exact(inst, om, EstepConfig{cfg.estep_time_limit_s});
        if (!estep.proven_optimal) {
            res.converged = false;
            break;
        }
        BlockStats st(g, estep.assignment);
        const double obj = -(profile_log_likelihood(st) + constant);
        ++res.iterations;
        if (obj < obj_prev - kOuterTol) {
            a = estep.assignment;
            obj_prev = obj;
        } else {
            if (obj < obj_prev) a = estep.assignment;
            break;
        }
    }

    BlockStats st(g, a);
    res.assignment = a;
    res.omega = m_step(st);
    res.objective = -(profile_log_likelihood(st) + constant);
    res.wall_time_s = seconds_since(t0);
    return res;
}

TrialResult run_em_variant(const Instance& inst, Rng& rng, const EmConfig& cfg) {
    switch (cfg.variant) {
        case EmVariant::LS1: return em_ls1(inst, rng, cfg);
        case EmVariant::LS2: return em_ls2(inst, rng, cfg);
        case EmVariant::Exact: return em_exact(inst, rng, cfg);
    }
    throw std::invalid_argument("unknown EM variant");
}

TrialsOutcome run_trials(const Instance& inst, const EmConfig& cfg, std::optional<double> bks,
                         int threads) {
    if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    TrialsOutcome out;
    out.trials.resize(cfg.trials);
    auto run_one = [&](int t) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        out.trials[t] = run_em_variant(inst, rng, cfg);
    };
    const unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    if (workers <= 1 || cfg.trials == 1) {
        for (int t = 0; t < cfg.trials; ++t) run_one(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<unsigned>(workers, cfg.trials); ++w)
            pool.emplace_back([&] {
                for (int t; (t = next.fetch_add(1)) < cfg.trials;) run_one(t);
            });
        for (auto& th : pool) th.join();
    }

    TrialsSummary& s = out.summary;
    s.min_objective = kInf;
    for (const TrialResult& tr : out.trials) {
        s.mean_objective += tr.objective;
        s.min_objective = std::min(s.min_objective, tr.objective);
        s.mean_time_s += tr.wall_time_s;
        if (tr.converged) ++s.converged;
        if (bks && *bks != 0.0) s.mean_gap_pct += 100.0 * (tr.objective - *bks) / *bks;
    }
    const double nt = static_cast<double>(out.trials.size());
    s.mean_objective /= nt;
    s.mean_time_s /= nt;
    s.mean_gap_pct /= nt;
    return out;
}

} // namespace dcsbm
