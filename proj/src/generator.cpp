#include "dcsbm/generator.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcsbm {

StrengthRanges strength_ranges(Strength level) {
    switch (level) {
        case Strength::Low: return {0.4, 1.0, 0.2, 0.4};
        case Strength::Medium: return {0.6, 1.0, 0.1, 0.3};
        case Strength::High: return {0.8, 1.0, 0.0, 0.2};
    }
    throw std::invalid_argument("unknown strength level");
}

AffinityMatrix sample_omega(const GeneratorConfig& cfg, Rng& rng) {
    AffinityMatrix om(cfg.K);
    if (const S1Pair* p = std::get_if<S1Pair>(&cfg.omega_spec)) {
        if (cfg.K != 2) throw std::invalid_argument("sample_omega: S1 spec requires K = 2");
        om.set(0, 0, std::max(0.0, rng.uniform(p->omega_in - 0.1, p->omega_in + 0.1)));
        om.set(1, 1, std::max(0.0, rng.uniform(p->omega_in - 0.1, p->omega_in + 0.1)));
        om.set(0, 1, std::max(0.0, rng.uniform(p->omega_out - 0.1, p->omega_out + 0.1)));
    } else if (const S2Strength* sp = std::get_if<S2Strength>(&cfg.omega_spec)) {
        const StrengthRanges r = strength_ranges(sp->level);
        for (int d = 0; d < cfg.K; ++d)
            om.set(d, d, std::max(0.0, rng.uniform(r.diag_lo, r.diag_hi)));
        for (int a = 0; a < cfg.K; ++a)
            for (int b = a + 1; b < cfg.K; ++b)
                om.set(a, b, std::max(0.0, rng.uniform(r.off_lo, r.off_hi)));
    } else {
        const AffinityMatrix& fixed = std::get<AffinityMatrix>(cfg.omega_spec);
        if (fixed.K != cfg.K)
            throw std::invalid_argument("sample_omega: explicit matrix has wrong K");
        om = fixed;
    }
    return om;
}

Graph sample_graph(const GeneratorConfig& cfg, const AffinityMatrix& omega,
                   const Assignment& truth, Rng& rng) {
    const int n = cfg.n;
    if (truth.n() != n) throw std::invalid_argument("sample_graph: truth size mismatch");
    std::vector<double> theta = cfg.theta.empty() ? std::vector<double>(n, 1.0) : cfg.theta;
    if (static_cast<int>(theta.size()) != n)
        throw std::invalid_argument("sample_graph: theta size mismatch");
    for (double t : theta)
        if (!(t > 0.0)) throw std::invalid_argument("sample_graph: theta entries must be positive");

    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
        const int gi = truth.labels[i];
        const long loops = rng.poisson(0.5 * theta[i] * theta[i] * omega(gi, gi));
        adj[i][i] = static_cast<int>(2 * loops);
        for (int j = i + 1; j < n; ++j) {
            const long c = rng.poisson(theta[i] * theta[j] * omega(gi, truth.labels[j]));
            adj[i][j] = static_cast<int>(c);
            adj[j][i] = static_cast<int>(c);
        }
    }
    return Graph::from_adjacency(std::move(adj));
}

Instance generate(const GeneratorConfig& cfg, Rng& rng) {
    if (cfg.n < cfg.K || cfg.K < 1)
        throw std::invalid_argument("generate: need n >= K >= 1");
    constexpr int kMaxRedraws = 10000;
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        Assignment truth;
        truth.K = cfg.K;
        truth.labels.resize(cfg.n);
        for (int i = 0; i < cfg.n; ++i)
            truth.labels[i] = static_cast<int>(rng.uniform_int(cfg.K));

        AffinityMatrix omega = sample_omega(cfg, rng);
        Graph g = sample_graph(cfg, omega, truth, rng);

        if (cfg.reject_empty_truth) {
            std::vector<int> count(cfg.K, 0);
            for (int l : truth.labels) ++count[l];
            if (std::find(count.begin(), count.end(), 0) != count.end()) continue;
        }
        if (cfg.reject_isolated) {
            bool isolated = false;
            for (int i = 0; i < cfg.n; ++i)
                if (g.degree(i) == 0) {
                    isolated = true;
                    break;
                }
            if (isolated) continue;
        }
        if (g.m() == 0) continue;

        Instance inst;
        inst.graph = std::move(g);
        inst.K = cfg.K;
        inst.ground_truth = std::move(truth);
        inst.gen_omega = std::move(omega);
        inst.seed = cfg.seed;
        return inst;
    }
    throw std::runtime_error("generate: rejection budget exhausted (10^4 redraws)");
}

Instance generate(const GeneratorConfig& cfg) {
    Rng rng(cfg.seed);
    return generate(cfg, rng);
}

} // namespace dcsbm
