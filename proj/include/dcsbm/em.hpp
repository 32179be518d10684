#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dcsbm/graph.hpp"
#include "dcsbm/rng.hpp"

namespace dcsbm {

enum class EmVariant { LS1, LS2, Exact };

struct EmConfig {
    EmVariant variant = EmVariant::LS2;
    int trials = 50;
    std::uint64_t seed = 0;
    long max_relocations = 10000;     // per-trial safety cap
    long max_em_rounds = 1000;        // EM-exact safety cap
    double estep_time_limit_s = 60.0; // EM-exact only
};

struct TrialResult {
    Assignment assignment;
    AffinityMatrix omega;      // m_step at the final assignment
    double objective = 0.0;    // negative log-likelihood incl. constant
    long iterations = 0;       // accepted relocations (LS) or EM rounds (exact)
    double wall_time_s = 0.0;
    bool converged = true;
};

// One trial each, starting from uniform random labels drawn from rng.
// LS1: relocations evaluated at fixed omega, re-estimated only between
// rounds of local search. LS2: each candidate relocation is scored under the
// re-optimized omega, i.e. by the profile likelihood delta. Exact: alternates
// the closed-form M-step with a globally optimal E-step.
// First-improvement acceptance, vertices in index order, groups in index
// order; deltas below 1e-12 are not accepted.
TrialResult em_ls1(const Instance& inst, Rng& rng, const EmConfig& cfg);
TrialResult em_ls2(const Instance& inst, Rng& rng, const EmConfig& cfg);
TrialResult em_exact(const Instance& inst, Rng& rng, const EmConfig& cfg);

TrialResult run_em_variant(const Instance& inst, Rng& rng, const EmConfig& cfg);

struct TrialsSummary {
    double mean_objective = 0.0;
    double min_objective = 0.0;
    double mean_gap_pct = 0.0; // vs the supplied reference; 0 when none given
    double mean_time_s = 0.0;
    int converged = 0;
};

struct TrialsOutcome {
    std::vector<TrialResult> trials;
    TrialsSummary summary;
};

// Independent trials with per-trial seeds derive_seed(cfg.seed, trial index);
// results are reported in trial order, so the outcome does not depend on the
// number of worker threads (0 = machine parallelism).
TrialsOutcome run_trials(const Instance& inst, const EmConfig& cfg,
                         std::optional<double> bks = std::nullopt, int threads = 1);

} // namespace dcsbm
