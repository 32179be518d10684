#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dcsbm/graph.hpp"
#include "dcsbm/rng.hpp"

namespace dcsbm {

// Two-community setting: omega_11, omega_22 ~ U(in-0.1, in+0.1) and
// omega_12 ~ U(out-0.1, out+0.1).
struct S1Pair {
    double omega_in = 0.0;
    double omega_out = 0.0;
};

enum class Strength { Low, Medium, High };

struct S2Strength {
    Strength level = Strength::Low;
};

// Closed sampling intervals for diagonal / off-diagonal entries per strength.
struct StrengthRanges {
    double diag_lo, diag_hi;
    double off_lo, off_hi;
};

StrengthRanges strength_ranges(Strength level);

using OmegaSpec = std::variant<S1Pair, S2Strength, AffinityMatrix>;

struct GeneratorConfig {
    int n = 8;
    int K = 2;
    OmegaSpec omega_spec = S1Pair{0.9, 0.1};
    std::vector<double> theta;      // per-vertex degree propensity; empty = all 1.0
    std::uint64_t seed = 0;
    bool reject_isolated = true;
    bool reject_empty_truth = true;
};

// Draws the affinity matrix for the configured spec. Entries are clamped at
// zero from below; uniform draws are on half-open [a,b).
AffinityMatrix sample_omega(const GeneratorConfig& cfg, Rng& rng);

// Poisson multigraph conditioned on (omega, truth): A_ij ~ Pois(th_i th_j w)
// for i < j and the self-loop count at i ~ Pois(th_i^2 w / 2), stored as
// A_ii = 2 * count. Draw order is the upper triangle row by row, diagonal
// entry first in each row.
Graph sample_graph(const GeneratorConfig& cfg, const AffinityMatrix& omega,
                   const Assignment& truth, Rng& rng);

// Truth labels uniform per vertex, then omega, then the graph; redraws the
// whole triple while a rejection flag fires (empty truth community, isolated
// vertex, or m = 0), up to 10^4 attempts.
Instance generate(const GeneratorConfig& cfg, Rng& rng);
Instance generate(const GeneratorConfig& cfg); // seeds an Rng from cfg.seed

} // namespace dcsbm
