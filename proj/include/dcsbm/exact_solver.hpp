#pragma once

#include <functional>
#include <string>

#include "dcsbm/graph.hpp"
#include "dcsbm/relaxation.hpp"

namespace dcsbm {

enum class VertexOrder { DegreeDesc, Input };

struct TraceEvent {
    double t_s = 0.0;
    double incumbent = 0.0;
    double bound = 0.0;
    long long nodes = 0;
};

struct SolveConfig {
    double time_limit_s = 60.0;
    VertexOrder vertex_order = VertexOrder::DegreeDesc;
    bool use_sbc = true;
    std::function<void(const TraceEvent&)> trace; // called on incumbent updates
};

struct SolveReport {
    Assignment best;        // canonical labeling
    AffinityMatrix omega;   // closed-form optimum for best
    double objective = 0.0; // negative log-likelihood incl. constant
    double bound = 0.0;     // global lower bound at termination
    double gap = 0.0;       // (UB - LB) / UB, 0 when optimal
    std::string status;     // "optimal" | "time-limit"
    long long nodes = 0;    // resolved subproblems: leaves evaluated + pruned
    double wall_time_s = 0.0;
};

// Provably optimal maximum-likelihood assignment by depth-first
// branch-and-bound. With use_sbc the search runs over restricted-growth
// prefixes (each vertex takes a used label or opens one new label); node
// bounds combine the closed-form per-block minimum over assigned pairs with
// the global per-pair minima Mlow over frontier pairs. Requires m >= 1.
SolveReport solve_exact(const Instance& inst, const SolveConfig& cfg = {});

struct EstepConfig {
    double time_limit_s = 60.0;
};

struct EstepResult {
    Assignment assignment;
    bool proven_optimal = true;
};

// Globally optimal assignment for a fixed affinity matrix, over all K^n
// labelings (labels are distinguishable once omega is fixed, so no symmetry
// breaking applies). Cells with omega = 0 that would host an edge carry
// infinite cost. Ties resolve to the first assignment in lexicographic
// (canonical) order.
EstepResult solve_estep_exact(const Instance& inst, const AffinityMatrix& om,
                              const EstepConfig& cfg = {});

} // namespace dcsbm
