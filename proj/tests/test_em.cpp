#include <doctest.h>

#include <cmath>

#include "dcsbm/em.hpp"
#include "dcsbm/exact_solver.hpp"
#include "dcsbm/likelihood.hpp"
#include "test_util.hpp"

using namespace dcsbm;

namespace {

Instance make_instance(Graph g, int K) {
    Instance inst;
    inst.graph = std::move(g);
    inst.K = K;
    return inst;
}

// objective of the initial assignment a trial draws from its rng stream
double initial_objective(const Instance& inst, std::uint64_t trial_seed) {
    Rng rng(trial_seed);
    Assignment a = testutil::random_labels(rng, inst.graph.n(), inst.K);
    return testutil::objective_pairwise(inst.graph, a);
}

} // namespace

TEST_SUITE_BEGIN("em");

TEST_CASE("LS1 results are fixed points of the fixed-omega relocation search") {
    Rng seeds(61);
    for (int t = 0; t < 10; ++t) {
        Instance inst = make_instance(testutil::random_multigraph(seeds, 8), 2);
        Rng rng(seeds.next_u64());
        TrialResult res = em_ls1(inst, rng, EmConfig{});
        CHECK(res.converged);

        const AffinityMatrix om = m_step(inst.graph, res.assignment);
        const double base = testutil::core_pairwise(inst.graph, res.assignment, om);
        for (int v = 0; v < inst.graph.n(); ++v)
            for (int s = 0; s < inst.K; ++s) {
                if (s == res.assignment.labels[v]) continue;
                Assignment moved = res.assignment;
                moved.labels[v] = s;
                CHECK(testutil::core_pairwise(inst.graph, moved, om) <= base + 1e-9);
            }
    }
}

TEST_CASE("LS2 results are profile local optima") {
    Rng seeds(62);
    for (int t = 0; t < 10; ++t) {
        Instance inst = make_instance(testutil::random_multigraph(seeds, 8), 3);
        Rng rng(seeds.next_u64());
        TrialResult res = em_ls2(inst, rng, EmConfig{});
        CHECK(res.converged);

        BlockStats st(inst.graph, res.assignment);
        const double base = profile_log_likelihood(inst.graph, st);
        for (int v = 0; v < inst.graph.n(); ++v)
            for (int s = 0; s < inst.K; ++s) {
                if (s == res.assignment.labels[v]) continue;
                Assignment moved = res.assignment;
                moved.labels[v] = s;
                CHECK(profile_log_likelihood(inst.graph, BlockStats(inst.graph, moved)) <=
                      base + 1e-9);
            }
        // reported objective is consistent with the assignment
        CHECK(res.objective ==
              doctest::Approx(testutil::objective_pairwise(inst.graph, res.assignment))
                  .epsilon(1e-9));
    }
}

TEST_CASE("trials never end worse than they started") {
    Rng seeds(63);
    for (int t = 0; t < 8; ++t) {
        Instance inst = make_instance(testutil::random_multigraph(seeds, 8), 2);
        const std::uint64_t trial_seed = seeds.next_u64();
        for (auto variant : {EmVariant::LS1, EmVariant::LS2, EmVariant::Exact}) {
            EmConfig cfg;
            cfg.variant = variant;
            Rng rng(trial_seed);
            TrialResult res = run_em_variant(inst, rng, cfg);
            CHECK(res.objective <= initial_objective(inst, trial_seed) + 1e-9);
        }
    }
}

TEST_CASE("all variants stay above the exact optimum") {
    Rng seeds(64);
    for (int t = 0; t < 6; ++t) {
        Instance inst = make_instance(testutil::random_multigraph(seeds, 7), 2);
        const double optimum = solve_exact(inst).objective;
        for (auto variant : {EmVariant::LS1, EmVariant::LS2, EmVariant::Exact}) {
            EmConfig cfg;
            cfg.variant = variant;
            cfg.trials = 10;
            cfg.seed = seeds.next_u64();
            TrialsOutcome out = run_trials(inst, cfg);
            for (const TrialResult& tr : out.trials) CHECK(tr.objective >= optimum - 1e-9);
        }
    }
}

TEST_CASE("EM-exact reaches a fixed point of alternating optimal steps") {
    Rng seeds(65);
    for (int t = 0; t < 6; ++t) {
        Instance inst = make_instance(testutil::random_multigraph(seeds, 7), 2);
        Rng rng(seeds.next_u64());
        TrialResult res = em_exact(inst, rng, EmConfig{});
        CHECK(res.converged);
        // one more optimal E-step cannot improve the objective
        EstepResult estep = solve_estep_exact(inst, m_step(inst.graph, res.assignment));
        CHECK(testutil::objective_pairwise(inst.graph, estep.assignment) >=
              res.objective - 1e-9);
    }
}

TEST_CASE("isolated vertices are objective-neutral in every variant") {
    // edge 1-2 plus an isolated vertex 3
    Instance inst = make_instance(Graph::from_adjacency({{0, 2, 0}, {2, 0, 0}, {0, 0, 0}}), 2);
    Rng rng(66);
    for (auto variant : {EmVariant::LS1, EmVariant::LS2, EmVariant::Exact}) {
        EmConfig cfg;
        cfg.variant = variant;
        TrialResult res = run_em_variant(inst, rng, cfg);
        Assignment moved = res.assignment;
        moved.labels[2] = 1 - moved.labels[2];
        CHECK(testutil::objective_pairwise(inst.graph, moved) ==
              doctest::Approx(res.objective).epsilon(1e-12));
    }
}

TEST_CASE("run_trials is reproducible and trial 0 equals a single seeded run") {
    Rng seeds(67);
    Instance inst = make_instance(testutil::random_multigraph(seeds, 8), 2);
    EmConfig cfg;
    cfg.variant = EmVariant::LS2;
    cfg.trials = 5;
    cfg.seed = 9001;

    TrialsOutcome a = run_trials(inst, cfg);
    TrialsOutcome b = run_trials(inst, cfg);
    REQUIRE(a.trials.size() == 5);
    for (size_t t = 0; t < 5; ++t) {
        CHECK(a.trials[t].objective == b.trials[t].objective);
        CHECK(a.trials[t].assignment.labels == b.trials[t].assignment.labels);
        CHECK(a.trials[t].iterations == b.trials[t].iterations);
    }
    CHECK(a.summary.mean_objective == b.summary.mean_objective);
    CHECK(a.summary.min_objective == b.summary.min_objective);

    Rng solo(derive_seed(cfg.seed, 0));
    TrialResult single = em_ls2(inst, solo, cfg);
    CHECK(single.objective == a.trials[0].objective);
    CHECK(single.assignment.labels == a.trials[0].assignment.labels);
}

TEST_CASE("summary gap uses the supplied reference") {
    Rng seeds(68);
    Instance inst = make_instance(testutil::random_multigraph(seeds, 7), 2);
    EmConfig cfg;
    cfg.variant = EmVariant::LS2;
    cfg.trials = 4;
    cfg.seed = 5;
    const double optimum = solve_exact(inst).objective;
    TrialsOutcome out = run_trials(inst, cfg, optimum);
    CHECK(out.summary.mean_gap_pct >= -1e-9);
    double expect = 0.0;
    for (const TrialResult& tr : out.trials)
        expect += 100.0 * (tr.objective - optimum) / optimum;
    CHECK(out.summary.mean_gap_pct == doctest::Approx(expect / 4.0).epsilon(1e-12));
}

TEST_CASE("trial and round caps mark the result unconverged") {
    Rng seeds(69);
    Instance inst = make_instance(testutil::random_multigraph(seeds, 8), 2);
    EmConfig cfg;
    cfg.max_relocations = 1;
    Rng rng(1);
    TrialResult res = em_ls2(inst, rng, cfg);
    if (res.iterations >= 1) CHECK(!res.converged);
    CHECK_THROWS(run_trials(inst, EmConfig{.trials = 0}));
}

TEST_SUITE_END();
