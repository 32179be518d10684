#include <doctest.h>

#include <cmath>

#include "dcsbm/likelihood.hpp"
#include "test_util.hpp"

using namespace dcsbm;

TEST_SUITE_BEGIN("likelihood");

TEST_CASE("constant term of the single-edge graph is log(1/2)") {
    Graph g = Graph::from_adjacency({{0, 1}, {1, 0}});
    CHECK(constant_term(g) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("factorial terms vanish on simple graphs") {
    // path 1-2-3: all A_ij in {0,1}, no self-loops
    Graph g = Graph::from_adjacency({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
    double expected = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (g.adj(i, j) > 0) expected += std::log(g.expected_edges(i, j));
    CHECK(constant_term(g) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("constant term requires edges") {
    Graph g = Graph::from_adjacency({{0, 0}, {0, 0}});
    CHECK_THROWS(constant_term(g));
}

TEST_CASE("product form of the likelihood equals core plus constant") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform_int(6));
        const int K = 1 + static_cast<int>(rng.uniform_int(3));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        AffinityMatrix om = testutil::random_omega(rng, K, 0.1, 2.0);
        const double direct = testutil::log_likelihood_product_form(g, a, om);
        LikelihoodValue v = log_likelihood(g, a, om);
        CHECK(v.total() == doctest::Approx(direct).epsilon(1e-10));
        CHECK(v.objective() == doctest::Approx(-direct).epsilon(1e-10));
    }
}

TEST_CASE("uniform omega gives core = -m") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
        const int n = 4 + static_cast<int>(rng.uniform_int(5));
        const int K = 1 + static_cast<int>(rng.uniform_int(3));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        AffinityMatrix ones(K);
        for (int r = 0; r < K; ++r)
            for (int s = r; s < K; ++s) ones.set(r, s, 1.0);
        CHECK(log_likelihood(g, a, ones).core ==
              doctest::Approx(-static_cast<double>(g.m())).epsilon(1e-10));
    }
}

TEST_CASE("zero omega on an occupied block signals -inf") {
    Graph g = Graph::from_adjacency({{0, 2}, {2, 0}});
    Assignment a;
    a.K = 2;
    a.labels = {0, 1};
    AffinityMatrix om(2);
    om.set(0, 0, 1.0);
    om.set(1, 1, 1.0);
    om.set(0, 1, 0.0); // the only edges live here
    CHECK(log_likelihood(g, a, om).core == -std::numeric_limits<double>::infinity());
}

TEST_CASE("block-sum core equals the pairwise sum") {
    Rng rng(13);
    for (int t = 0; t < 60; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform_int(10));
        const int K = 1 + static_cast<int>(rng.uniform_int(3));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        AffinityMatrix om = testutil::random_omega(rng, K);
        CHECK(log_likelihood(g, a, om).core ==
              doctest::Approx(testutil::core_pairwise(g, a, om)).epsilon(1e-10));
    }
}

TEST_CASE("block stats track edge and degree totals") {
    Rng rng(14);
    for (int t = 0; t < 30; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform_int(8));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, 3);
        BlockStats st(g, a);
        CHECK(st.consistent());
    }
}

TEST_CASE("m_step closed form: single block gives omega = 1") {
    Rng rng(15);
    Graph g = testutil::random_multigraph(rng, 6);
    Assignment a;
    a.K = 1;
    a.labels.assign(6, 0);
    CHECK(m_step(g, a)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("m_step: empty blocks and edge-free blocks give omega = 0") {
    Graph g = Graph::from_adjacency({{0, 1, 0}, {1, 0, 0}, {0, 0, 2}});
    Assignment a;
    a.K = 3;
    a.labels = {0, 0, 1}; // group 2 empty; block (0,1) edge-free
    AffinityMatrix om = m_step(g, a);
    CHECK(om(0, 1) == 0.0);
    CHECK(om(2, 2) == 0.0);
    CHECK(om(0, 2) == 0.0);
}

TEST_CASE("m_step matches per-cell golden-section minimization") {
    Rng rng(16);
    for (int t = 0; t < 25; ++t) {
        const int n = 4 + static_cast<int>(rng.uniform_int(6));
        const int K = 2 + static_cast<int>(rng.uniform_int(2));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        BlockStats st(g, a);
        AffinityMatrix om = m_step(st);
        for (int r = 0; r < K; ++r)
            for (int s = r; s < K; ++s) {
                if (st.kappa[r] == 0 || st.kappa[s] == 0) continue; // convention cell
                AffinityMatrix probe = om;
                auto neg_core = [&](double w) {
                    probe.set(r, s, w);
                    return -core_from_stats(st, probe);
                };
                const double hi = 4.0 * g.m() + 4.0;
                const double found = testutil::golden_min(neg_core, 0.0, hi);
                CHECK(std::abs(found - om(r, s)) < 1e-6);
            }
    }
}

TEST_CASE("m_step optimum never loses to a perturbed cell") {
    Rng rng(17);
    const double delta = 1e-3;
    for (int t = 0; t < 25; ++t) {
        const int n = 4 + static_cast<int>(rng.uniform_int(6));
        const int K = 2 + static_cast<int>(rng.uniform_int(2));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        BlockStats st(g, a);
        AffinityMatrix om = m_step(st);
        const double base = core_from_stats(st, om);
        for (int r = 0; r < K; ++r)
            for (int s = r; s < K; ++s)
                for (double sign : {+1.0, -1.0}) {
                    const double w = om(r, s) + sign * delta;
                    if (w < 0.0) continue;
                    AffinityMatrix probe = om;
                    probe.set(r, s, w);
                    CHECK(core_from_stats(st, probe) <= base + 1e-12);
                }
    }
}

TEST_CASE("profile equals core at the closed-form omega") {
    Rng rng(18);
    for (int t = 0; t < 50; ++t) {
        const int n = 3 + static_cast<int>(rng.uniform_int(8));
        const int K = 1 + static_cast<int>(rng.uniform_int(3));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        BlockStats st(g, a);
        CHECK(profile_log_likelihood(g, st) ==
              doctest::Approx(log_likelihood(g, a, m_step(g, a)).core).epsilon(1e-10));
    }
}

TEST_CASE("single block profile is -m; canonical relabeling is invariant") {
    Rng rng(19);
    Graph g = testutil::random_multigraph(rng, 7);
    Assignment a;
    a.K = 1;
    a.labels.assign(7, 0);
    CHECK(profile_log_likelihood(g, BlockStats(g, a)) ==
          doctest::Approx(-static_cast<double>(g.m())).epsilon(1e-12));

    Assignment b = testutil::random_labels(rng, 7, 3);
    Assignment c = canonicalize(b);
    CHECK(profile_log_likelihood(g, BlockStats(g, b)) ==
          doctest::Approx(profile_log_likelihood(g, BlockStats(g, c))).epsilon(1e-12));
}

TEST_CASE("profile dominates the core at any omega") {
    Rng rng(20);
    for (int t = 0; t < 40; ++t) {
        const int n = 4 + static_cast<int>(rng.uniform_int(6));
        const int K = 1 + static_cast<int>(rng.uniform_int(3));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        BlockStats st(g, a);
        AffinityMatrix om = testutil::random_omega(rng, K, 0.0, 2.5);
        CHECK(profile_log_likelihood(g, st) >= core_from_stats(st, om) - 1e-10);
    }
}

TEST_CASE("relocation round trip restores stats and cancels deltas") {
    Rng rng(21);
    for (int t = 0; t < 40; ++t) {
        const int n = 4 + static_cast<int>(rng.uniform_int(8));
        const int K = 2 + static_cast<int>(rng.uniform_int(2));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        BlockStats st(g, a);
        const BlockStats before = st;
        const int v = static_cast<int>(rng.uniform_int(n));
        int s = static_cast<int>(rng.uniform_int(K));
        if (s == a.labels[v]) s = (s + 1) % K;
        const int r0 = a.labels[v];

        const double d1 = relocation_delta(g, st, a, v, s);
        const double d2 = relocation_delta(g, st, a, v, r0);
        CHECK(std::abs(d1 + d2) < 1e-12);
        CHECK(st.m_rs == before.m_rs);
        CHECK(st.kappa == before.kappa);
        CHECK(st.consistent());
    }
}

TEST_CASE("relocation deltas match from-scratch profile recomputation") {
    Rng rng(22);
    for (int t = 0; t < 200; ++t) {
        const int n = 4 + static_cast<int>(rng.uniform_int(8));
        const int K = 2 + static_cast<int>(rng.uniform_int(2));
        Graph g = testutil::random_multigraph(rng, n);
        Assignment a = testutil::random_labels(rng, n, K);
        BlockStats st(g, a);
        const double before = profile_log_likelihood(g, st);
        const int v = static_cast<int>(rng.uniform_int(n));
        int s = static_cast<int>(rng.uniform_int(K));
        if (s == a.labels[v]) s = (s + 1) % K;

        const double delta = relocation_delta(g, st, a, v, s);
        const double after = profile_log_likelihood(g, BlockStats(g, a));
        CHECK(delta == doctest::Approx(after - before).epsilon(1e-9));
        CHECK(profile_log_likelihood(g, st) == doctest::Approx(after).epsilon(1e-12));
        CHECK(st.consistent());
    }
}

TEST_CASE("moving an isolated vertex changes nothing") {
    Graph g = Graph::from_adjacency({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
    Assignment a;
    a.K = 2;
    a.labels = {0, 0, 0};
    BlockStats st(g, a);
    CHECK(relocation_delta(g, st, a, 2, 1) == 0.0);
    CHECK(a.labels[2] == 1);
    CHECK(st.consistent());
}

TEST_CASE("relocation argument validation") {
    Graph g = Graph::from_adjacency({{0, 1}, {1, 0}});
    Assignment a;
    a.K = 2;
    a.labels = {0, 1};
    BlockStats st(g, a);
    CHECK_THROWS(relocation_delta(g, st, a, 0, 5));
    CHECK_THROWS(relocation_delta(g, st, a, 0, 0)); // target equals current
}

TEST_SUITE_END();
