#include <doctest.h>

#include <set>

#include "dcsbm/generator.hpp"
#include "dcsbm/instance_io.hpp"
#include "test_util.hpp"

using namespace dcsbm;

TEST_SUITE_BEGIN("instance");

TEST_CASE("single-edge file parses with recomputed degrees") {
    const std::string text =
        "dcsbm-instance v1\n"
        "n 2 m 1 K 2 seed none\n"
        "ground-truth none\n"
        "gen-omega none\n"
        "edges\n"
        "1 2 1\n"
        "end\n";
    Instance inst = instance_from_string(text);
    CHECK(inst.graph.n() == 2);
    CHECK(inst.graph.m() == 1);
    CHECK(inst.graph.degree(0) == 1);
    CHECK(inst.graph.degree(1) == 1);
    CHECK(inst.K == 2);
    CHECK(!inst.seed.has_value());
}

TEST_CASE("header m mismatch is rejected with a line number") {
    const std::string text =
        "dcsbm-instance v1\n"
        "n 3 m 5 K 2 seed 1\n"
        "ground-truth none\n"
        "gen-omega none\n"
        "edges\n"
        "1 2 4\n"
        "end\n";
    try {
        instance_from_string(text, "bad.inst");
        FAIL("expected header mismatch error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("m=5") != std::string::npos);
        CHECK(msg.find("bad.inst:") != std::string::npos);
    }
}

TEST_CASE("malformed lines report position") {
    CHECK_THROWS(instance_from_string("dcsbm-instancev1\n"));
    CHECK_THROWS(instance_from_string("dcsbm-instance v1\nn 2 m 1 K 2\n"));
    // label out of range
    CHECK_THROWS(instance_from_string("dcsbm-instance v1\n"
                                      "n 2 m 1 K 2 seed none\n"
                                      "ground-truth 1 3\n"
                                      "gen-omega none\nedges\n1 2 1\nend\n"));
    // i > j
    CHECK_THROWS(instance_from_string("dcsbm-instance v1\n"
                                      "n 2 m 1 K 2 seed none\n"
                                      "ground-truth none\n"
                                      "gen-omega none\nedges\n2 1 1\nend\n"));
    // duplicate edge line
    CHECK_THROWS(instance_from_string("dcsbm-instance v1\n"
                                      "n 2 m 2 K 2 seed none\n"
                                      "ground-truth none\n"
                                      "gen-omega none\nedges\n1 2 1\n1 2 1\nend\n"));
}

TEST_CASE("graph invariants enforced on construction") {
    CHECK_THROWS(Graph::from_adjacency({{0, 1}, {0, 0}}));  // asymmetric
    CHECK_THROWS(Graph::from_adjacency({{1, 0}, {0, 0}}));  // odd diagonal
    CHECK_THROWS(Graph::from_adjacency({{0, -1}, {-1, 0}}));
    Graph g = Graph::from_adjacency({{2, 1}, {1, 0}});
    CHECK(g.degree(0) == 3);
    CHECK(g.m() == 2);
}

TEST_CASE("empty-edge graph round-trips with empty edge section") {
    Instance inst;
    inst.graph = Graph::from_adjacency({{0, 0}, {0, 0}});
    inst.K = 1;
    const std::string text = instance_to_string(inst);
    CHECK(text.find("edges\nend\n") != std::string::npos);
    Instance back = instance_from_string(text);
    CHECK(back.graph.m() == 0);
    CHECK(back.graph.n() == 2);
}

TEST_CASE("write/read round trip is the identity on generated instances") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        GeneratorConfig cfg;
        cfg.n = 4 + static_cast<int>(rng.uniform_int(8));
        cfg.K = 2;
        cfg.omega_spec = S1Pair{0.7, 0.2};
        cfg.seed = rng.next_u64();
        Instance inst = generate(cfg);
        const std::string once = instance_to_string(inst);
        Instance back = instance_from_string(once);
        CHECK(instance_to_string(back) == once); // identity incl. bytes
        CHECK(back.graph.m() == inst.graph.m());
        CHECK(back.ground_truth->labels == inst.ground_truth->labels);
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                CHECK((*back.gen_omega)(r, s) == (*inst.gen_omega)(r, s)); // %.17g round trip

    }
}

TEST_CASE("two writes of the same instance produce identical bytes") {
    GeneratorConfig cfg;
    cfg.seed = 99;
    Instance inst = generate(cfg);
    CHECK(instance_to_string(inst) == instance_to_string(inst));
    write_instance(inst, "/tmp/dcsbm_io_a.inst");
    write_instance(inst, "/tmp/dcsbm_io_b.inst");
    CHECK(testutil::read_file("/tmp/dcsbm_io_a.inst") ==
          testutil::read_file("/tmp/dcsbm_io_b.inst"));
}

TEST_CASE("canonicalize relabels by first occurrence") {
    Assignment a;
    a.K = 3;
    a.labels = {1, 1, 0, 2}; // 1-based [2,2,1,3]
    Assignment c = canonicalize(a);
    CHECK(c.labels == std::vector<int>{0, 0, 1, 2}); // 1-based [1,1,2,3]
    CHECK(c.is_canonical());

    Assignment id;
    id.K = 3;
    id.labels = {0, 0, 0};
    CHECK(canonicalize(id).labels == id.labels);
}

TEST_CASE("canonicalize preserves partitions and is idempotent") {
    for (int n = 1; n <= 6; ++n) {
        testutil::enumerate_all(n, 3, [&](const std::vector<int>& labels) {
            Assignment a = testutil::to_assignment(labels, 3);
            Assignment c = canonicalize(a);
            CHECK(c.is_canonical());
            CHECK(canonicalize(c).labels == c.labels);
            // same partition: pairwise same-group relation is preserved
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK((a.labels[i] == a.labels[j]) == (c.labels[i] == c.labels[j]));
        });
    }
}

TEST_CASE("canonical assignment count matches the Stirling sum") {
    // n=4, K=2: S(4,1) + S(4,2) = 1 + 7 = 8
    int count = 0;
    testutil::enumerate_canonical(4, 2, [&](const std::vector<int>&) { ++count; });
    CHECK(count == 8);

    // cross-check: distinct canonicalizations of all K^n labelings
    std::set<std::vector<int>> seen;
    testutil::enumerate_all(4, 2, [&](const std::vector<int>& labels) {
        seen.insert(canonicalize(testutil::to_assignment(labels, 2)).labels);
    });
    CHECK(static_cast<int>(seen.size()) == 8);
}

TEST_CASE("solution file round trip") {
    Solution sol;
    sol.objective = 12.3456789;
    sol.status = "optimal";
    sol.assignment.K = 2;
    sol.assignment.labels = {0, 1, 0};
    sol.omega = AffinityMatrix(2);
    sol.omega.set(0, 0, 1.5);
    sol.omega.set(0, 1, 0.25);
    sol.omega.set(1, 1, 2.0);
    write_solution(sol, "/tmp/dcsbm_sol_test.sol");
    Solution back = read_solution("/tmp/dcsbm_sol_test.sol");
    CHECK(back.status == "optimal");
    CHECK(back.assignment.labels == sol.assignment.labels);
    CHECK(back.objective == doctest::Approx(sol.objective));
    CHECK(back.omega(0, 1) == 0.25);
}

TEST_SUITE_END();
