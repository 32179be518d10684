#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcsbm/em.hpp"
#include "dcsbm/exact_solver.hpp"
#include "dcsbm/generator.hpp"
#include "dcsbm/graph.hpp"

namespace dcsbm {

// Fraction of vertices on which the two labelings agree under the best
// permutation of community labels: exhaustive over permutations for K <= 4,
// optimal assignment on the K x K confusion matrix above that (identical
// results, the small-K route is kept as an oracle).
double agreement(const Assignment& est, const Assignment& truth);
double agreement_exhaustive(const Assignment& est, const Assignment& truth); // K <= 6
double agreement_matching(const Assignment& est, const Assignment& truth);

struct MethodObjective {
    std::string method;
    double objective = 0.0;
};

struct GapRecord {
    std::string instance_id;
    std::string method;
    double objective = 0.0;
    double bks = 0.0;
    double gap_pct = 0.0; // 100 (OBJ - BKS) / BKS
    bool flagged = false; // BKS < 0: the ratio denominator changed sign
};

// BKS is the minimum of the given objectives; gap is the paper's relative
// percentage gap. BKS = 0 is an error; BKS < 0 marks every record flagged.
std::vector<GapRecord> compute_gaps(const std::string& instance_id,
                                    const std::vector<MethodObjective>& objectives);

// One row of a generated suite: the generator configuration plus the cell
// identity used for aggregation.
struct SuiteRow {
    std::string id;
    GeneratorConfig cfg;
    std::string cell;          // "in0.1_out0.4" or "low|medium|high"
    double omega_in = 0.0;     // S1 only
    double omega_out = 0.0;    // S1 only
    int strength = 0;          // S2 only: 1=low 2=medium 3=high
    bool is_s2 = false;
};

// Suite names: "s1" and "s2" follow the full protocol (n up to 16,
// 600/300 instances); "s1-desk"/"s2-desk" stop at n = 12; "micro" is a
// 4-instance smoke suite. Per-row seeds derive from the master seed.
std::vector<SuiteRow> make_suite(const std::string& name, std::uint64_t seed);
std::string manifest_to_string(const std::vector<SuiteRow>& rows);

struct BenchConfig {
    std::string suite = "s1-desk";
    std::vector<std::string> methods = {"exact", "em-ls1", "em-ls2"};
    double time_limit_s = 60.0;
    int trials = 50;
    std::uint64_t seed = 0;
    int threads = 0;      // 0 = hardware concurrency
    bool timings = true;  // false writes 0 in every time field (stable bytes)
    bool sbc_compare = false;
    std::string out_dir = ".";
    bool write_instances = true;
};

struct InstanceResult {
    SuiteRow row;
    Instance inst;
    std::optional<SolveReport> exact;
    std::optional<SolveReport> exact_nosbc;
    std::map<std::string, TrialsOutcome> heuristics; // key: em-ls1|em-ls2|em-exact
    double bks = 0.0;
    Assignment bks_assignment;
    std::map<std::string, double> mean_agreement; // per method plus "exact"
};

struct BenchOutput {
    std::vector<InstanceResult> results;
    std::string table_exact_csv;
    std::string table_exact_nosbc_csv; // only with sbc_compare
    std::string table_heuristics_csv;
    std::string table_agreement_csv;
    std::string results_exact_csv;
    std::string results_trials_csv;
};

BenchOutput run_benchmark(const std::vector<SuiteRow>& rows, const BenchConfig& cfg);
void write_bench_outputs(const BenchOutput& out, const BenchConfig& cfg);

// Minimal comma-separated table (fields never contain commas or quotes).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static CsvTable parse(const std::string& text);
    static CsvTable read(const std::string& path);
    int column(const std::string& name) const; // -1 when absent
};

// Static SVG charts built from the aggregated tables.
std::string agreement_vs_n_svg(const CsvTable& agreement_table);
std::string speedup_vs_n_svg(const CsvTable& exact_sbc, const CsvTable& exact_nosbc);

} // namespace dcsbm
