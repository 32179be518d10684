#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcsbm/evaluation.hpp"
#include "dcsbm/instance_io.hpp"
#include "dcsbm/likelihood.hpp"
#include "dcsbm/relaxation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = ".";
    bool verbose = false;
    bool timings = true;
};

std::string default_solution_path(const std::string& inst_path) {
    const auto dot = inst_path.rfind('.');
    return (dot == std::string::npos ? inst_path : inst_path.substr(0, dot)) + ".sol";
}

int cmd_generate(const GlobalOpts& g, const std::string& suite, int n, int K, double omega_in,
                 double omega_out, const std::string& strength, int count) {
    std::vector<dcsbm::SuiteRow> rows;
    if (suite == "custom") {
        for (int rep = 0; rep < count; ++rep) {
            dcsbm::SuiteRow row;
            row.cfg.n = n;
            row.cfg.K = K;
            if (!strength.empty()) {
                row.is_s2 = true;
                row.cell = strength;
                row.strength = strength == "low" ? 1 : strength == "medium" ? 2 : 3;
                row.cfg.omega_spec = dcsbm::S2Strength{
                    strength == "low" ? dcsbm::Strength::Low
                                      : strength == "medium" ? dcsbm::Strength::Medium
                                                             : dcsbm::Strength::High};
            } else {
                row.omega_in = omega_in;
                row.omega_out = omega_out;
                char cell[64];
                std::snprintf(cell, sizeof(cell), "in%g_out%g", omega_in, omega_out);
                row.cell = cell;
                row.cfg.omega_spec = dcsbm::S1Pair{omega_in, omega_out};
            }
            char id[96];
            std::snprintf(id, sizeof(id), "custom_n%02d_k%d_%s_r%02d", n, K, row.cell.c_str(),
                          rep);
            row.id = id;
            row.cfg.seed = dcsbm::derive_seed(g.seed, rows.size());
            rows.push_back(std::move(row));
        }
    } else {
        rows = dcsbm::make_suite(suite, g.seed);
    }

    fs::create_directories(g.out_dir + "/instances");
    for (const dcsbm::SuiteRow& row : rows) {
        dcsbm::Instance inst = dcsbm::generate(row.cfg);
        inst.name = row.id;
        dcsbm::write_instance(inst, g.out_dir + "/instances/" + row.id + ".inst");
        if (g.verbose) std::cerr << "generated " << row.id << "\n";
    }
    dcsbm::atomic_write_file(g.out_dir + "/manifest.csv", dcsbm::manifest_to_string(rows));
    std::cout << g.out_dir << "/manifest.csv\n";
    return 0;
}

int cmd_solve(const GlobalOpts& g, const std::string& method, const std::string& inst_path,
              double time_limit, int trials, bool sbc, const std::string& trace_path,
              std::string solution_path) {
    dcsbm::Instance inst = dcsbm::read_instance(inst_path);
    if (solution_path.empty()) solution_path = default_solution_path(inst_path);

    if (method == "exact") {
        dcsbm::SolveConfig sc;
        sc.time_limit_s = time_limit;
        sc.use_sbc = sbc;
        std::ofstream trace_out;
        if (!trace_path.empty()) {
            trace_out.open(trace_path, std::ios::trunc);
            if (!trace_out) throw std::runtime_error("cannot open trace file: " + trace_path);
            sc.trace = [&](const dcsbm::TraceEvent& ev) {
                json line = {{"t_ms", g.timings ? ev.t_s * 1000.0 : 0.0},
                             {"incumbent", ev.incumbent},
                             {"bound", ev.bound},
                             {"nodes", ev.nodes}};
                trace_out << line.dump() << "\n";
            };
        }
        dcsbm::SolveReport rep = dcsbm::solve_exact(inst, sc);

        dcsbm::Solution sol;
        sol.objective = rep.objective;
        sol.status = rep.status;
        sol.assignment = rep.best;
        sol.omega = rep.omega;
        dcsbm::write_solution(sol, solution_path);

        std::cout << "instance,method,objective,bound,gap_pct,status,nodes,time_ms\n";
        std::cout << inst.name << ",exact," << dcsbm::format_real12(rep.objective) << ","
                  << dcsbm::format_real12(rep.bound) << "," << 100.0 * rep.gap << ","
                  << rep.status << "," << rep.nodes << ","
                  << (g.timings ? rep.wall_time_s * 1000.0 : 0.0) << "\n";
        if (g.verbose)
            std::cerr << "exact: " << rep.status << " objective " << rep.objective << " after "
                      << rep.nodes << " nodes\n";
        return 0;
    }

    dcsbm::EmConfig ec;
    ec.trials = trials;
    ec.seed = g.seed;
    ec.estep_time_limit_s = time_limit;
    if (method == "em-ls1")
        ec.variant = dcsbm::EmVariant::LS1;
    else if (method == "em-ls2")
        ec.variant = dcsbm::EmVariant::LS2;
    else if (method == "em-exact")
        ec.variant = dcsbm::EmVariant::Exact;
    else
        throw std::runtime_error("unknown method: " + method);

    dcsbm::TrialsOutcome outcome = dcsbm::run_trials(inst, ec, std::nullopt, g.threads);
    double bks = outcome.trials.front().objective;
    size_t best_idx = 0;
    for (size_t t = 1; t < outcome.trials.size(); ++t)
        if (outcome.trials[t].objective < bks) {
            bks = outcome.trials[t].objective;
            best_idx = t;
        }

    dcsbm::Solution sol;
    sol.objective = bks;
    sol.status = "feasible";
    sol.assignment = dcsbm::canonicalize(outcome.trials[best_idx].assignment);
    sol.assignment.K = inst.K;
    sol.omega = dcsbm::m_step(inst.graph, sol.assignment);
    dcsbm::write_solution(sol, solution_path);

    std::cout << "instance,variant,trial,objective,gap_pct,iterations,time_ms,converged\n";
    for (size_t t = 0; t < outcome.trials.size(); ++t) {
        const dcsbm::TrialResult& tl = outcome.trials[t];
        std::cout << inst.name << "," << method << "," << t << ","
                  << dcsbm::format_real12(tl.objective) << ","
                  << 100.0 * (tl.objective - bks) / bks << "," << tl.iterations << ","
                  << (g.timings ? tl.wall_time_s * 1000.0 : 0.0) << "," << (tl.converged ? 1 : 0)
                  << "\n";
    }
    return 0;
}

int cmd_export_milp(const std::string& inst_path, const std::string& out_path, int breakpoints,
                    double eps, bool sbc) {
    dcsbm::Instance inst = dcsbm::read_instance(inst_path);
    dcsbm::BoundSet bounds = dcsbm::build_bounds(inst.graph);
    dcsbm::MilpExportConfig cfg;
    cfg.breakpoints = dcsbm::initial_breakpoints(bounds, breakpoints);
    cfg.eps = eps;
    cfg.sbc = sbc;
    dcsbm::export_milp(inst, bounds, cfg, out_path);
    std::cout << out_path << "\n" << out_path << ".cuts\n";
    return 0;
}

int cmd_eval_agreement(const std::string& inst_path, const std::string& sol_path) {
    dcsbm::Instance inst = dcsbm::read_instance(inst_path);
    if (!inst.ground_truth) throw std::runtime_error("instance has no ground truth");
    dcsbm::Solution sol = dcsbm::read_solution(sol_path);
    if (sol.assignment.n() != inst.graph.n())
        throw std::runtime_error("solution labels length does not match instance");
    std::cout << dcsbm::format_real12(dcsbm::agreement(sol.assignment, *inst.ground_truth))
              << "\n";
    return 0;
}

int cmd_eval_gap(double objective, double bks) {
    if (bks == 0.0) throw std::runtime_error("gap undefined: reference value is zero");
    std::cout << dcsbm::format_real12(100.0 * (objective - bks) / bks)
              << (bks < 0.0 ? " flagged\n" : "\n");
    return 0;
}

int cmd_eval_plot(const std::string& dir, const std::string& out_dir) {
    const std::string target = out_dir.empty() ? dir : out_dir;
    fs::create_directories(target);
    dcsbm::CsvTable agree = dcsbm::CsvTable::read(dir + "/table_agreement.csv");
    dcsbm::atomic_write_file(target + "/agreement_vs_n.svg", dcsbm::agreement_vs_n_svg(agree));
    std::cout << target << "/agreement_vs_n.svg\n";
    if (fs::exists(dir + "/table_exact.csv") && fs::exists(dir + "/table_exact_nosbc.csv")) {
        dcsbm::CsvTable sbc = dcsbm::CsvTable::read(dir + "/table_exact.csv");
        dcsbm::CsvTable nosbc = dcsbm::CsvTable::read(dir + "/table_exact_nosbc.csv");
        dcsbm::atomic_write_file(target + "/speedup_vs_n.svg",
                                 dcsbm::speedup_vs_n_svg(sbc, nosbc));
        std::cout << target << "/speedup_vs_n.svg\n";
    }
    return 0;
}

int cmd_bench(const GlobalOpts& g, const std::string& suite,
              const std::vector<std::string>& methods, double time_limit, int trials,
              bool sbc_compare) {
    dcsbm::BenchConfig cfg;
    cfg.suite = suite;
    cfg.methods = methods;
    cfg.time_limit_s = time_limit;
    cfg.trials = trials;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.timings = g.timings;
    cfg.sbc_compare = sbc_compare;
    cfg.out_dir = g.out_dir;

    std::vector<dcsbm::SuiteRow> rows = dcsbm::make_suite(suite, g.seed);
    if (g.verbose) std::cerr << "bench: " << rows.size() << " instances\n";
    dcsbm::BenchOutput out = dcsbm::run_benchmark(rows, cfg);
    dcsbm::write_bench_outputs(out, cfg);

    dcsbm::CsvTable agree = dcsbm::CsvTable::parse(out.table_agreement_csv);
    dcsbm::atomic_write_file(cfg.out_dir + "/agreement_vs_n.svg",
                             dcsbm::agreement_vs_n_svg(agree));
    if (sbc_compare) {
        dcsbm::CsvTable sbc = dcsbm::CsvTable::parse(out.table_exact_csv);
        dcsbm::CsvTable nosbc = dcsbm::CsvTable::parse(out.table_exact_nosbc_csv);
        dcsbm::atomic_write_file(cfg.out_dir + "/speedup_vs_n.svg",
                                 dcsbm::speedup_vs_n_svg(sbc, nosbc));
    }
    std::cout << cfg.out_dir << "/table_exact.csv\n"
              << cfg.out_dir << "/table_heuristics.csv\n"
              << cfg.out_dir << "/table_agreement.csv\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and heuristic maximum-likelihood community detection for the DCSBM"};
    app.require_subcommand(1);
    app.set_config("--config");
    app.fallthrough(); // global flags are accepted after the subcommand too

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Master seed; all randomness derives from it")
        ->capture_default_str();
    app.add_option("--threads", g.threads,
                   "Worker threads for bench (0 = machine parallelism; 1 = bitwise-deterministic "
                   "reports)")
        ->capture_default_str();
    app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
    app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");
    app.add_option("--timings", g.timings,
                   "Write measured wall times (true) or zeros for byte-reproducible output "
                   "(false)")
        ->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "Sample synthetic DCSBM instances");
    std::string gen_suite = "s1-desk";
    int gen_n = 8, gen_k = 2, gen_count = 1;
    double gen_win = 0.9, gen_wout = 0.1;
    std::string gen_strength;
    gen->add_option("--suite", gen_suite, "s1|s2|s1-desk|s2-desk|micro|custom")
        ->capture_default_str();
    gen->add_option("--n", gen_n, "custom: vertex count")->capture_default_str();
    gen->add_option("--K", gen_k, "custom: community count")->capture_default_str();
    gen->add_option("--omega-in", gen_win, "custom: in-community rate center")
        ->capture_default_str();
    gen->add_option("--omega-out", gen_wout, "custom: cross-community rate center")
        ->capture_default_str();
    gen->add_option("--strength", gen_strength, "custom: low|medium|high instead of omega pair");
    gen->add_option("--count", gen_count, "custom: number of instances")->capture_default_str();

    // solve
    auto* solve = app.add_subcommand("solve", "Solve one instance");
    std::string solve_method = "exact", solve_in, solve_trace, solve_out;
    double solve_tl = 60.0;
    int solve_trials = 50;
    bool solve_sbc = true;
    solve->add_option("--method", solve_method, "exact|em-ls1|em-ls2|em-exact")
        ->capture_default_str();
    solve->add_option("--time-limit", solve_tl, "Time limit in seconds")->capture_default_str();
    solve->add_option("--trials", solve_trials, "EM trials")->capture_default_str();
    solve->add_option("--sbc", solve_sbc, "Symmetry-broken search (exact)")
        ->capture_default_str();
    solve->add_option("--trace", solve_trace, "JSON-lines progress trace file (exact)");
    solve->add_option("--solution", solve_out, "Solution file path (default: <input>.sol)");
    solve->add_option("instance", solve_in, "Instance file")->required();

    // export-milp
    auto* exp = app.add_subcommand("export-milp", "Write the LP-format model and cut recipe");
    std::string exp_in, exp_out;
    int exp_bp = 8;
    double exp_eps = 1e-6;
    bool exp_sbc = true;
    exp->add_option("--breakpoints", exp_bp, "Initial tangent breakpoints")
        ->capture_default_str();
    exp->add_option("--epsilon", exp_eps, "Cut separation tolerance")->capture_default_str();
    exp->add_option("--sbc", exp_sbc, "Emit symmetry-breaking rows")->capture_default_str();
    exp->add_option("instance", exp_in, "Instance file")->required();
    exp->add_option("model", exp_out, "Output model path")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Metrics and plots");
    eval->require_subcommand(1);
    auto* eval_agree = eval->add_subcommand("agreement", "Best-permutation label agreement");
    std::string ea_inst, ea_sol;
    eval_agree->add_option("instance", ea_inst, "Instance file with ground truth")->required();
    eval_agree->add_option("solution", ea_sol, "Solution file")->required();
    auto* eval_gap = eval->add_subcommand("gap", "Relative percentage gap");
    double eg_obj = 0, eg_bks = 0;
    eval_gap->add_option("objective", eg_obj, "Objective value")->required();
    eval_gap->add_option("bks", eg_bks, "Best-known solution value")->required();
    auto* eval_plot = eval->add_subcommand("plot", "Charts from bench tables");
    std::string ep_dir, ep_out;
    eval_plot->add_option("--dir", ep_dir, "Bench output directory")->required();
    eval_plot->add_option("--plot-out", ep_out, "Chart directory (default: --dir)");

    // bench
    auto* bench = app.add_subcommand("bench", "Run the evaluation harness on a suite");
    std::string bench_suite = "s1-desk";
    std::vector<std::string> bench_methods = {"exact", "em-ls1", "em-ls2"};
    double bench_tl = 60.0;
    int bench_trials = 50;
    bool bench_sbc_compare = false;
    bench->add_option("--suite", bench_suite, "s1|s2|s1-desk|s2-desk|micro")
        ->capture_default_str();
    bench->add_option("--methods", bench_methods, "exact,em-ls1,em-ls2,em-exact")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--time-limit", bench_tl, "Exact solver time limit per instance (s)")
        ->capture_default_str();
    bench->add_option("--trials", bench_trials, "EM trials per instance")->capture_default_str();
    bench->add_flag("--sbc-compare", bench_sbc_compare,
                    "Also run the exact solver without symmetry breaking");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "dcsbm-error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_generate(g, gen_suite, gen_n, gen_k, gen_win, gen_wout, gen_strength,
                                gen_count);
        if (solve->parsed())
            return cmd_solve(g, solve_method, solve_in, solve_tl, solve_trials, solve_sbc,
                             solve_trace, solve_out);
        if (exp->parsed()) return cmd_export_milp(exp_in, exp_out, exp_bp, exp_eps, exp_sbc);
        if (eval->parsed()) {
            if (eval_agree->parsed()) return cmd_eval_agreement(ea_inst, ea_sol);
            if (eval_gap->parsed()) return cmd_eval_gap(eg_obj, eg_bks);
            if (eval_plot->parsed()) return cmd_eval_plot(ep_dir, ep_out);
        }
        if (bench->parsed())
            return cmd_bench(g, bench_suite, bench_methods, bench_tl, bench_trials,
                             bench_sbc_compare);
    } catch (const std::exception& e) {
        std::cerr << "dcsbm-error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "dcsbm-error: no subcommand\n";
    return 2;
}
