#include "dcsbm/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dcsbm/instance_io.hpp"
#include "dcsbm/likelihood.hpp"

namespace dcsbm {

namespace {

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

int effective_k(const Assignment& a, const Assignment& b) {
    int k = std::max(a.K, b.K);
    for (int l : a.labels) k = std::max(k, l + 1);
    for (int l : b.labels) k = std::max(k, l + 1);
    return k;
}

std::vector<std::vector<long long>> confusion(const Assignment& est, const Assignment& truth,
                                              int k) {
    std::vector<std::vector<long long>> c(k, std::vector<long long>(k, 0));
    for (size_t i = 0; i < est.labels.size(); ++i) ++c[est.labels[i]][truth.labels[i]];
    return c;
}

} // namespace

double agreement_exhaustive(const Assignment& est, const Assignment& truth) {
    if (est.n() != truth.n()) throw std::invalid_argument("agreement: size mismatch");
    const int k = effective_k(est, truth);
    if (k > 6) throw std::invalid_argument("agreement_exhaustive: K too large");
    auto c = confusion(est, truth, k);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    long long best = 0;
    do {
        long long common = 0;
        for (int r = 0; r < k; ++r) common += c[r][perm[r]];
        best = std::max(best, common);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / est.n();
}

double agreement_matching(const Assignment& est, const Assignment& truth) {
    if (est.n() != truth.n()) throw std::invalid_argument("agreement: size mismatch");
    const int k = effective_k(est, truth);
    auto c = confusion(est, truth, k);
    // optimal assignment by DP over column subsets
    const size_t full = size_t{1} << k;
    std::vector<long long> best(full, -1);
    best[0] = 0;
    for (int r = 0; r < k; ++r) {
        std::vector<long long> next(full, -1);
        for (size_t mask = 0; mask < full; ++mask) {
            if (best[mask] < 0 || std::popcount(mask) != r) continue;
            for (int s = 0; s < k; ++s) {
                if (mask & (size_t{1} << s)) continue;
                const size_t m2 = mask | (size_t{1} << s);
                next[m2] = std::max(next[m2], best[mask] + c[r][s]);
            }
        }
        best = std::move(next);
    }
    return static_cast<double>(best[full - 1]) / est.n();
}

double agreement(const Assignment& est, const Assignment& truth) {
    const int k = effective_k(est, truth);
    return k <= 4 ? agreement_exhaustive(est, truth) : agreement_matching(est, truth);
}

std::vector<GapRecord> compute_gaps(const std::string& instance_id,
                                    const std::vector<MethodObjective>& objectives) {
    if (objectives.empty()) throw std::invalid_argument("compute_gaps: no objectives");
    double bks = objectives.front().objective;
    for (const auto& mo : objectives) bks = std::min(bks, mo.objective);
    if (bks == 0.0) throw std::invalid_argument("compute_gaps: BKS is zero");
    std::vector<GapRecord> out;
    out.reserve(objectives.size());
    for (const auto& mo : objectives) {
        GapRecord r;
        r.instance_id = instance_id;
        r.method = mo.method;
        r.objective = mo.objective;
        r.bks = bks;
        r.gap_pct = 100.0 * (mo.objective - bks) / bks;
        r.flagged = bks < 0.0;
        out.push_back(r);
    }
    return out;
}

namespace {

std::string two_digits(int v) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d", v);
    return buf;
}

const char* strength_name(int s) { return s == 1 ? "low" : s == 2 ? "medium" : "high"; }

} // namespace

std::vector<SuiteRow> make_suite(const std::string& name, std::uint64_t seed) {
    std::vector<SuiteRow> rows;
    const std::vector<double> levels = {0.1, 0.4, 0.6, 0.9};

    auto push_s1 = [&](const std::vector<int>& ns, int reps) {
        for (int n : ns)
            for (double win : levels)
                for (double wout : levels) {
                    if (win == wout) continue;
                    for (int rep = 0; rep < reps; ++rep) {
                        SuiteRow row;
                        row.omega_in = win;
                        row.omega_out = wout;
                        row.cell = "in" + fmt6(win) + "_out" + fmt6(wout);
                        row.id = "s1_n" + two_digits(n) + "_" + row.cell + "_r" + two_digits(rep);
                        row.cfg.n = n;
                        row.cfg.K = 2;
                        row.cfg.omega_spec = S1Pair{win, wout};
                        row.cfg.seed = derive_seed(seed, rows.size());
                        rows.push_back(std::move(row));
                    }
                }
    };
    auto push_s2 = [&](const std::vector<int>& ns, int reps) {
        for (int K : {2, 3})
            for (int n : ns)
                for (int strength = 1; strength <= 3; ++strength)
                    for (int rep = 0; rep < reps; ++rep) {
                        SuiteRow row;
                        row.is_s2 = true;
                        row.strength = strength;
                        row.cell = strength_name(strength);
                        row.id = "s2_k" + std::to_string(K) + "_n" + two_digits(n) + "_" +
                                 row.cell + "_r" + two_digits(rep);
                        row.cfg.n = n;
                        row.cfg.K = K;
                        row.cfg.omega_spec =
                            S2Strength{strength == 1 ? Strength::Low
                                                     : strength == 2 ? Strength::Medium
                                                                     : Strength::High};
                        row.cfg.seed = derive_seed(seed, rows.size());
                        rows.push_back(std::move(row));
                    }
    };

    if (name == "s1") {
        push_s1({8, 10, 12, 14, 16}, 10);
    } else if (name == "s1-desk") {
        push_s1({8, 10, 12}, 10);
    } else if (name == "s2") {
        push_s2({8, 10, 12, 14, 16}, 10);
    } else if (name == "s2-desk") {
        push_s2({8, 10, 12}, 10);
    } else if (name == "micro") {
        // 4-instance smoke suite: one assortative and one disassortative cell
        for (int rep = 0; rep < 2; ++rep)
            for (auto [win, wout] : {std::pair{0.9, 0.1}, std::pair{0.1, 0.9}}) {
                SuiteRow row;
                row.omega_in = win;
                row.omega_out = wout;
                row.cell = "in" + fmt6(win) + "_out" + fmt6(wout);
                row.id = "micro_n06_" + row.cell + "_r" + two_digits(rep);
                row.cfg.n = 6;
                row.cfg.K = 2;
                row.cfg.omega_spec = S1Pair{win, wout};
                row.cfg.seed = derive_seed(seed, rows.size());
                rows.push_back(std::move(row));
            }
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    return rows;
}

std::string manifest_to_string(const std::vector<SuiteRow>& rows) {
    std::ostringstream out;
    out << "path,n,K,omega_in,omega_out,strength,seed,reject_isolated,reject_empty_truth\n";
    for (const SuiteRow& row : rows) {
        out << "instances/" << row.id << ".inst," << row.cfg.n << "," << row.cfg.K << ",";
        if (row.is_s2)
            out << ",," << row.cell;
        else
            out << fmt6(row.omega_in) << "," << fmt6(row.omega_out) << ",";
        out << "," << row.cfg.seed << "," << (row.cfg.reject_isolated ? 1 : 0) << ","
            << (row.cfg.reject_empty_truth ? 1 : 0) << "\n";
    }
    return out.str();
}

namespace {

int method_stream(const std::string& method) {
    if (method == "em-ls1") return 101;
    if (method == "em-ls2") return 102;
    if (method == "em-exact") return 103;
    throw std::invalid_argument("unknown method: " + method);
}

EmVariant method_variant(const std::string& method) {
    if (method == "em-ls1") return EmVariant::LS1;
    if (method == "em-ls2") return EmVariant::LS2;
    return EmVariant::Exact;
}

InstanceResult run_one(const SuiteRow& row, const BenchConfig& cfg) {
    InstanceResult res;
    res.row = row;
    res.inst = generate(row.cfg);
    res.inst.name = row.id;

    double bks = std::numeric_limits<double>::infinity();
    Assignment bks_assign;

    for (const std::string& method : cfg.methods) {
        if (method == "exact") {
            SolveConfig sc;
            sc.time_limit_s = cfg.time_limit_s;
            res.exact = solve_exact(res.inst, sc);
            if (res.exact->objective < bks) {
                bks = res.exact->objective;
                bks_assign = res.exact->best;
            }
            if (cfg.sbc_compare) {
                sc.use_sbc = false;
                res.exact_nosbc = solve_exact(res.inst, sc);
            }
        } else {
            EmConfig ec;
            ec.variant = method_variant(method);
            ec.trials = cfg.trials;
            ec.seed = derive_seed(row.cfg.seed, method_stream(method));
            ec.estep_time_limit_s = cfg.time_limit_s;
            TrialsOutcome outcome = run_trials(res.inst, ec);
            for (const TrialResult& t : outcome.trials)
                if (t.objective < bks) {
                    bks = t.objective;
                    bks_assign = t.assignment;
                }
            res.heuristics.emplace(method, std::move(outcome));
        }
    }

    res.bks = bks;
    res.bks_assignment = bks_assign;

    if (res.inst.ground_truth) {
        const Assignment& truth = *res.inst.ground_truth;
        for (const auto& [method, outcome] : res.heuristics) {
            double acc = 0.0;
            for (const TrialResult& t : outcome.trials) acc += agreement(t.assignment, truth);
            res.mean_agreement[method] = acc / outcome.trials.size();
        }
        if (res.exact || !bks_assign.labels.empty())
            res.mean_agreement["exact"] = agreement(bks_assign, truth);
    }
    return res;
}

struct CellKey {
    int K;
    int n;
    std::string cell;
    bool operator<(const CellKey& o) const {
        if (K != o.K) return K < o.K;
        if (n != o.n) return n < o.n;
        return cell < o.cell;
    }
};

std::string maybe_time(double seconds, bool timings, double scale = 1.0) {
    return timings ? fmt6(seconds * scale) : "0";
}

} // namespace

BenchOutput run_benchmark(const std::vector<SuiteRow>& rows, const BenchConfig& cfg) {
    BenchOutput out;
    out.results.resize(rows.size());

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : hw;
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            out.results[i] = run_one(rows[i], cfg);
        }
    };
    if (workers <= 1 || rows.size() <= 1) {
        work();
    } else {
        for (unsigned w = 0; w < std::min<size_t>(workers, rows.size()); ++w)
            pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // per-run CSVs
    {
        std::ostringstream ex, tr;
        ex << "instance,n,K,cell,objective,bound,gap_pct,status,nodes,time_ms,agreement\n";
        tr << "instance,variant,trial,objective,gap_pct,iterations,time_ms,converged\n";
        for (const InstanceResult& r : out.results) {
            if (r.exact) {
                const SolveReport& rep = *r.exact;
                ex << r.row.id << "," << r.row.cfg.n << "," << r.row.cfg.K << "," << r.row.cell
                   << "," << format_real12(rep.objective) << "," << format_real12(rep.bound) << ","
                   << fmt6(100.0 * rep.gap) << "," << rep.status << "," << rep.nodes << ","
                   << maybe_time(rep.wall_time_s, cfg.timings, 1000.0) << ",";
                auto it = r.mean_agreement.find("exact");
                if (it != r.mean_agreement.end()) ex << fmt6(it->second);
                ex << "\n";
            }
            for (const auto& [method, outcome] : r.heuristics) {
                for (size_t t = 0; t < outcome.trials.size(); ++t) {
                    const TrialResult& tl = outcome.trials[t];
                    // a nonpositive BKS flips or breaks the ratio; flag it
                    const std::string gap =
                        r.bks > 0.0 ? fmt6(100.0 * (tl.objective - r.bks) / r.bks) : "flagged";
                    tr << r.row.id << "," << method << "," << t << ","
                       << format_real12(tl.objective) << "," << gap << "," << tl.iterations
                       << "," << maybe_time(tl.wall_time_s, cfg.timings, 1000.0) << ","
                       << (tl.converged ? 1 : 0) << "\n";
                }
            }
        }
        out.results_exact_csv = ex.str();
        out.results_trials_csv = tr.str();
    }

    // per-cell aggregation, cells in first-appearance order
    std::vector<CellKey> order;
    std::map<CellKey, std::vector<const InstanceResult*>> cells;
    for (const InstanceResult& r : out.results) {
        CellKey key{r.row.cfg.K, r.row.cfg.n, r.row.cell};
        if (!cells.count(key)) order.push_back(key);
        cells[key].push_back(&r);
    }
    std::sort(order.begin(), order.end());

    auto exact_table = [&](bool nosbc) {
        std::ostringstream t;
        t << "suite,K,n,cell,opt,gap_pct,time_s,nodes\n";
        for (const CellKey& key : order) {
            int opt = 0, cnt = 0;
            double gap = 0, time_s = 0, nodes = 0;
            for (const InstanceResult* r : cells[key]) {
                const auto& rep = nosbc ? r->exact_nosbc : r->exact;
                if (!rep) continue;
                ++cnt;
                if (rep->status == "optimal") ++opt;
                gap += 100.0 * rep->gap;
                time_s += rep->wall_time_s;
                nodes += static_cast<double>(rep->nodes);
            }
            if (!cnt) continue;
            t << (key.cell.front() == 'i' ? "s1" : "s2") << "," << key.K << "," << key.n << ","
              << key.cell << "," << opt << "," << fmt6(gap / cnt) << ","
              << maybe_time(time_s / cnt, cfg.timings) << "," << fmt6(nodes / cnt) << "\n";
        }
        return t.str();
    };
    out.table_exact_csv = exact_table(false);
    if (cfg.sbc_compare) out.table_exact_nosbc_csv = exact_table(true);

    {
        std::ostringstream t;
        t << "suite,K,n,cell,ls1_gap_pct,ls1_time_s,ls2_gap_pct,ls2_time_s,"
             "em_exact_gap_pct,em_exact_time_s\n";
        for (const CellKey& key : order) {
            t << (key.cell.front() == 'i' ? "s1" : "s2") << "," << key.K << "," << key.n << ","
              << key.cell;
            for (const char* method : {"em-ls1", "em-ls2", "em-exact"}) {
                double gap = 0, time_s = 0;
                int cnt = 0;
                for (const InstanceResult* r : cells[key]) {
                    auto it = r->heuristics.find(method);
                    if (it == r->heuristics.end() || r->bks <= 0.0) continue;
                    ++cnt;
                    double g = 0;
                    for (const TrialResult& tl : it->second.trials)
                        g += 100.0 * (tl.objective - r->bks) / r->bks;
                    gap += g / it->second.trials.size();
                    time_s += it->second.summary.mean_time_s;
                }
                if (cnt)
                    t << "," << fmt6(gap / cnt) << "," << maybe_time(time_s / cnt, cfg.timings);
                else
                    t << ",,";
            }
            t << "\n";
        }
        out.table_heuristics_csv = t.str();
    }

    {
        std::ostringstream t;
        t << "suite,K,n,cell,em_ls1,em_ls2,em_exact,exact\n";
        for (const CellKey& key : order) {
            t << (key.cell.front() == 'i' ? "s1" : "s2") << "," << key.K << "," << key.n << ","
              << key.cell;
            for (const char* method : {"em-ls1", "em-ls2", "em-exact", "exact"}) {
                double acc = 0;
                int cnt = 0;
                for (const InstanceResult* r : cells[key]) {
                    auto it = r->mean_agreement.find(method);
                    if (it == r->mean_agreement.end()) continue;
                    ++cnt;
                    acc += it->second;
                }
                if (cnt)
                    t << "," << fmt6(acc / cnt);
                else
                    t << ",";
            }
            t << "\n";
        }
        out.table_agreement_csv = t.str();
    }
    return out;
}

void write_bench_outputs(const BenchOutput& out, const BenchConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string dir = cfg.out_dir + "/";

    std::vector<SuiteRow> rows;
    rows.reserve(out.results.size());
    for (const InstanceResult& r : out.results) rows.push_back(r.row);
    atomic_write_file(dir + "manifest.csv", manifest_to_string(rows));

    if (cfg.write_instances) {
        fs::create_directories(dir + "instances");
        for (const InstanceResult& r : out.results)
            write_instance(r.inst, dir + "instances/" + r.row.id + ".inst");
    }

    atomic_write_file(dir + "results_exact.csv", out.results_exact_csv);
    atomic_write_file(dir + "results_trials.csv", out.results_trials_csv);
    atomic_write_file(dir + "table_exact.csv", out.table_exact_csv);
    if (!out.table_exact_nosbc_csv.empty())
        atomic_write_file(dir + "table_exact_nosbc.csv", out.table_exact_nosbc_csv);
    atomic_write_file(dir + "table_heuristics.csv", out.table_heuristics_csv);
    atomic_write_file(dir + "table_agreement.csv", out.table_agreement_csv);
}

CsvTable CsvTable::parse(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        fields.push_back(cur);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

CsvTable CsvTable::read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

int CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points; // x = n, y = value
};

std::string line_chart_svg(const std::string& title, const std::string& y_label,
                           double y_min, double y_max, const std::vector<Series>& series) {
    const double W = 640, H = 420, L = 64, R = 24, T = 48, B = 48;
    double x_min = 1e300, x_max = -1e300;
    for (const Series& s : series)
        for (auto [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
        }
    if (x_min > x_max) {
        x_min = 0;
        x_max = 1;
    }
    if (x_min == x_max) {
        x_min -= 1;
        x_max += 1;
    }
    auto px = [&](double x) { return L + (x - x_min) / (x_max - x_min) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
    // axes
    svg << "<line x1=\"" << L << "\" y1=\"" << (H - B) << "\" x2=\"" << (W - R) << "\" y2=\""
        << (H - B) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << (H - B)
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double yv = y_min + (y_max - y_min) * t / 4.0;
        svg << "<text x=\"" << (L - 8) << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt6(yv) << "</text>\n";
        svg << "<line x1=\"" << L << "\" y1=\"" << py(yv) << "\" x2=\"" << (W - R) << "\" y2=\""
            << py(yv) << "\" stroke=\"#dddddd\"/>\n";
    }
    std::vector<double> xticks;
    for (const Series& s : series)
        for (auto [x, y] : s.points) xticks.push_back(x);
    std::sort(xticks.begin(), xticks.end());
    xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
    for (double xv : xticks)
        svg << "<text x=\"" << px(xv) << "\" y=\"" << (H - B + 18)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt6(xv) << "</text>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"" << (H - 10)
        << "\" text-anchor=\"middle\" font-size=\"12\">n</text>\n";
    svg << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << H / 2 << ")\">" << y_label << "</text>\n";

    double legend_y = T + 4;
    for (const Series& s : series) {
        if (s.points.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : s.points) svg << px(x) << "," << py(y) << " ";
        svg << "\"/>\n";
        for (auto [x, y] : s.points)
            svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\""
                << s.color << "\"/>\n";
        svg << "<rect x=\"" << (W - R - 150) << "\" y=\"" << legend_y << "\" width=\"12\" "
            << "height=\"12\" fill=\"" << s.color << "\"/>\n";
        svg << "<text x=\"" << (W - R - 132) << "\" y=\"" << (legend_y + 10)
            << "\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::string agreement_vs_n_svg(const CsvTable& agreement_table) {
    const int col_n = agreement_table.column("n");
    if (col_n < 0) throw std::runtime_error("agreement table: missing n column");
    const std::vector<std::pair<std::string, std::string>> methods = {
        {"em_ls1", "#d62728"}, {"em_ls2", "#ff7f0e"}, {"em_exact", "#2ca02c"},
        {"exact", "#1f77b4"}};

    std::vector<Series> series;
    for (const auto& [name, color] : methods) {
        const int col = agreement_table.column(name);
        if (col < 0) continue;
        std::map<int, std::pair<double, int>> by_n;
        for (const auto& row : agreement_table.rows) {
            if (row[col].empty()) continue;
            const int n = std::stoi(row[col_n]);
            by_n[n].first += std::stod(row[col]);
            by_n[n].second += 1;
        }
        if (by_n.empty()) continue;
        Series s;
        s.label = name;
        s.color = color;
        for (const auto& [n, acc] : by_n)
            s.points.emplace_back(n, acc.first / acc.second);
        series.push_back(std::move(s));
    }
    return line_chart_svg("Mean agreement with ground truth", "agreement", 0.0, 1.0, series);
}

std::string speedup_vs_n_svg(const CsvTable& exact_sbc, const CsvTable& exact_nosbc) {
    const int n_a = exact_sbc.column("n"), t_a = exact_sbc.column("time_s");
    const int n_b = exact_nosbc.column("n"), t_b = exact_nosbc.column("time_s");
    if (n_a < 0 || t_a < 0 || n_b < 0 || t_b < 0)
        throw std::runtime_error("exact tables: missing n/time_s columns");

    auto key_of = [](const CsvTable& t, const std::vector<std::string>& row) {
        std::string k;
        for (const char* c : {"suite", "K", "n", "cell"}) {
            const int i = t.column(c);
            if (i >= 0) k += row[i] + "|";
        }
        return k;
    };
    std::map<std::string, double> sbc_time;
    std::map<std::string, int> sbc_n;
    for (const auto& row : exact_sbc.rows) {
        sbc_time[key_of(exact_sbc, row)] = std::stod(row[t_a]);
        sbc_n[key_of(exact_sbc, row)] = std::stoi(row[n_a]);
    }
    std::map<int, std::pair<double, int>> ratio_by_n;
    for (const auto& row : exact_nosbc.rows) {
        const std::string k = key_of(exact_nosbc, row);
        auto it = sbc_time.find(k);
        if (it == sbc_time.end() || it->second <= 0.0) continue;
        ratio_by_n[sbc_n[k]].first += std::stod(row[t_b]) / it->second;
        ratio_by_n[sbc_n[k]].second += 1;
    }
    Series s;
    s.label = "time(no SBC) / time(SBC)";
    s.color = "#1f77b4";
    double y_max = 1.0;
    for (const auto& [n, acc] : ratio_by_n) {
        const double v = acc.first / acc.second;
        s.points.emplace_back(n, v);
        y_max = std::max(y_max, v);
    }
    return line_chart_svg("Symmetry breaking speedup", "speed ratio", 0.0, y_max * 1.1, {s});
}

} // namespace dcsbm
