#include "dcsbm/instance_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dcsbm {

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_real12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path);
    }
}

namespace {

struct LineReader {
    std::istringstream in;
    std::string origin;
    int lineno = 0;

    LineReader(const std::string& text, std::string org) : in(text), origin(std::move(org)) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + msg);
    }

    std::string next(const char* what) {
        std::string line;
        if (!std::getline(in, line)) {
            ++lineno;
            fail(std::string("unexpected end of file, expected ") + what);
        }
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }
};

long long parse_ll(LineReader& r, const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        r.fail(std::string("cannot parse ") + what + " from '" + tok + "'");
    }
}

double parse_double(LineReader& r, const std::string& tok, const char* what) {
    try {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        r.fail(std::string("cannot parse ") + what + " from '" + tok + "'");
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

} // namespace

std::string instance_to_string(const Instance& inst) {
    std::ostringstream out;
    const Graph& g = inst.graph;
    out << "dcsbm-instance v1\n";
    out << "n " << g.n() << " m " << g.m() << " K " << inst.K << " seed ";
    if (inst.seed)
        out << *inst.seed;
    else
        out << "none";
    out << "\n";
    if (inst.ground_truth) {
        out << "ground-truth";
        for (int l : inst.ground_truth->labels) out << " " << (l + 1);
        out << "\n";
    } else {
        out << "ground-truth none\n";
    }
    if (inst.gen_omega) {
        out << "gen-omega\n";
        const AffinityMatrix& om = *inst.gen_omega;
        for (int r = 0; r < om.K; ++r) {
            for (int s = 0; s < om.K; ++s) {
                if (s) out << " ";
                out << format_real(om(r, s));
            }
            out << "\n";
        }
    } else {
        out << "gen-omega none\n";
    }
    out << "edges\n";
    for (int i = 0; i < g.n(); ++i) {
        if (g.adj(i, i) > 0)
            out << (i + 1) << " " << (i + 1) << " " << g.adj(i, i) / 2 << "\n";
        for (int j = i + 1; j < g.n(); ++j)
            if (g.adj(i, j) > 0)
                out << (i + 1) << " " << (j + 1) << " " << g.adj(i, j) << "\n";
    }
    out << "end\n";
    return out.str();
}

Instance instance_from_string(const std::string& text, const std::string& origin) {
    LineReader r(text, origin);

    if (r.next("magic header") != "dcsbm-instance v1") r.fail("expected 'dcsbm-instance v1'");

    auto header = split_ws(r.next("header line"));
    if (header.size() != 8 || header[0] != "n" || header[2] != "m" || header[4] != "K" ||
        header[6] != "seed")
        r.fail("expected 'n <n> m <m> K <K> seed <u64|none>'");
    const long long n = parse_ll(r, header[1], "n");
    const long long m_declared = parse_ll(r, header[3], "m");
    const long long K = parse_ll(r, header[5], "K");
    if (n < 1) r.fail("n must be >= 1");
    if (K < 1) r.fail("K must be >= 1");

    Instance inst;
    inst.K = static_cast<int>(K);
    if (header[7] != "none") {
        try {
            inst.seed = std::stoull(header[7]);
        } catch (const std::exception&) {
            r.fail("cannot parse seed from '" + header[7] + "'");
        }
    }

    auto truth_toks = split_ws(r.next("ground-truth line"));
    if (truth_toks.empty() || truth_toks[0] != "ground-truth") r.fail("expected 'ground-truth ...'");
    if (!(truth_toks.size() == 2 && truth_toks[1] == "none")) {
        if (static_cast<long long>(truth_toks.size()) != n + 1)
            r.fail("ground-truth must list exactly n labels");
        Assignment truth;
        truth.K = inst.K;
        for (long long i = 1; i <= n; ++i) {
            long long l = parse_ll(r, truth_toks[i], "label");
            if (l < 1 || l > K) r.fail("ground-truth label out of range 1..K");
            truth.labels.push_back(static_cast<int>(l - 1));
        }
        inst.ground_truth = std::move(truth);
    }

    std::string omega_line = r.next("gen-omega line");
    if (omega_line == "gen-omega") {
        AffinityMatrix om(inst.K);
        for (int row = 0; row < inst.K; ++row) {
            auto toks = split_ws(r.next("gen-omega row"));
            if (static_cast<int>(toks.size()) != inst.K) r.fail("gen-omega row must have K entries");
            for (int col = 0; col < inst.K; ++col)
                om.w[static_cast<size_t>(row) * inst.K + col] =
                    parse_double(r, toks[col], "omega entry");
        }
        if (!om.symmetric_nonnegative()) r.fail("gen-omega must be symmetric and nonnegative");
        inst.gen_omega = std::move(om);
    } else if (omega_line != "gen-omega none") {
        r.fail("expected 'gen-omega' or 'gen-omega none'");
    }

    if (r.next("edges header") != "edges") r.fail("expected 'edges'");

    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    std::map<std::pair<long long, long long>, bool> seen;
    for (;;) {
        std::string line = r.next("edge line or 'end'");
        if (line == "end") break;
        auto toks = split_ws(line);
        if (toks.size() != 3) r.fail("edge line must be '<i> <j> <count>'");
        long long i = parse_ll(r, toks[0], "edge endpoint");
        long long j = parse_ll(r, toks[1], "edge endpoint");
        long long c = parse_ll(r, toks[2], "edge count");
        if (i < 1 || i > n || j < 1 || j > n) r.fail("edge endpoint out of range 1..n");
        if (i > j) r.fail("edge endpoints must satisfy i <= j");
        if (c < 1) r.fail("edge count must be >= 1");
        if (seen.count({i, j})) r.fail("duplicate edge line");
        seen[{i, j}] = true;
        if (i == j) {
            adj[i - 1][i - 1] = static_cast<int>(2 * c); // c self-loops
        } else {
            adj[i - 1][j - 1] = static_cast<int>(c);
            adj[j - 1][i - 1] = static_cast<int>(c);
        }
    }

    inst.graph = Graph::from_adjacency(std::move(adj));
    if (inst.graph.m() != m_declared)
        r.fail("header declares m=" + std::to_string(m_declared) + " but edges sum to m=" +
               std::to_string(inst.graph.m()));
    if (inst.ground_truth && inst.ground_truth->n() != inst.graph.n())
        r.fail("ground-truth length does not match n");
    return inst;
}

Instance read_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Instance inst = instance_from_string(ss.str(), path);
    auto slash = path.find_last_of('/');
    inst.name = slash == std::string::npos ? path : path.substr(slash + 1);
    return inst;
}

void write_instance(const Instance& inst, const std::string& path) {
    atomic_write_file(path, instance_to_string(inst));
}

std::string solution_to_string(const Solution& sol) {
    std::ostringstream out;
    out << "dcsbm-solution v1\n";
    out << "objective " << format_real12(sol.objective) << "\n";
    out << "status " << sol.status << "\n";
    out << "labels";
    for (int l : sol.assignment.labels) out << " " << (l + 1);
    out << "\n";
    out << "omega\n";
    for (int r = 0; r < sol.omega.K; ++r) {
        for (int s = 0; s < sol.omega.K; ++s) {
            if (s) out << " ";
            out << format_real(sol.omega(r, s));
        }
        out << "\n";
    }
    return out.str();
}

void write_solution(const Solution& sol, const std::string& path) {
    atomic_write_file(path, solution_to_string(sol));
}

Solution read_solution(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open solution file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    LineReader r(ss.str(), path);

    if (r.next("magic header") != "dcsbm-solution v1") r.fail("expected 'dcsbm-solution v1'");

    Solution sol;
    auto obj = split_ws(r.next("objective line"));
    if (obj.size() != 2 || obj[0] != "objective") r.fail("expected 'objective <value>'");
    sol.objective = parse_double(r, obj[1], "objective");

    auto st = split_ws(r.next("status line"));
    if (st.size() != 2 || st[0] != "status") r.fail("expected 'status <status>'");
    if (st[1] != "optimal" && st[1] != "feasible" && st[1] != "time-limit")
        r.fail("status must be optimal|feasible|time-limit");
    sol.status = st[1];

    auto lab = split_ws(r.next("labels line"));
    if (lab.empty() || lab[0] != "labels") r.fail("expected 'labels ...'");
    int max_label = 1;
    for (size_t i = 1; i < lab.size(); ++i) {
        long long l = parse_ll(r, lab[i], "label");
        if (l < 1) r.fail("label must be >= 1");
        max_label = std::max<int>(max_label, static_cast<int>(l));
        sol.assignment.labels.push_back(static_cast<int>(l - 1));
    }

    if (r.next("omega header") != "omega") r.fail("expected 'omega'");
    std::string first = r.next("omega row");
    auto row0 = split_ws(first);
    const int K = static_cast<int>(row0.size());
    if (K < 1) r.fail("omega matrix must have at least one column");
    sol.omega = AffinityMatrix(K);
    for (int col = 0; col < K; ++col)
        sol.omega.w[col] = parse_double(r, row0[col], "omega entry");
    for (int row = 1; row < K; ++row) {
        auto toks = split_ws(r.next("omega row"));
        if (static_cast<int>(toks.size()) != K) r.fail("omega rows must all have K entries");
        for (int col = 0; col < K; ++col)
            sol.omega.w[static_cast<size_t>(row) * K + col] =
                parse_double(r, toks[col], "omega entry");
    }
    sol.assignment.K = std::max(K, max_label);
    return sol;
}

} // namespace dcsbm
