#include "dcsbm/relaxation.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "dcsbm/instance_io.hpp"

namespace dcsbm {

double f_eval(const Graph& g, int i, int j, double w) {
    const int a = g.adj(i, j);
    if (w < 0.0) throw std::domain_error("f_eval: omega must be nonnegative");
    if (w == 0.0) {
        if (a > 0) throw std::domain_error("f_eval: omega = 0 with A_ij > 0");
        return 0.0;
    }
    double v = g.expected_edges(i, j) * w;
    if (a > 0) v -= a * std::log(w);
    return v;
}

TangentCut tangent_cut(const Graph& g, int i, int j, double w_tilde) {
    if (w_tilde <= 0.0) throw std::domain_error("tangent_cut: breakpoint must be positive");
    TangentCut c;
    c.i = i;
    c.j = j;
    c.w_tilde = w_tilde;
    c.a = -static_cast<double>(g.adj(i, j)) / w_tilde + g.expected_edges(i, j);
    c.b = static_cast<double>(g.adj(i, j)) * (1.0 - std::log(w_tilde));
    return c;
}

BoundSet build_bounds(const Graph& g) {
    if (g.m() < 1) throw std::invalid_argument("build_bounds: graph has no edges");
    const int n = g.n();
    BoundSet bs;
    bs.rho = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double kk = static_cast<double>(g.degree(i)) * g.degree(j);
            if (kk > 0.0) bs.rho = std::max(bs.rho, g.adj(i, j) / kk);
        }
    bs.omega_upper = 2.0 * g.m() * bs.rho;

    bs.m_low.assign(n, std::vector<double>(n, 0.0));
    bs.m_up.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int a = g.adj(i, j);
            const double kk2m = g.expected_edges(i, j);
            if (a == 0) {
                bs.m_low[i][j] = 0.0;
                bs.m_up[i][j] = kk2m * bs.omega_upper;
            } else {
                bs.m_low[i][j] = a * (1.0 - std::log(static_cast<double>(a)) + std::log(kk2m));
                bs.m_up[i][j] =
                    std::max(f_eval(g, i, j, bs.omega_lower), f_eval(g, i, j, bs.omega_upper));
            }
        }
    return bs;
}

std::vector<TangentCut> separate_cuts(const Graph& g, const MilpPoint& point,
                                      const std::vector<TangentCut>& existing, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("separate_cuts: eps must be positive");
    std::vector<TangentCut> out;
    std::set<std::tuple<int, int, double>> emitted;
    for (const ActiveCell& cell : point.active) {
        const double w = point.omega(cell.r, cell.s);
        const double f = f_eval(g, cell.i, cell.j, w);
        double best = -std::numeric_limits<double>::infinity();
        for (const TangentCut& c : existing)
            if (c.i == cell.i && c.j == cell.j) best = std::max(best, c.a * w + c.b);
        if (f - best > eps) {
            auto key = std::make_tuple(cell.i, cell.j, w);
            if (emitted.insert(key).second) out.push_back(tangent_cut(g, cell.i, cell.j, w));
        }
    }
    return out;
}

std::vector<double> initial_breakpoints(const BoundSet& bounds, int count) {
    if (count < 1) throw std::invalid_argument("initial_breakpoints: count must be >= 1");
    const double hi = bounds.omega_upper;
    const double lo = std::max(bounds.omega_lower, std::min(1e-3, hi));
    std::vector<double> pts;
    if (count == 1 || lo >= hi) {
        pts.push_back(hi);
        return pts;
    }
    const double ratio = hi / lo;
    for (int t = 0; t < count; ++t)
        pts.push_back(lo * std::pow(ratio, static_cast<double>(t) / (count - 1)));
    return pts;
}

namespace {

std::string var_z(int i, int r) {
    return "z_" + std::to_string(i + 1) + "_" + std::to_string(r + 1);
}
std::string var_w(int r, int s) {
    if (r > s) std::swap(r, s);
    return "w_" + std::to_string(r + 1) + "_" + std::to_string(s + 1);
}
std::string var_y(int i, int j, int r, int s) {
    return "y_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
           std::to_string(r + 1) + "_" + std::to_string(s + 1);
}
std::string var_x(int i, int j, int r, int s) {
    return "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
           std::to_string(r + 1) + "_" + std::to_string(s + 1);
}

// signed coefficient in LP syntax, e.g. " - 0.5 w_1_1"
std::string term(double coeff, const std::string& var) {
    std::string s = coeff < 0 ? " - " : " + ";
    return s + format_real(std::fabs(coeff)) + " " + var;
}

} // namespace

std::string milp_to_string(const Instance& inst, const BoundSet& bounds,
                           const MilpExportConfig& cfg) {
    const Graph& g = inst.graph;
    const int n = g.n();
    const int K = inst.K;
    std::ostringstream out;

    out << "\\ dcsbm maximum-likelihood MILP (negative log-likelihood, constant term omitted)\n";
    out << "\\ instance: n=" << n << " m=" << g.m() << " K=" << K
        << " sbc=" << (cfg.sbc ? "on" : "off") << " breakpoints=" << cfg.breakpoints.size()
        << " eps=" << format_real(cfg.eps) << "\n";
    out << "Minimize\n obj:";
    bool first = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int r = 0; r < K; ++r)
                for (int s = 0; s < K; ++s) {
                    out << (first ? " " : " + ") << var_x(i, j, r, s);
                    first = false;
                }
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < K; ++r) {
            out << (first ? " 0.5 " : " + 0.5 ") << var_x(i, i, r, r);
            first = false;
        }
    out << "\nSubject To\n";

    for (int i = 0; i < n; ++i) {
        out << " assign_" << (i + 1) << ":";
        for (int r = 0; r < K; ++r) out << (r ? " + " : " ") << var_z(i, r);
        out << " = 1\n";
    }

    // y_ijrs = z_ir z_js, three inequalities per product
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int r = 0; r < K; ++r)
                for (int s = 0; s < K; ++s) {
                    const std::string y = var_y(i, j, r, s);
                    const std::string tag = "_" + std::to_string(i + 1) + "_" +
                                            std::to_string(j + 1) + "_" + std::to_string(r + 1) +
                                            "_" + std::to_string(s + 1);
                    out << " lin1" << tag << ": " << var_z(i, r) << " - " << y << " >= 0\n";
                    out << " lin2" << tag << ": " << var_z(j, s) << " - " << y << " >= 0\n";
                    out << " lin3" << tag << ": " << y << " - " << var_z(i, r) << " - "
                        << var_z(j, s) << " >= -1\n";
                }

    // big-M activation and tangent rows; the diagonal pair (i,i) is activated
    // directly by z_ir
    auto emit_x_rows = [&](int i, int j, int r, int s, const std::string& act) {
        const double mlow = bounds.m_low[i][j];
        const double mup = bounds.m_up[i][j];
        const std::string x = var_x(i, j, r, s);
        const std::string tag = "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" +
                                std::to_string(r + 1) + "_" + std::to_string(s + 1);
        out << " xup" << tag << ": " << x << term(-mup, act) << " <= 0\n";
        out << " xlo" << tag << ": " << x << term(-mlow, act) << " >= 0\n";
        for (size_t p = 0; p < cfg.breakpoints.size(); ++p) {
            const TangentCut c = tangent_cut(g, i, j, cfg.breakpoints[p]);
            out << " cut" << tag << "_" << (p + 1) << ": " << x << term(-c.a, var_w(r, s))
                << term(-mup, act) << " >= " << format_real(c.b - mup) << "\n";
        }
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int r = 0; r < K; ++r)
                for (int s = 0; s < K; ++s) emit_x_rows(i, j, r, s, var_y(i, j, r, s));
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < K; ++r) emit_x_rows(i, i, r, r, var_z(i, r));

    if (cfg.sbc) {
        out << " sbc_fix: " << var_z(0, 0) << " = 1\n";
        // lexicographically minimal labelings:
        // sum_{i=2}^{j-1} sum_{l<r} z_il - sum_{l<=r} z_jl <= j - 3
        for (int r = 2; r <= K - 1; ++r)
            for (int j = r; j <= n; ++j) {
                out << " sbc_" << r << "_" << j << ":";
                bool any = false;
                for (int i = 2; i <= j - 1; ++i)
                    for (int l = 1; l <= r - 1; ++l) {
                        out << (any ? " + " : " ") << var_z(i - 1, l - 1);
                        any = true;
                    }
                for (int l = 1; l <= r; ++l) {
                    out << (any ? " - " : " - ") << var_z(j - 1, l - 1);
                    any = true;
                }
                out << " <= " << (j - 3) << "\n";
            }
    }

    out << "Bounds\n";
    for (int r = 0; r < K; ++r)
        for (int s = r; s < K; ++s)
            out << " " << format_real(bounds.omega_lower) << " <= " << var_w(r, s)
                << " <= " << format_real(bounds.omega_upper) << "\n";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int r = 0; r < K; ++r)
                for (int s = 0; s < K; ++s) {
                    out << " 0 <= " << var_y(i, j, r, s) << " <= 1\n";
                    out << " " << var_x(i, j, r, s) << " free\n";
                }
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < K; ++r) out << " " << var_x(i, i, r, r) << " free\n";

    out << "Binaries\n";
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < K; ++r) out << " " << var_z(i, r) << "\n";
    out << "End\n";
    return out.str();
}

std::string cut_recipe_to_string(const Instance& inst, const BoundSet& bounds,
                                 const MilpExportConfig& cfg) {
    const Graph& g = inst.graph;
    std::ostringstream out;
    out << "# dcsbm milp cut recipe v1\n";
    out << "# n=" << g.n() << " m=" << g.m() << " K=" << inst.K << " eps=" << format_real(cfg.eps)
        << " omega_lower=" << format_real(bounds.omega_lower)
        << " omega_upper=" << format_real(bounds.omega_upper) << "\n";
    out << "# objective merges symmetric terms: x_i_j_r_s (i<j) has coefficient 1, the\n";
    out << "# diagonal x_i_i_r_r has coefficient 0.5; omega variables exist for r<=s only.\n";
    out << "# lazy separation: for an active cell (i,j,r,s) with value w = w_rs, if\n";
    out << "#   f_ij(w) exceeds all tangents a*w+b by more than eps, add\n";
    out << "#   x - a*w_rs - Mup*y >= b - Mup with a = -A_ij/w + kikj_over_2m,\n";
    out << "#   b = A_ij*(1 - log w).\n";
    out << "# pair lines: i j A_ij kikj_over_2m Mlow Mup\n";
    for (int i = 0; i < g.n(); ++i)
        for (int j = i; j < g.n(); ++j)
            out << (i + 1) << " " << (j + 1) << " " << g.adj(i, j) << " "
                << format_real(g.expected_edges(i, j)) << " " << format_real(bounds.m_low[i][j])
                << " " << format_real(bounds.m_up[i][j]) << "\n";
    return out.str();
}

void export_milp(const Instance& inst, const BoundSet& bounds, const MilpExportConfig& cfg,
                 const std::string& path) {
    atomic_write_file(path, milp_to_string(inst, bounds, cfg));
    atomic_write_file(path + ".cuts", cut_recipe_to_string(inst, bounds, cfg));
}

} // namespace dcsbm
