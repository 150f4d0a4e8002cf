#include "hjlab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hjlab/csv.hpp"

namespace hjlab {

namespace {

constexpr double kSweepTol = 1e-12;
constexpr long kSweepCap = 1000000; // guards bugs; 1D sweeps converge in O(1)
constexpr double kFarValue = 1e100;

// Alternating Gauss-Seidel sweeps of v_i <- min(v_{i-1}, v_{i+1}) + h_i.
// pinned nodes keep their value; free boundaries take the one-sided update.
void fast_sweep(std::vector<double>& v, const std::vector<double>& h,
                const std::vector<char>& pinned, bool free_boundary) {
    const int n = static_cast<int>(v.size());
    auto relax = [&](int i) {
        if (pinned[i]) return;
        double nb;
        if (i == 0) {
            if (!free_boundary) return;
            nb = v[1];
        } else if (i == n - 1) {
            if (!free_boundary) return;
            nb = v[n - 2];
        } else {
            nb = std::min(v[i - 1], v[i + 1]);
        }
        v[i] = nb + h[i];
    };
    std::vector<double> before(v.size());
    for (long sweep = 0; sweep < kSweepCap; ++sweep) {
        before = v;
        if (sweep % 2 == 0)
            for (int i = 0; i < n; ++i) relax(i);
        else
            for (int i = n - 1; i >= 0; --i) relax(i);
        double change = 0.0;
        for (int i = 0; i < n; ++i) change = std::max(change, std::abs(v[i] - before[i]));
        if (change < kSweepTol) return;
    }
    throw std::runtime_error("fast_sweep: no convergence within the sweep cap");
}

} // namespace

double default_aubry_tol(const ScalarField& cost) {
    return 1e-9 * (1.0 + max_value(cost));
}

AubrySet extract_aubry(const ScalarField& cost, double tol) {
    const Grid& g = cost.grid;
    AubrySet a;
    a.grid = g;
    a.tol = tol;
    for (int i = 0; i < g.n; ++i)
        if (cost[i] <= tol) a.nodes.push_back(i);
    ensure(!a.nodes.empty(), "extract_aubry: empty node set (cost not normalized?)");

    for (std::size_t k = 0; k < a.nodes.size();) {
        std::size_t j = k;
        while (j + 1 < a.nodes.size() && a.nodes[j + 1] == a.nodes[j] + 1) ++j;
        a.components.emplace_back(a.nodes[k], a.nodes[j]);
        k = j + 1;
    }

    a.degenerate = static_cast<int>(a.nodes.size()) == g.n;
    if (a.degenerate) {
        a.eps_margin = 0.0;
        a.radius = std::max(std::abs(g.x_min), std::abs(g.x_max));
        return a;
    }

    // Hull of the node set inflated by one node on each side.
    int lo = std::max(0, a.nodes.front() - 1);
    int hi = std::min(g.n - 1, a.nodes.back() + 1);
    a.radius = std::max(std::abs(g.coord(lo)), std::abs(g.coord(hi)));
    double eps = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n; ++i)
        if (i < lo || i > hi) eps = std::min(eps, cost[i]);
    a.eps_margin = std::isfinite(eps) ? eps : 0.0;
    return a;
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::DirichletLimit: return "dirichlet-limit";
        case Provenance::PerronMin: return "perron-min";
        case Provenance::LongTimeLimit: return "long-time-limit";
    }
    return "?";
}

std::string to_string(Normalization n) {
    return n == Normalization::ZeroAtOrigin ? "zero-at-origin" : "zero-on-aubry";
}

ScalarField solve_dirichlet(const HamiltonianSpec& h, const std::function<double(double)>& cost,
                            double c, double radius, double dx) {
    ensure_arg(h.kind == HamiltonianSpec::Kind::Eikonal, "solve_dirichlet: Eikonal kind only");
    ensure_arg(c >= 0, "solve_dirichlet: no subsolution exists for c < 0");
    ensure_arg(radius > 0 && dx > 0, "solve_dirichlet: bad radius or dx");

    int half = static_cast<int>(std::llround(radius / dx));
    ensure_arg(half >= 1, "solve_dirichlet: radius below one cell");
    Grid g = make_uniform_grid(-radius, radius, 2 * half + 1);

    std::vector<double> rhs(g.n), v(g.n, kFarValue);
    std::vector<char> pinned(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        double x = g.coord(i);
        double a = h.speed(x);
        ensure_arg(a > 0, "solve_dirichlet: a(x) must be positive");
        double li = cost(x) + c;
        ensure_arg(li >= 0, "solve_dirichlet: cost + c must be >= 0");
        rhs[i] = g.dx * li / a;
    }
    v[0] = 0.0;
    v[g.n - 1] = 0.0;
    pinned[0] = pinned[g.n - 1] = 1;

    fast_sweep(v, rhs, pinned, /*free_boundary=*/false);

    ScalarField out(g);
    out.values = std::move(v);
    return out;
}

std::string DirichletLimitResult::to_text() const {
    std::ostringstream os;
    os << "dirichlet_limit.window = [" << window.first << "," << window.second << "]\n";
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        os << "dirichlet_limit.diff[" << radii[k] << "->" << radii[k + 1]
           << "] = " << window_diffs[k] << "\n";
    os << "dirichlet_limit.stabilized = " << (stabilized ? "yes" : "no") << "\n";
    return os.str();
}

DirichletLimitResult dirichlet_limit(const HamiltonianSpec& h,
                                     const std::function<double(double)>& cost, double c,
                                     const std::vector<double>& radii, double dx,
                                     std::pair<double, double> window) {
    ensure_arg(radii.size() >= 2, "dirichlet_limit: need at least two radii");
    ensure_arg(std::is_sorted(radii.begin(), radii.end()), "dirichlet_limit: radii must increase");
    ensure_arg(window.first < window.second && -radii.front() <= window.first &&
                   window.second <= radii.front(),
               "dirichlet_limit: window must sit inside the smallest ball");

    DirichletLimitResult res;
    res.radii = radii;
    res.window = window;

    std::vector<ScalarField> normalized;
    for (double radius : radii) {
        ScalarField vr = solve_dirichlet(h, cost, c, radius, dx);
        // v_R = V_R - V_R(0)
        double at0 = interp_linear(vr, 0.0);
        for (double& v : vr.values) v -= at0;
        normalized.push_back(std::move(vr));
    }

    for (std::size_t k = 0; k + 1 < normalized.size(); ++k) {
        double sup = 0.0;
        const Grid& g = normalized[k].grid;
        for (int i = 0; i < g.n; ++i) {
            double x = g.coord(i);
            if (x < window.first || x > window.second) continue;
            sup = std::max(sup, std::abs(normalized[k][i] - interp_linear(normalized[k + 1], x)));
        }
        res.window_diffs.push_back(sup);
    }
    for (std::size_t k = 0; k + 1 < res.window_diffs.size(); ++k)
        if (res.window_diffs[k + 1] > res.window_diffs[k] + kSweepTol) res.stabilized = false;

    res.solution.c = c;
    res.solution.v = std::move(normalized.back());
    res.solution.provenance = Provenance::DirichletLimit;
    res.solution.normalization = Normalization::ZeroAtOrigin;
    return res;
}

ErgodicSolution solve_perron_min(const HamiltonianSpec& h, const ScalarField& cost,
                                 const AubrySet& aubry) {
    ensure_arg(h.kind == HamiltonianSpec::Kind::Eikonal, "solve_perron_min: Eikonal kind only");
    ensure_arg(!aubry.nodes.empty(), "solve_perron_min: empty Aubry set");
    const Grid& g = cost.grid;
    ensure_arg(aubry.grid.same_as(g), "solve_perron_min: Aubry set from another grid");

    std::vector<double> rhs(g.n), v(g.n, kFarValue);
    std::vector<char> pinned(g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        double a = h.speed(g.coord(i));
        ensure_arg(a > 0, "solve_perron_min: a(x) must be positive");
        rhs[i] = g.dx * std::max(cost[i], 0.0) / a;
    }
    for (int i : aubry.nodes) {
        v[i] = 0.0;
        pinned[i] = 1;
    }

    fast_sweep(v, rhs, pinned, /*free_boundary=*/true);

    ErgodicSolution sol;
    sol.c = 0.0;
    sol.v = ScalarField(g);
    sol.v.values = std::move(v);
    sol.provenance = Provenance::PerronMin;
    sol.normalization = Normalization::ZeroOnAubry;
    return sol;
}

ErgodicSolution from_history(const SnapshotHistory& hist, double c, Normalization norm,
                             const AubrySet* aubry) {
    ErgodicSolution sol;
    sol.c = c;
    sol.v = hist.final_field();
    double t = hist.times.back();
    for (double& v : sol.v.values) v += c * t;
    sol.provenance = Provenance::LongTimeLimit;
    sol.normalization = norm;
    if (norm == Normalization::ZeroAtOrigin) {
        double at0 = interp_linear(sol.v, 0.0);
        for (double& v : sol.v.values) v -= at0;
    } else {
        ensure_arg(aubry != nullptr && !aubry->nodes.empty(),
                   "from_history: zero-on-aubry needs an Aubry set");
        double ref = sol.v[aubry->nodes.front()];
        for (double& v : sol.v.values) v -= ref;
    }
    return sol;
}

double estimate_ergodic_constant(const SnapshotHistory& hist,
                                 std::pair<double, double> window, double t_lo) {
    ensure_arg(window.first < window.second, "estimate_ergodic_constant: bad window");
    std::vector<double> ts, means;
    for (int k = 0; k < hist.slice_count(); ++k) {
        if (hist.times[k] < t_lo) continue;
        auto [lo, hi] = hist.trust_interval(k);
        ensure(window.first >= lo && window.second <= hi,
               "estimate_ergodic_constant: window outside the trust region at t = " +
                   std::to_string(hist.times[k]));
        double sum = 0.0;
        long cnt = 0;
        for (int i = 0; i < hist.grid.n; ++i) {
            double x = hist.grid.coord(i);
            if (x < window.first || x > window.second) continue;
            sum += hist.fields[k][i];
            ++cnt;
        }
        ensure(cnt > 0, "estimate_ergodic_constant: window contains no nodes");
        ts.push_back(hist.times[k]);
        means.push_back(sum / cnt);
    }
    ensure(ts.size() >= 3, "estimate_ergodic_constant: need >= 3 stored slices after t_lo");

    double tbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        tbar += ts[k];
        ybar += means[k];
    }
    tbar /= ts.size();
    ybar /= ts.size();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        num += (ts[k] - tbar) * (means[k] - ybar);
        den += (ts[k] - tbar) * (ts[k] - tbar);
    }
    return -num / den;
}

std::string GrowthReport::to_text() const {
    std::ostringstream os;
    os << "growth.checked = " << (checked ? "yes" : "skipped") << "\n";
    if (checked) {
        os << "growth.kind = " << what << "\n"
           << "growth.verdict = " << (pass ? "pass" : "fail") << "\n"
           << "growth.worst_margin = " << worst_margin << "\n";
    }
    return os.str();
}

GrowthReport growth_diagnostics(const ErgodicSolution& sol, const AubrySet& aubry,
                                const std::function<double(double)>& m_inv,
                                const std::vector<double>& radii_ladder) {
    GrowthReport rep;
    const Grid& g = sol.v.grid;
    if (sol.c > 0) {
        // Unbounded below: min over [-R,R] of v <= v(0) - m_inv(min l + c) R + slack.
        rep.checked = true;
        rep.what = "unbounded-below ladder";
        double v0 = interp_linear(sol.v, 0.0);
        double alpha = m_inv(sol.c); // cost normalized: min l = 0
        rep.worst_margin = std::numeric_limits<double>::infinity();
        int used = 0;
        for (double radius : radii_ladder) {
            if (radius > std::min(std::abs(g.x_min), std::abs(g.x_max))) continue;
            ++used;
            double mn = std::numeric_limits<double>::infinity();
            for (int i = 0; i < g.n; ++i) {
                double x = g.coord(i);
                if (std::abs(x) <= radius) mn = std::min(mn, sol.v[i]);
            }
            double margin = (v0 - alpha * radius + g.dx * (1.0 + alpha)) - mn;
            rep.worst_margin = std::min(rep.worst_margin, margin);
        }
        if (used == 0) {
            rep.checked = false;
            rep.what = "skipped (ladder outside the domain)";
            return rep;
        }
        rep.pass = rep.worst_margin >= 0;
        return rep;
    }
    if (aubry.degenerate || sol.provenance != Provenance::PerronMin) {
        rep.checked = false;
        rep.what = "skipped (degenerate Aubry set or non-Perron c = 0 solution)";
        return rep;
    }
    // Growth to +infinity: v(x) >= m_inv(eps)(|x| - R_A) - slack outside R_A.
    rep.checked = true;
    rep.what = "perron growth";
    double rate = m_inv(aubry.eps_margin);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.n; ++i) {
        double x = g.coord(i);
        if (std::abs(x) <= aubry.radius) continue;
        double required = rate * (std::abs(x) - aubry.radius) - g.dx * (1.0 + rate);
        rep.worst_margin = std::min(rep.worst_margin, sol.v[i] - required);
    }
    if (!std::isfinite(rep.worst_margin)) {
        rep.checked = false;
        rep.what = "skipped (no nodes outside the Aubry radius)";
        return rep;
    }
    rep.pass = rep.worst_margin >= 0;
    return rep;
}

std::string GradientBoundReport::to_text() const {
    std::ostringstream os;
    os << "gradient_bound.verdict = " << (pass ? "pass" : "fail") << "\n"
       << "gradient_bound.bound = " << bound << "\n"
       << "gradient_bound.slack = " << slack << "\n"
       << "gradient_bound.worst_slope = " << worst_slope << "\n"
       << "gradient_bound.worst_x = " << worst_x << "\n";
    return os.str();
}

GradientBoundReport gradient_bound_check(const ErgodicSolution& sol, const ScalarField& cost,
                                         const std::function<double(double)>& nu) {
    const Grid& g = sol.v.grid;
    ensure_arg(cost.grid.same_as(g), "gradient_bound_check: grids differ");
    GradientBoundReport rep;
    for (int i = 0; i < g.n; ++i) {
        double w = nu(g.coord(i));
        ensure_arg(w > 0, "gradient_bound_check: nu must be positive");
        rep.bound = std::max(rep.bound, (cost[i] + sol.c) / w);
    }
    rep.slack = g.dx * (1.0 + rep.bound);
    for (int i = 1; i + 1 < g.n; ++i) {
        for (double s : {(sol.v[i] - sol.v[i - 1]) / g.dx, (sol.v[i + 1] - sol.v[i]) / g.dx}) {
            if (std::abs(s) > std::abs(rep.worst_slope)) {
                rep.worst_slope = s;
                rep.worst_x = g.coord(i);
            }
        }
    }
    rep.pass = std::abs(rep.worst_slope) <= rep.bound + rep.slack;
    return rep;
}

void write_ergodic_solution(const ErgodicSolution& sol, const std::filesystem::path& csv_path,
                            const std::filesystem::path& meta_path,
                            double residual_sup, double residual_l1) {
    write_field_csv(sol.v, csv_path);
    std::ofstream meta(meta_path, std::ios::binary);
    ensure(meta.good(), "cannot open for writing: " + meta_path.string());
    meta << "c = " << format_double(sol.c) << "\n"
         << "provenance = " << to_string(sol.provenance) << "\n"
         << "normalization = " << to_string(sol.normalization) << "\n"
         << "residual_sup = " << format_double(residual_sup) << "\n"
         << "residual_l1 = " << format_double(residual_l1) << "\n";
    ensure(meta.good(), "write failed: " + meta_path.string());
}

} // namespace hjlab
