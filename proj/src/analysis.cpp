#include "hjlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hjlab {

namespace {

SnapshotHistory convolve(const SnapshotHistory& hist, double eps, bool inf_side) {
    ensure_arg(hist.slice_count() >= 2, "convolution: need >= 2 stored slices");
    ensure_arg(eps > 0, "convolution: eps must be positive");
    SnapshotHistory out = hist;
    const int n = hist.grid.n;
    const int m = hist.slice_count();
    for (int k = 0; k < m; ++k) {
        double t = hist.times[k];
        for (int i = 0; i < n; ++i) {
            double best = inf_side ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
            for (int s = 0; s < m; ++s) {
                double pen = (t - hist.times[s]) * (t - hist.times[s]) / (eps * eps);
                double val = inf_side ? hist.fields[s][i] + pen : hist.fields[s][i] - pen;
                best = inf_side ? std::min(best, val) : std::max(best, val);
            }
            out.fields[k][i] = best;
        }
    }
    return out;
}

} // namespace

SnapshotHistory inf_convolution(const SnapshotHistory& hist, double eps) {
    return convolve(hist, eps, true);
}

SnapshotHistory sup_convolution(const SnapshotHistory& hist, double eps) {
    return convolve(hist, eps, false);
}

ScalarField min_combine(const ScalarField& f, const ScalarField& g) {
    ensure_arg(f.grid.same_as(g.grid), "min_combine: grid mismatch");
    ScalarField out = f;
    for (int i = 0; i < out.size(); ++i) out[i] = std::min(f[i], g[i]);
    return out;
}

std::string ResidualReport::to_text() const {
    std::ostringstream os;
    os << "residual.sup_interior = " << sup_interior << "\n"
       << "residual.l1_interior = " << l1_interior << "\n";
    return os.str();
}

ResidualReport residual_stationary(const ScalarField& v, const HamiltonianSpec& h,
                                   const ScalarField& cost, double c) {
    const Grid& g = v.grid;
    ensure_arg(cost.grid.same_as(g), "residual_stationary: grids differ");
    ResidualReport rep;
    rep.residual = ScalarField(g);

    double theta = 0.0;
    if (h.kind != HamiltonianSpec::Kind::Eikonal) {
        double pmax = 1.0;
        for (int i = 0; i + 1 < g.n; ++i)
            pmax = std::max(pmax, std::abs((v[i + 1] - v[i]) / g.dx));
        SampleBox box{g.x_min, g.x_max, -1.5 * pmax - 1.0, 1.5 * pmax + 1.0,
                      std::min(g.n, 201), 201};
        theta = lf_dissipation(h, box);
    }

    for (int i = 1; i + 1 < g.n; ++i) {
        double pm = (v[i] - v[i - 1]) / g.dx;
        double pp = (v[i + 1] - v[i]) / g.dx;
        double r = numerical_H(h, g.coord(i), pm, pp, theta) - cost[i] - c;
        rep.residual[i] = r;
        rep.sup_interior = std::max(rep.sup_interior, std::abs(r));
        rep.l1_interior += std::abs(r) * g.dx;
    }
    return rep;
}

std::string ConvergenceReport::to_text() const {
    std::ostringstream os;
    os << "monitor.window = [" << window.first << "," << window.second << "]\n"
       << "monitor.tol = " << tol << "\n"
       << "monitor.c = " << c << "\n"
       << "monitor.verdict = " << (converged ? "converged" : "not-converged") << "\n";
    if (converged) os << "monitor.t_star = " << t_star << "\n";
    os << "monitor.final_distance = " << final_distance << "\n"
       << "monitor.probe_x = " << probe_x << "\n"
       << "monitor.probe_oscillation = " << probe_oscillation << "\n"
       << "monitor.distance_oscillation = " << distance_oscillation << "\n";
    return os.str();
}

ConvergenceReport convergence_monitor(const SnapshotHistory& hist, double c,
                                      const ScalarField& target, std::pair<double, double> window,
                                      double tol) {
    ensure_arg(target.grid.same_as(hist.grid), "convergence_monitor: grids differ");
    ensure_arg(window.first < window.second, "convergence_monitor: bad window");
    ConvergenceReport rep;
    rep.window = window;
    rep.tol = tol;
    rep.c = c;
    rep.probe_x = 0.5 * (window.first + window.second);

    const Grid& g = hist.grid;
    std::vector<double> probe_series;
    for (int k = 0; k < hist.slice_count(); ++k) {
        auto [lo, hi] = hist.trust_interval(k);
        ensure(window.first >= lo && window.second <= hi,
               "convergence_monitor: window outside the trust region at t = " +
                   std::to_string(hist.times[k]));
        double shift = c * hist.times[k];
        double d = 0.0;
        for (int i = 0; i < g.n; ++i) {
            double x = g.coord(i);
            if (x < window.first || x > window.second) continue;
            d = std::max(d, std::abs(hist.fields[k][i] + shift - target[i]));
        }
        rep.times.push_back(hist.times[k]);
        rep.distance.push_back(d);
        probe_series.push_back(interp_linear(hist.fields[k], rep.probe_x) + shift -
                               interp_linear(target, rep.probe_x));
    }
    rep.final_distance = rep.distance.back();

    // T* = first stored time after which d stays <= tol.
    int star = -1;
    for (int k = static_cast<int>(rep.distance.size()) - 1; k >= 0; --k) {
        if (rep.distance[k] <= tol)
            star = k;
        else
            break;
    }
    rep.converged = star >= 0;
    rep.t_star = rep.converged ? rep.times[star] : 0.0;

    // Oscillation statistics over the trailing 25% of stored times.
    std::size_t count = rep.times.size();
    std::size_t band = std::min(count, std::max<std::size_t>(count / 4, 2));
    std::size_t from = count - band;
    double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
    double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
    for (std::size_t k = from; k < rep.times.size(); ++k) {
        pmin = std::min(pmin, probe_series[k]);
        pmax = std::max(pmax, probe_series[k]);
        dmin = std::min(dmin, rep.distance[k]);
        dmax = std::max(dmax, rep.distance[k]);
    }
    rep.probe_oscillation = pmax - pmin;
    rep.distance_oscillation = dmax - dmin;
    return rep;
}

ConvergenceReport convergence_monitor(const SnapshotHistory& hist, const ErgodicSolution& target,
                                      std::pair<double, double> window, double tol) {
    return convergence_monitor(hist, target.c, target.v, window, tol);
}

std::string DecreaseReport::to_text() const {
    std::ostringstream os;
    os << "decrease_on_aubry.verdict = " << (pass ? "pass" : "fail") << "\n"
       << "decrease_on_aubry.worst_violation = " << worst_violation << "\n";
    if (!pass) os << "decrease_on_aubry.worst_at = (x = " << worst_x << ", t = " << worst_t << ")\n";
    return os.str();
}

DecreaseReport decrease_on_aubry(const SnapshotHistory& hist, const AubrySet& aubry) {
    ensure_arg(aubry.grid.same_as(hist.grid), "decrease_on_aubry: grids differ");
    DecreaseReport rep;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < hist.slice_count(); ++k) {
        for (int i : aubry.nodes) {
            double jump = hist.fields[k + 1][i] - hist.fields[k][i];
            if (jump > rep.worst_violation) {
                rep.worst_violation = jump;
                rep.worst_x = hist.grid.coord(i);
                rep.worst_t = hist.times[k + 1];
            }
        }
    }
    rep.pass = rep.worst_violation <= 1e-10;
    return rep;
}

SandwichBounds sandwich_bounds(const SnapshotHistory& hist, const ErgodicSolution& v1,
                               const ErgodicSolution& v2) {
    ensure_arg(v1.v.grid.same_as(hist.grid) && v2.v.grid.same_as(hist.grid),
               "sandwich_bounds: grids differ");
    ensure_arg(v1.c == 0 && v2.c == 0, "sandwich_bounds: c = 0 solutions required");
    double horizon = hist.times.back();
    SandwichBounds b;
    b.k1 = -std::numeric_limits<double>::infinity();
    b.k2 = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 0; k < hist.slice_count(); ++k) {
        if (hist.times[k] < 0.5 * horizon) continue;
        auto [lo, hi] = hist.trust_interval(k);
        ensure(lo < hi, "sandwich_bounds: empty trust interval in the trailing half");
        for (int i = 0; i < hist.grid.n; ++i) {
            double x = hist.grid.coord(i);
            if (x < lo || x > hi) continue;
            any = true;
            b.k1 = std::max(b.k1, v1.v[i] - hist.fields[k][i]);
            b.k2 = std::max(b.k2, hist.fields[k][i] - v2.v[i]);
        }
    }
    ensure(any, "sandwich_bounds: no usable slices in the trailing half");
    b.k1 = std::max(b.k1, 0.0);
    b.k2 = std::max(b.k2, 0.0);
    return b;
}

std::string ConeReport::to_text() const {
    std::ostringstream os;
    os << "cone.inner_ball_delta = " << inner_ball_delta << "\n"
       << "cone.exp_worst = " << exp_cone_worst << "\n"
       << "cone.exp_verdict = " << (exp_cone_pass ? "pass" : "fail") << "\n"
       << "cone.linear_worst = " << linear_cone_worst << "\n"
       << "cone.linear_verdict = " << (linear_cone_pass ? "pass" : "fail") << "\n";
    return os.str();
}

ConeReport dependence_cone_check(const SnapshotHistory& a, const SnapshotHistory& b, double x0,
                                 double r, double c_h, bool require_equal_inside) {
    ensure_arg(a.grid.same_as(b.grid), "dependence_cone_check: grids differ");
    ensure_arg(a.slice_count() == b.slice_count(), "dependence_cone_check: slice counts differ");
    for (int k = 0; k < a.slice_count(); ++k)
        ensure_arg(a.times[k] == b.times[k], "dependence_cone_check: stored times differ");
    ensure_arg(c_h > 0 && r > 0, "dependence_cone_check: need positive r and C_H");

    const Grid& g = a.grid;
    ConeReport rep;
    for (int i = 0; i < g.n; ++i) {
        double x = g.coord(i);
        if (std::abs(x - x0) > r) continue;
        rep.inner_ball_delta = std::max(rep.inner_ball_delta,
                                        std::abs(a.fields[0][i] - b.fields[0][i]));
    }
    if (require_equal_inside && rep.inner_ball_delta != 0.0)
        throw std::invalid_argument("dependence_cone_check: initial data differ inside the ball");

    for (int k = 0; k < a.slice_count(); ++k) {
        double t = a.times[k];
        double speed = std::max(a.speed_max, b.speed_max);
        double linear_radius = r - speed * t - 2.0 * g.dx;
        for (int i = 0; i < g.n; ++i) {
            double x = g.coord(i);
            double diff = std::abs(a.fields[k][i] - b.fields[k][i]);
            if (std::exp(c_h * t) * (1.0 + std::abs(x - x0)) - 1.0 <= r)
                rep.exp_cone_worst = std::max(rep.exp_cone_worst, diff);
            if (std::abs(x - x0) <= linear_radius)
                rep.linear_cone_worst = std::max(rep.linear_cone_worst, diff);
        }
    }
    rep.exp_cone_pass = rep.exp_cone_worst <= rep.inner_ball_delta + 1e-10;
    rep.linear_cone_pass = rep.linear_cone_worst <= 1e-12;
    return rep;
}

} // namespace hjlab
