#include "hjlab/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hjlab/csv.hpp"

namespace hjlab {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Godunov: return "godunov";
        case Scheme::LaxFriedrichs: return "lax-friedrichs";
        case Scheme::SemiLagrangian: return "semi-lagrangian";
    }
    return "?";
}

std::string to_string(BoundaryPolicy b) {
    return b == BoundaryPolicy::OneSidedUpwind ? "one-sided-upwind" : "frozen-extension";
}

std::pair<ScalarField, double> normalize_cost(const ScalarField& l) {
    ensure_arg(all_finite(l), "normalize_cost: cost has non-finite entries");
    double m = min_value(l);
    ScalarField out = l;
    for (double& v : out.values) v -= m;
    return {out, m};
}

TimeStepping plan_time_steps(double horizon, double dx, double cfl, double speed_scale) {
    ensure_arg(horizon > 0, "time stepping requires a positive horizon");
    ensure_arg(cfl > 0 && cfl <= 1.0, "cfl must lie in (0,1]; dt would exceed the stability bound");
    ensure_arg(speed_scale > 0, "speed scale must be positive");
    double dt_max = cfl * dx / speed_scale;
    long steps = static_cast<long>(std::ceil(horizon / dt_max - 1e-12));
    if (steps < 1) steps = 1;
    return {horizon / static_cast<double>(steps), steps};
}

namespace {

double one_sided_slope_left(const ScalarField& u, int i, double dx) {
    return (u[i] - u[i - 1]) / dx;
}
double one_sided_slope_right(const ScalarField& u, int i, double dx) {
    return (u[i + 1] - u[i]) / dx;
}

// p-range for the LF dissipation estimate: initial slopes and the
// stationary gradient bound (l+..)/nu, padded.
SampleBox auto_box(const CauchyProblem& prob) {
    const Grid& g = prob.u0.grid;
    double pmax = 1.0;
    for (int i = 0; i + 1 < g.n; ++i)
        pmax = std::max(pmax, std::abs(one_sided_slope_right(prob.u0, i, g.dx)));
    for (int i = 0; i < g.n; ++i) {
        double nu = prob.h.nu ? prob.h.nu(g.coord(i)) : 1.0;
        if (nu > 0) pmax = std::max(pmax, std::abs(prob.cost[i]) / nu);
    }
    pmax = 1.5 * pmax + 1.0;
    SampleBox box;
    box.x_lo = g.x_min;
    box.x_hi = g.x_max;
    box.p_lo = -pmax;
    box.p_hi = pmax;
    box.nx = std::min(g.n, 201);
    box.np = 201;
    return box;
}

struct SemiLagrangianStep {
    const HamiltonianSpec* h;
    const Grid* g;
    double dt;

    double update(const ScalarField& u, int i, double li) const {
        double x = g->coord(i);
        double reach = h->speed(x) * dt;
        double y_lo = std::max(x - reach, g->x_min);
        double y_hi = std::min(x + reach, g->x_max);
        double best = interp_linear(u, y_lo);
        best = std::min(best, interp_linear(u, y_hi));
        int j_lo = static_cast<int>(std::ceil((y_lo - g->x_min) / g->dx - 1e-12));
        int j_hi = static_cast<int>(std::floor((y_hi - g->x_min) / g->dx + 1e-12));
        for (int j = std::max(j_lo, 0); j <= std::min(j_hi, g->n - 1); ++j)
            best = std::min(best, u[j]);
        return best + dt * li;
    }
};

} // namespace

SnapshotHistory solve(const CauchyProblem& prob) {
    const Grid& g = prob.u0.grid;
    ensure_arg(prob.cost.grid.same_as(g), "solve: cost and u0 live on different grids");
    ensure_arg(all_finite(prob.u0) && all_finite(prob.cost), "solve: non-finite input data");
    if (prob.scheme == Scheme::SemiLagrangian)
        ensure_arg(prob.h.kind == HamiltonianSpec::Kind::Eikonal,
                   "semi-lagrangian scheme requires the Eikonal kind");

    double theta = 0.0;
    double speed_max = 0.0;
    if (prob.scheme == Scheme::SemiLagrangian) {
        speed_max = prob.h.speed_sup;
    } else {
        theta = lf_dissipation(prob.h, auto_box(prob));
        speed_max = theta;
    }
    ensure_arg(speed_max > 0, "solve: degenerate propagation speed");

    TimeStepping ts = plan_time_steps(prob.horizon, g.dx, prob.cfl, speed_max);

    // Trust cone r(t) = r0 - speed_max*t - 2dx must survive to the horizon.
    double r0 = 0.5 * (g.x_max - g.x_min);
    double t_vanish = (r0 - 2.0 * g.dx) / speed_max;
    if (t_vanish < prob.horizon)
        throw std::runtime_error("solve: trust interval vanishes at t = " +
                                 std::to_string(t_vanish) + " before the horizon " +
                                 std::to_string(prob.horizon) + "; enlarge the domain");

    long stride = prob.snapshot_stride > 0
                      ? prob.snapshot_stride
                      : std::max<long>(1, ts.steps / std::max(1, prob.target_slices));

    SnapshotHistory hist;
    hist.grid = g;
    hist.shift = prob.shift;
    hist.speed_max = speed_max;

    auto store = [&](double t, const ScalarField& u) {
        hist.times.push_back(t);
        hist.fields.push_back(u);
        hist.trust_radius.push_back(r0 - speed_max * t - 2.0 * g.dx);
    };

    ScalarField u = prob.u0;
    ScalarField next(g);
    store(0.0, u);

    // Frozen-extension boundary data: u0 at the boundary plus t times the
    // residual of the initial interior one-sided slope.
    double frozen_rate_left = 0.0, frozen_rate_right = 0.0;
    if (prob.boundary == BoundaryPolicy::FrozenExtension) {
        double sl = one_sided_slope_right(prob.u0, 0, g.dx);
        double sr = one_sided_slope_left(prob.u0, g.n - 1, g.dx);
        frozen_rate_left = prob.cost[0] - eval_H(prob.h, g.coord(0), sl);
        frozen_rate_right = prob.cost[g.n - 1] - eval_H(prob.h, g.coord(g.n - 1), sr);
    }

    SemiLagrangianStep sl_step{&prob.h, &g, ts.dt};

    for (long step = 0; step < ts.steps; ++step) {
        double t_next = (step + 1) * ts.dt;
        if (prob.scheme == Scheme::SemiLagrangian) {
            for (int i = 0; i < g.n; ++i) next[i] = sl_step.update(u, i, prob.cost[i]);
            if (prob.boundary == BoundaryPolicy::FrozenExtension) {
                next[0] = prob.u0[0] + t_next * frozen_rate_left;
                next[g.n - 1] = prob.u0[g.n - 1] + t_next * frozen_rate_right;
            }
        } else {
            for (int i = 1; i + 1 < g.n; ++i) {
                double pm = one_sided_slope_left(u, i, g.dx);
                double pp = one_sided_slope_right(u, i, g.dx);
                double flux = prob.scheme == Scheme::Godunov
                                  ? godunov_flux(prob.h, g.coord(i), pm, pp)
                                  : lax_friedrichs_flux(prob.h, g.coord(i), pm, pp, theta);
                next[i] = u[i] - ts.dt * (flux - prob.cost[i]);
            }
            if (prob.boundary == BoundaryPolicy::OneSidedUpwind) {
                double s0 = one_sided_slope_right(u, 0, g.dx);
                double sN = one_sided_slope_left(u, g.n - 1, g.dx);
                double flux0 = prob.scheme == Scheme::Godunov
                                   ? godunov_flux(prob.h, g.coord(0), s0, s0)
                                   : lax_friedrichs_flux(prob.h, g.coord(0), s0, s0, theta);
                double fluxN = prob.scheme == Scheme::Godunov
                                   ? godunov_flux(prob.h, g.coord(g.n - 1), sN, sN)
                                   : lax_friedrichs_flux(prob.h, g.coord(g.n - 1), sN, sN, theta);
                next[0] = u[0] - ts.dt * (flux0 - prob.cost[0]);
                next[g.n - 1] = u[g.n - 1] - ts.dt * (fluxN - prob.cost[g.n - 1]);
            } else {
                next[0] = prob.u0[0] + t_next * frozen_rate_left;
                next[g.n - 1] = prob.u0[g.n - 1] + t_next * frozen_rate_right;
            }
        }

        std::swap(u.values, next.values);

        for (int i = 0; i < g.n; ++i)
            if (!std::isfinite(u[i]))
                throw std::runtime_error("solve: non-finite value at x = " +
                                         std::to_string(g.coord(i)) + ", t = " +
                                         std::to_string(t_next));

        bool last = (step + 1 == ts.steps);
        if (last || ((step + 1) % stride == 0)) store(t_next, u);
    }

    return hist;
}

ScalarField build_supersolution(const ScalarField& u0, const ScalarField& cost,
                                double c, const std::function<double(double)>& nu) {
    const Grid& g = u0.grid;
    ensure_arg(cost.grid.same_as(g), "build_supersolution: grids differ");
    ensure_arg(c >= 0, "build_supersolution: c must be >= 0");

    // Radial ticks: sorted distinct |x_i|.
    std::map<double, std::pair<double, double>> radial; // r -> (max u0, max (l+c)/nu)
    for (int i = 0; i < g.n; ++i) {
        double x = g.coord(i);
        double r = std::abs(x);
        double w = nu(x);
        ensure_arg(w > 0, "build_supersolution: nu must be positive on the grid");
        double rate = (cost[i] + c) / w;
        auto [it, inserted] = radial.try_emplace(r, u0[i], rate);
        if (!inserted) {
            it->second.first = std::max(it->second.first, u0[i]);
            it->second.second = std::max(it->second.second, rate);
        }
    }

    // Running maxima give the nondecreasing envelopes f0 (of u0) and f1 (of
    // (l+c)/nu); v+(r) = f0(r) + trapezoid integral of f1 from 0 to r.
    std::vector<double> rs, f0, f1, integral;
    rs.reserve(radial.size());
    double run0 = -std::numeric_limits<double>::infinity();
    double run1 = 0.0;
    for (const auto& [r, pair] : radial) {
        run0 = std::max(run0, pair.first);
        run1 = std::max(run1, pair.second);
        rs.push_back(r);
        f0.push_back(run0);
        f1.push_back(run1);
    }
    integral.resize(rs.size(), 0.0);
    for (std::size_t k = 1; k < rs.size(); ++k)
        integral[k] = integral[k - 1] + 0.5 * (f1[k] + f1[k - 1]) * (rs[k] - rs[k - 1]);

    ScalarField out(g);
    for (int i = 0; i < g.n; ++i) {
        double r = std::abs(g.coord(i));
        auto it = radial.find(r);
        std::size_t k = static_cast<std::size_t>(std::distance(radial.begin(), it));
        out[i] = f0[k] + integral[k];
    }
    return out;
}

std::string SandwichReport::to_text() const {
    std::ostringstream os;
    os << "sandwich.verdict = " << (pass ? "pass" : "fail") << "\n"
       << "sandwich.worst_lower = " << worst_lower << "\n"
       << "sandwich.worst_upper = " << worst_upper << "\n"
       << "sandwich.tolerance = " << tolerance << "\n";
    if (!pass) os << "sandwich.worst_at = (slice " << worst_slice << ", x = " << worst_x << ")\n";
    return os.str();
}

SandwichReport sandwich_check(const SnapshotHistory& hist, const ScalarField& v_minus,
                              const ScalarField& v_plus, double c, double tolerance) {
    ensure_arg(v_minus.grid.same_as(hist.grid) && v_plus.grid.same_as(hist.grid),
               "sandwich_check: grids differ");
    SandwichReport rep;
    rep.tolerance = tolerance;
    rep.worst_lower = -std::numeric_limits<double>::infinity();
    rep.worst_upper = -std::numeric_limits<double>::infinity();
    double worst_overall = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < hist.slice_count(); ++k) {
        auto [lo, hi] = hist.trust_interval(k);
        double shift = c * hist.times[k];
        for (int i = 0; i < hist.grid.n; ++i) {
            double x = hist.grid.coord(i);
            if (x < lo || x > hi) continue;
            double w = hist.fields[k][i] + shift;
            double lower_gap = v_minus[i] - w;
            double upper_gap = w - v_plus[i];
            rep.worst_lower = std::max(rep.worst_lower, lower_gap);
            rep.worst_upper = std::max(rep.worst_upper, upper_gap);
            if (std::max(lower_gap, upper_gap) > worst_overall) {
                worst_overall = std::max(lower_gap, upper_gap);
                rep.worst_slice = k;
                rep.worst_x = x;
            }
        }
    }
    rep.pass = worst_overall <= tolerance;
    return rep;
}

} // namespace hjlab
