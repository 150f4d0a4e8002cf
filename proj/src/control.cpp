#include "hjlab/control.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "hjlab/csv.hpp"

namespace hjlab {

namespace {

constexpr double kQuadStep = 1e-3;

// Trapezoid of l along the linear segment x0 -> x0 + alpha*len, also
// enforcing |alpha| <= a(x) at the quadrature nodes.
double segment_cost(const ControlProblem& prob, double x0, double alpha, double len,
                    std::size_t piece_index) {
    if (len <= 0) return 0.0;
    long m = std::max<long>(1, static_cast<long>(std::ceil(len / kQuadStep)));
    double h = len / m;
    double sum = 0.0;
    for (long k = 0; k <= m; ++k) {
        double x = x0 + alpha * (h * k);
        if (std::abs(alpha) > prob.speed(x) + 1e-12)
            throw std::invalid_argument("evaluate_cost: control magnitude exceeds a(x) on piece " +
                                        std::to_string(piece_index));
        double w = (k == 0 || k == m) ? 0.5 : 1.0;
        sum += w * prob.running_cost(x);
    }
    return sum * h;
}

} // namespace

Trajectory evaluate_cost(const ControlProblem& prob, const PiecewiseControl& control, double x0) {
    ensure_arg(!control.empty(), "evaluate_cost: empty control");
    ensure_arg(control.back().until >= prob.horizon - 1e-12,
               "evaluate_cost: control pieces must cover [0, horizon]");
    for (std::size_t k = 1; k < control.size(); ++k)
        ensure_arg(control[k].until > control[k - 1].until,
                   "evaluate_cost: piece end times must increase");

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.positions.push_back(x0);

    double t = 0.0, x = x0, cost = 0.0;
    for (std::size_t k = 0; k < control.size() && t < prob.horizon; ++k) {
        double t_end = std::min(control[k].until, prob.horizon);
        if (t_end <= t) continue;
        double alpha = control[k].value;
        double len = t_end - t;
        cost += segment_cost(prob, x, alpha, len, k);
        x += alpha * len;
        t = t_end;
        traj.times.push_back(t);
        traj.positions.push_back(x);
        traj.controls.push_back(alpha);
    }
    cost += prob.terminal_cost(x);
    traj.cost = cost;
    return traj;
}

SnapshotHistory value_function_dp(const ControlProblem& prob, const Grid& grid, double dt,
                                  int target_slices) {
    ensure_arg(dt > 0, "value_function_dp: dt must be positive");
    double a_sup = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        double a = prob.speed(grid.coord(i));
        ensure_arg(a > 0, "value_function_dp: a(x) must be positive");
        a_sup = std::max(a_sup, a);
    }
    ensure_arg(dt <= grid.dx / a_sup + 1e-15, "value_function_dp: dt must be <= dx / max a");

    long steps = static_cast<long>(std::llround(prob.horizon / dt));
    ensure_arg(steps >= 1 && std::abs(steps * dt - prob.horizon) <= 1e-9 * (1.0 + prob.horizon),
               "value_function_dp: horizon must be an integer number of steps");

    long stride = 1;
    if (target_slices > 0) stride = std::max<long>(1, steps / target_slices);

    SnapshotHistory hist;
    hist.grid = grid;
    hist.speed_max = a_sup;

    double r0 = 0.5 * (grid.x_max - grid.x_min);
    auto store = [&](double t, const ScalarField& v) {
        hist.times.push_back(t);
        hist.fields.push_back(v);
        hist.trust_radius.push_back(r0 - a_sup * t - 2.0 * grid.dx);
    };

    ScalarField v = ScalarField::sample(grid, prob.terminal_cost);
    ScalarField cost = ScalarField::sample(grid, prob.running_cost);
    ScalarField next(grid);
    store(0.0, v);

    for (long step = 0; step < steps; ++step) {
        for (int i = 0; i < grid.n; ++i) {
            double x = grid.coord(i);
            double reach = prob.speed(x) * dt;
            double y_lo = std::max(x - reach, grid.x_min);
            double y_hi = std::min(x + reach, grid.x_max);
            double best = interp_linear(v, y_lo);
            best = std::min(best, interp_linear(v, y_hi));
            int j_lo = static_cast<int>(std::ceil((y_lo - grid.x_min) / grid.dx - 1e-12));
            int j_hi = static_cast<int>(std::floor((y_hi - grid.x_min) / grid.dx + 1e-12));
            for (int j = std::max(j_lo, 0); j <= std::min(j_hi, grid.n - 1); ++j)
                best = std::min(best, v[j]);
            next[i] = best + dt * cost[i];
        }
        std::swap(v.values, next.values);
        double t_next = (step + 1) * dt;
        bool last = (step + 1 == steps);
        if (last || ((step + 1) % stride == 0)) store(t_next, v);
    }
    return hist;
}

Trajectory synthesize_trajectory(const SnapshotHistory& values, const ControlProblem& prob,
                                 double x0) {
    ensure_arg(values.slice_count() >= 2, "synthesize_trajectory: need >= 2 stored slices");

    const Grid& g = values.grid;
    double horizon = values.times.back();

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.positions.push_back(x0);

    double x = x0;
    for (int k = values.slice_count() - 1; k > 0; --k) {
        double span = values.times[k] - values.times[k - 1];
        auto [lo, hi] = values.trust_interval(k - 1);
        if (x < lo || x > hi)
            throw std::runtime_error("synthesize_trajectory: left the trust window at t = " +
                                     std::to_string(horizon - values.times[k]));
        const ScalarField& prev = values.fields[k - 1];
        double reach = prob.speed(x) * span;
        double y_lo = std::max(x - reach, g.x_min);
        double y_hi = std::min(x + reach, g.x_max);

        double best_y = y_lo;
        double best_v = interp_linear(prev, y_lo);
        auto consider = [&](double y) {
            double v = interp_linear(prev, y);
            bool better = v < best_v;
            // Ties: toward smaller |y|, then toward -infinity.
            if (v == best_v)
                better = std::abs(y) < std::abs(best_y) ||
                         (std::abs(y) == std::abs(best_y) && y < best_y);
            if (better) {
                best_v = v;
                best_y = y;
            }
        };
        consider(y_hi);
        int j_lo = static_cast<int>(std::ceil((y_lo - g.x_min) / g.dx - 1e-12));
        int j_hi = static_cast<int>(std::floor((y_hi - g.x_min) / g.dx + 1e-12));
        for (int j = std::max(j_lo, 0); j <= std::min(j_hi, g.n - 1); ++j) consider(g.coord(j));

        double alpha = span > 0 ? (best_y - x) / span : 0.0;
        x = best_y;
        traj.times.push_back(horizon - values.times[k - 1]);
        traj.positions.push_back(x);
        traj.controls.push_back(alpha);
    }

    PiecewiseControl control;
    for (std::size_t s = 0; s < traj.controls.size(); ++s)
        control.push_back({traj.times[s + 1], traj.controls[s]});
    ControlProblem clipped = prob;
    clipped.horizon = horizon;
    Trajectory evaluated = evaluate_cost(clipped, control, x0);
    traj.cost = evaluated.cost;
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    ensure(out.good(), "cannot open for writing: " + path.string());
    out << "# cost = " << format_double(traj.cost) << "\n";
    out << "s,X,alpha\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        double alpha = k < traj.controls.size() ? traj.controls[k] : 0.0;
        out << format_double(traj.times[k]) << ',' << format_double(traj.positions[k]) << ','
            << format_double(alpha) << '\n';
    }
    ensure(out.good(), "write failed: " + path.string());
}

} // namespace hjlab
