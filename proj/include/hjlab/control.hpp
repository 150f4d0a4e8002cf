// Speed-limited 1D optimal control: cost evaluation along piecewise-constant
// controls, the dynamic-programming value function, and greedy trajectory
// synthesis from a stored value history.
#pragma once
#include <filesystem>
#include <functional>
#include <vector>

#include "hjlab/cauchy.hpp"
#include "hjlab/grid.hpp"

namespace hjlab {

struct ControlProblem {
    std::function<double(double)> speed;         // a(x) > 0
    std::function<double(double)> running_cost;  // l(x)
    std::function<double(double)> terminal_cost; // u0(x)
    double horizon = 1.0;
};

struct ControlPiece {
    double until = 0.0; // piece is active on (previous until, until]
    double value = 0.0;
};
using PiecewiseControl = std::vector<ControlPiece>;

struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions; // at the breakpoints
    std::vector<double> controls;  // per segment, size = times.size()-1
    double cost = 0.0;
};

// Exact piecewise-linear motion; running cost by composite trapezoid with
// sub-step <= 1e-3. |alpha| <= a(x) is checked along the path.
Trajectory evaluate_cost(const ControlProblem& prob, const PiecewiseControl& control, double x0);

// Forward-in-horizon dynamic programming: V(x,t+dt) = min over
// |y-x| <= a(x) dt of interp(V(.,t), y) + dt l(x), V(.,0) = terminal cost.
// target_slices = 0 stores every step (synthesis wants dense slices).
SnapshotHistory value_function_dp(const ControlProblem& prob, const Grid& grid, double dt,
                                  int target_slices = 0);

// Greedy descent backward through the stored slices; ties toward smaller
// |y|, then toward -infinity. The returned trajectory carries its
// evaluate_cost, to be compared against V(x0, horizon) by the caller.
Trajectory synthesize_trajectory(const SnapshotHistory& values, const ControlProblem& prob,
                                 double x0);

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

} // namespace hjlab
