// Explicit monotone time stepping for u_t + H(x,Du) = l(x) on a truncated
// grid, with a certified (shrinking) trust interval and the stationary
// super/subsolution sandwich helpers.
#pragma once
#include <string>
#include <utility>
#include <vector>

#include "hjlab/grid.hpp"
#include "hjlab/hamiltonian.hpp"

namespace hjlab {

enum class Scheme { Godunov, LaxFriedrichs, SemiLagrangian };
enum class BoundaryPolicy { OneSidedUpwind, FrozenExtension };

std::string to_string(Scheme s);
std::string to_string(BoundaryPolicy b);

struct CauchyProblem {
    HamiltonianSpec h;
    ScalarField cost; // running cost l on the grid
    ScalarField u0;
    double horizon = 1.0;
    Scheme scheme = Scheme::Godunov;
    double cfl = 0.9; // in (0,1]
    BoundaryPolicy boundary = BoundaryPolicy::OneSidedUpwind;
    int target_slices = 200;  // stored snapshot budget (first/last always kept)
    long snapshot_stride = 0; // explicit step stride; 0 derives from target_slices
    double shift = 0.0;       // subtracted inf l, carried as bookkeeping
};

struct SnapshotHistory {
    Grid grid;
    std::vector<double> times;
    std::vector<ScalarField> fields;
    std::vector<double> trust_radius; // nonincreasing in t
    double shift = 0.0;
    double speed_max = 0.0; // propagation speed used for the trust cone

    int slice_count() const { return static_cast<int>(times.size()); }
    double center() const { return 0.5 * (grid.x_min + grid.x_max); }
    std::pair<double, double> trust_interval(int slice) const {
        double c = center();
        return {c - trust_radius[slice], c + trust_radius[slice]};
    }
    const ScalarField& final_field() const { return fields.back(); }
};

// (l - min l, min l); the returned field has min exactly 0.
std::pair<ScalarField, double> normalize_cost(const ScalarField& l);

struct TimeStepping {
    double dt = 0.0;
    long steps = 0;
};
// Global CFL step: dt = cfl*dx/speed_scale rounded down so steps*dt == horizon.
TimeStepping plan_time_steps(double horizon, double dx, double cfl, double speed_scale);

SnapshotHistory solve(const CauchyProblem& prob);

// Stationary supersolution v+ >= u0 with outward one-sided slopes of
// magnitude >= (l+c)/nu, built from radial monotone envelopes and the
// trapezoid rule.
ScalarField build_supersolution(const ScalarField& u0, const ScalarField& cost,
                                double c, const std::function<double(double)>& nu);

struct SandwichReport {
    bool pass = true;
    double worst_lower = 0.0; // max of v- - (u + c t); positive => violation
    double worst_upper = 0.0; // max of (u + c t) - v+
    int worst_slice = -1;
    double worst_x = 0.0;
    double tolerance = 0.0;
    std::string to_text() const;
};
// Checks v- <= u + c t <= v+ on the trust interval of every stored slice.
SandwichReport sandwich_check(const SnapshotHistory& hist, const ScalarField& v_minus,
                              const ScalarField& v_plus, double c, double tolerance = 1e-9);

} // namespace hjlab
