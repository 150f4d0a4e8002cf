// Large-time-behavior toolkit: in-time inf/sup convolutions, min
// combination, stationary residuals, convergence monitoring, the Aubry-set
// decrease check, asymptotic sandwich constants, and the dependence-cone
// comparison.
#pragma once
#include <string>
#include <utility>
#include <vector>

#include "hjlab/cauchy.hpp"
#include "hjlab/ergodic.hpp"
#include "hjlab/grid.hpp"
#include "hjlab/hamiltonian.hpp"

namespace hjlab {

// u_eps(x,t) = min over stored s of u(x,s) + (t-s)^2/eps^2 (inf), resp. the
// sup with the penalty subtracted. Minimization runs over stored slices only.
SnapshotHistory inf_convolution(const SnapshotHistory& hist, double eps);
SnapshotHistory sup_convolution(const SnapshotHistory& hist, double eps);

ScalarField min_combine(const ScalarField& f, const ScalarField& g);

struct ResidualReport {
    ScalarField residual; // interior nodes; endpoints left at 0
    double sup_interior = 0.0;
    double l1_interior = 0.0;
    std::string to_text() const;
};
// residual_i = numerical_H(x_i, backward slope, forward slope) - l(x_i) - c.
ResidualReport residual_stationary(const ScalarField& v, const HamiltonianSpec& h,
                                   const ScalarField& cost, double c);

struct ConvergenceReport {
    std::pair<double, double> window;
    double tol = 0.0;
    double c = 0.0;
    std::vector<double> times;
    std::vector<double> distance; // d(t) = sup over window of |u + c t - v|
    bool converged = false;
    double t_star = 0.0;          // first stored time after which d stays <= tol
    double final_distance = 0.0;
    double probe_x = 0.0;         // window center
    double probe_oscillation = 0.0;    // signed band of u(probe,.) + c t over trailing 25%
    double distance_oscillation = 0.0; // max d - min d over the same band
    std::string to_text() const;
};
ConvergenceReport convergence_monitor(const SnapshotHistory& hist, double c,
                                      const ScalarField& target, std::pair<double, double> window,
                                      double tol);
ConvergenceReport convergence_monitor(const SnapshotHistory& hist, const ErgodicSolution& target,
                                      std::pair<double, double> window, double tol);

struct DecreaseReport {
    bool pass = true;
    double worst_violation = 0.0; // largest positive per-step jump on the Aubry set
    double worst_x = 0.0;
    double worst_t = 0.0;
    std::string to_text() const;
};
// u(x, t_{k+1}) <= u(x, t_k) + 1e-10 at every Aubry node (normalized cost).
DecreaseReport decrease_on_aubry(const SnapshotHistory& hist, const AubrySet& aubry);

struct SandwichBounds {
    double k1 = 0.0; // smallest k1 with v1 - k1 <= u on the trailing half
    double k2 = 0.0; // smallest k2 with u <= v2 + k2
};
SandwichBounds sandwich_bounds(const SnapshotHistory& hist, const ErgodicSolution& v1,
                               const ErgodicSolution& v2);

struct ConeReport {
    double inner_ball_delta = 0.0; // sup |u0^A - u0^B| over the ball
    double exp_cone_worst = 0.0;   // sup over the exponential cone of |u^A - u^B|
    bool exp_cone_pass = false;    // worst <= delta + 1e-10
    double linear_cone_worst = 0.0;
    bool linear_cone_pass = false; // worst <= 1e-12 (meaningful when delta = 0)
    std::string to_text() const;
};
// Domain-of-dependence comparison of two runs on the same grid/times. With
// require_equal_inside, differing initial data inside B(x0,r) is an error.
ConeReport dependence_cone_check(const SnapshotHistory& a, const SnapshotHistory& b, double x0,
                                 double r, double c_h, bool require_equal_inside = true);

} // namespace hjlab
