// Constructions and diagnostics for the stationary problem
// H(x,Dv) = l(x) + c: the Aubry set of the cost, the Dirichlet-limit and
// Perron-minimal solutions by fast sweeping, constant estimation from
// evolution runs, and growth/gradient verdicts.
#pragma once
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hjlab/cauchy.hpp"
#include "hjlab/grid.hpp"
#include "hjlab/hamiltonian.hpp"

namespace hjlab {

struct AubrySet {
    Grid grid;
    double tol = 0.0;
    std::vector<int> nodes;                          // l(x_i) <= tol, increasing
    std::vector<std::pair<int, int>> components;     // inclusive index runs
    double eps_margin = 0.0;                         // min of l outside the inflated hull
    double radius = 0.0;                             // outer radius of the inflated hull
    bool degenerate = false;                         // every node qualified
};

double default_aubry_tol(const ScalarField& cost); // 1e-9 * (1 + max l)
AubrySet extract_aubry(const ScalarField& cost, double tol);

enum class Provenance { DirichletLimit, PerronMin, LongTimeLimit };
enum class Normalization { ZeroAtOrigin, ZeroOnAubry };

std::string to_string(Provenance p);
std::string to_string(Normalization n);

struct ErgodicSolution {
    double c = 0.0;
    ScalarField v;
    Provenance provenance = Provenance::PerronMin;
    Normalization normalization = Normalization::ZeroOnAubry;
};

// Fast sweeping for H(x,Dv) = l(x)+c in (-R,R), v = 0 on the boundary;
// Eikonal kind, c >= 0. Returns the converged maximal-subsolution field.
ScalarField solve_dirichlet(const HamiltonianSpec& h, const std::function<double(double)>& cost,
                            double c, double radius, double dx);

struct DirichletLimitResult {
    ErgodicSolution solution; // last v_R, normalized to v_R(0) = 0
    std::vector<double> radii;
    std::vector<double> window_diffs; // sup |v_{R_{k+1}} - v_{R_k}| on the window
    std::pair<double, double> window;
    bool stabilized = true;
    std::string to_text() const;
};
DirichletLimitResult dirichlet_limit(const HamiltonianSpec& h,
                                     const std::function<double(double)>& cost, double c,
                                     const std::vector<double>& radii, double dx,
                                     std::pair<double, double> window);

// Maximal nonnegative subsolution vanishing on the Aubry set (c = 0).
ErgodicSolution solve_perron_min(const HamiltonianSpec& h, const ScalarField& cost,
                                 const AubrySet& aubry);

// Long-time-limit solution read off the last stored slice of a run.
ErgodicSolution from_history(const SnapshotHistory& hist, double c, Normalization norm,
                             const AubrySet* aubry = nullptr);

// Negated least-squares drift of the window mean of u over t >= t_lo.
double estimate_ergodic_constant(const SnapshotHistory& hist,
                                 std::pair<double, double> window, double t_lo);

struct GrowthReport {
    bool checked = false; // false when skipped (degenerate Aubry set, c=0 non-Perron)
    bool pass = true;
    double worst_margin = 0.0;
    std::string what;
    std::string to_text() const;
};
// c = 0 Perron solutions: v >= m_inv(eps)(|x| - R_A) - dx slack outside R_A.
// c > 0 solutions: min over [-R,R] of v <= v(0) - m_inv(min l + c) R + slack
// for each ladder radius.
GrowthReport growth_diagnostics(const ErgodicSolution& sol, const AubrySet& aubry,
                                const std::function<double(double)>& m_inv,
                                const std::vector<double>& radii_ladder = {1.0, 2.0, 3.0});

struct GradientBoundReport {
    bool pass = true;
    double bound = 0.0;
    double slack = 0.0;
    double worst_slope = 0.0;
    double worst_x = 0.0;
    std::string to_text() const;
};
// One-sided difference quotients of v against max (l+c)/nu plus dx slack.
GradientBoundReport gradient_bound_check(const ErgodicSolution& sol, const ScalarField& cost,
                                         const std::function<double(double)>& nu);

// Field CSV plus a sidecar metadata block (c, provenance, normalization,
// residual statistics supplied by the caller).
void write_ergodic_solution(const ErgodicSolution& sol, const std::filesystem::path& csv_path,
                            const std::filesystem::path& meta_path,
                            double residual_sup, double residual_l1);

} // namespace hjlab
