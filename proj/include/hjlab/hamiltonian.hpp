// Hamiltonians H(x,p), their monotone numerical counterparts, and the
// sampled-box audit of the standing structural assumptions.
#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hjlab/grid.hpp"

namespace hjlab {

struct SampleBox {
    double x_lo = -1.0, x_hi = 1.0;
    double p_lo = -1.0, p_hi = 1.0;
    int nx = 41, np = 41;
};

// Eikonal kind evaluates a(x)|p| exactly; Custom wraps any evaluator.
// nu is the coercivity weight (H >= nu(x)|p|), c_h the global p-Lipschitz
// constant, m an increasing upper envelope H(x,p) <= m(|p|) with inverse
// m_inv. Eikonal defaults: nu = a, c_h = sup a, m(r) = (sup a) r.
struct HamiltonianSpec {
    enum class Kind { Eikonal, Custom };
    Kind kind = Kind::Custom;

    std::function<double(double)> speed;            // a(x), Eikonal only
    std::function<double(double, double)> evaluator; // Custom only
    std::function<double(double)> nu;
    double c_h = 0.0;
    std::function<double(double)> m;
    std::function<double(double)> m_inv;
    double speed_sup = 0.0; // sampled sup of a (Eikonal)

    static HamiltonianSpec eikonal(std::function<double(double)> a,
                                   double x_lo, double x_hi, int samples = 2001);
    static HamiltonianSpec custom(std::function<double(double, double)> h,
                                  std::function<double(double)> nu, double c_h,
                                  std::function<double(double)> m,
                                  std::function<double(double)> m_inv);
};

double eval_H(const HamiltonianSpec& spec, double x, double p);

// Godunov flux for the Eikonal kind: a(x) max(max(p-,0), max(-p+,0)).
double godunov_flux(const HamiltonianSpec& spec, double x, double p_minus, double p_plus);
// Global Lax-Friedrichs flux: H(x,(p-+p+)/2) - theta (p+-p-)/2.
double lax_friedrichs_flux(const HamiltonianSpec& spec, double x,
                           double p_minus, double p_plus, double theta);
// Kind-dispatched monotone flux: Godunov for Eikonal, Lax-Friedrichs otherwise.
double numerical_H(const HamiltonianSpec& spec, double x,
                   double p_minus, double p_plus, double theta);

// theta >= sup |dH/dp| over the box; sup of a for the Eikonal kind.
double lf_dissipation(const HamiltonianSpec& spec, const SampleBox& box);

struct AssumptionCheck {
    std::string key;
    bool pass = true;
    double margin = 0.0; // worst slack; negative means violated
    bool has_witness = false;
    double wx = 0.0, wp = 0.0, wq = 0.0, wy = 0.0;
    std::string note;
};

struct AuditReport {
    SampleBox box;
    std::vector<AssumptionCheck> checks;
    double fitted_c_h = 0.0;
    std::vector<std::pair<double, double>> k_by_radius; // (R, fitted k_R)

    bool all_pass() const;
    const AssumptionCheck* find(const std::string& key) const;
    std::string to_text() const;
};

// Checks, on the sampled lattice: coercivity, rest state H(x,0)=0 with
// H(x,p)>0 off p=0, midpoint convexity in p, the two-point Lipschitz bound
// with fitted k_R and C_H, the upper envelope H <= m(|p|), cost >= 0, and
// the compactness proxy (interior min of the cost strictly below the
// boundary-collar min by eta). Violations are verdicts, never errors.
AuditReport audit_assumptions(const HamiltonianSpec& spec, const ScalarField& cost,
                              const SampleBox& box, double eta = 1e-6);

} // namespace hjlab
