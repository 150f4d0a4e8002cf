#include "hjlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hjlab {

HamiltonianSpec HamiltonianSpec::eikonal(std::function<double(double)> a,
                                         double x_lo, double x_hi, int samples) {
    ensure_arg(static_cast<bool>(a), "eikonal: speed function required");
    ensure_arg(x_lo < x_hi && samples >= 2, "eikonal: bad sampling range");
    double sup = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / (samples - 1);
        double ai = a(x);
        ensure_arg(std::isfinite(ai) && ai > 0, "eikonal: a(x) must be positive and finite");
        sup = std::max(sup, ai);
    }
    HamiltonianSpec s;
    s.kind = Kind::Eikonal;
    s.speed = a;
    s.nu = a;
    s.c_h = sup;
    s.speed_sup = sup;
    s.m = [sup](double r) { return sup * r; };
    s.m_inv = [sup](double v) { return v / sup; };
    return s;
}

HamiltonianSpec HamiltonianSpec::custom(std::function<double(double, double)> h,
                                        std::function<double(double)> nu, double c_h,
                                        std::function<double(double)> m,
                                        std::function<double(double)> m_inv) {
    ensure_arg(static_cast<bool>(h), "custom: evaluator required");
    ensure_arg(c_h >= 0, "custom: C_H must be >= 0");
    HamiltonianSpec s;
    s.kind = Kind::Custom;
    s.evaluator = std::move(h);
    s.nu = std::move(nu);
    s.c_h = c_h;
    s.m = std::move(m);
    s.m_inv = std::move(m_inv);
    return s;
}

double eval_H(const HamiltonianSpec& spec, double x, double p) {
    ensure_arg(std::isfinite(x) && std::isfinite(p), "eval_H: non-finite input");
    if (spec.kind == HamiltonianSpec::Kind::Eikonal) return spec.speed(x) * std::abs(p);
    return spec.evaluator(x, p);
}

double godunov_flux(const HamiltonianSpec& spec, double x, double p_minus, double p_plus) {
    ensure_arg(spec.kind == HamiltonianSpec::Kind::Eikonal, "godunov_flux: Eikonal kind only");
    ensure_arg(std::isfinite(p_minus) && std::isfinite(p_plus), "godunov_flux: non-finite slope");
    double up = std::max(std::max(p_minus, 0.0), std::max(-p_plus, 0.0));
    return spec.speed(x) * up;
}

double lax_friedrichs_flux(const HamiltonianSpec& spec, double x,
                           double p_minus, double p_plus, double theta) {
    ensure_arg(std::isfinite(p_minus) && std::isfinite(p_plus), "lax_friedrichs_flux: non-finite slope");
    ensure_arg(theta >= 0, "lax_friedrichs_flux: theta must be >= 0");
    return eval_H(spec, x, 0.5 * (p_minus + p_plus)) - 0.5 * theta * (p_plus - p_minus);
}

double numerical_H(const HamiltonianSpec& spec, double x,
                   double p_minus, double p_plus, double theta) {
    if (spec.kind == HamiltonianSpec::Kind::Eikonal)
        return godunov_flux(spec, x, p_minus, p_plus);
    return lax_friedrichs_flux(spec, x, p_minus, p_plus, theta);
}

double lf_dissipation(const HamiltonianSpec& spec, const SampleBox& box) {
    if (spec.kind == HamiltonianSpec::Kind::Eikonal) {
        double sup = 0.0;
        for (int i = 0; i < box.nx; ++i) {
            double x = box.x_lo + (box.x_hi - box.x_lo) * i / (box.nx - 1);
            sup = std::max(sup, spec.speed(x));
        }
        return sup;
    }
    // Slopes between adjacent p samples bound |dH/dp| from below; the lattice
    // is fine enough for the audited (Lipschitz-in-p) class.
    double sup = 0.0;
    for (int i = 0; i < box.nx; ++i) {
        double x = box.x_lo + (box.x_hi - box.x_lo) * i / (box.nx - 1);
        double prev = eval_H(spec, x, box.p_lo);
        for (int j = 1; j < box.np; ++j) {
            double p0 = box.p_lo + (box.p_hi - box.p_lo) * (j - 1) / (box.np - 1);
            double p1 = box.p_lo + (box.p_hi - box.p_lo) * j / (box.np - 1);
            double cur = eval_H(spec, x, p1);
            sup = std::max(sup, std::abs(cur - prev) / (p1 - p0));
            prev = cur;
        }
    }
    return sup;
}

bool AuditReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

const AssumptionCheck* AuditReport::find(const std::string& key) const {
    for (const auto& c : checks)
        if (c.key == key) return &c;
    return nullptr;
}

std::string AuditReport::to_text() const {
    std::ostringstream os;
    os << "audit";
    os << "\n  box = x[" << box.x_lo << "," << box.x_hi << "]x" << box.nx
       << " p[" << box.p_lo << "," << box.p_hi << "]x" << box.np;
    for (const auto& c : checks) {
        os << "\n  " << c.key << ".verdict = " << (c.pass ? "pass" : "fail");
        os << "\n  " << c.key << ".margin = " << c.margin;
        if (c.has_witness)
            os << "\n  " << c.key << ".witness = (x=" << c.wx << ", p=" << c.wp
               << ", q=" << c.wq << ", y=" << c.wy << ")";
        if (!c.note.empty()) os << "\n  " << c.key << ".note = " << c.note;
    }
    os << "\n  lipschitz.fitted_C_H = " << fitted_c_h;
    for (const auto& [r, k] : k_by_radius)
        os << "\n  lipschitz.k_R[" << r << "] = " << k;
    os << "\n";
    return os.str();
}

namespace {

std::vector<double> lattice(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

} // namespace

AuditReport audit_assumptions(const HamiltonianSpec& spec, const ScalarField& cost,
                              const SampleBox& box, double eta) {
    ensure_arg(box.nx >= 2 && box.np >= 2, "audit: need >= 2 samples per axis");
    AuditReport rep;
    rep.box = box;

    std::vector<double> xs = lattice(box.x_lo, box.x_hi, box.nx);
    std::vector<double> ps = lattice(box.p_lo, box.p_hi, box.np);
    if (std::find(ps.begin(), ps.end(), 0.0) == ps.end()) ps.push_back(0.0);

    const double scale = 1.0 + std::abs(eval_H(spec, xs[0], ps[0]));
    const double tiny = 1e-12 * scale;

    // (coercivity) H(x,p) >= nu(x)|p|
    {
        AssumptionCheck c;
        c.key = "coercivity";
        c.margin = std::numeric_limits<double>::infinity();
        for (double x : xs)
            for (double p : ps) {
                double slack = eval_H(spec, x, p) - spec.nu(x) * std::abs(p);
                if (slack < c.margin) {
                    c.margin = slack;
                    c.wx = x;
                    c.wp = p;
                }
            }
        c.pass = c.margin >= -tiny;
        c.has_witness = !c.pass;
        rep.checks.push_back(c);
    }

    // (rest state) H(x,0) = 0 and H(x,p) > 0 for p != 0
    {
        AssumptionCheck c;
        c.key = "rest_state";
        c.margin = std::numeric_limits<double>::infinity();
        for (double x : xs) {
            double at0 = std::abs(eval_H(spec, x, 0.0));
            if (-at0 < c.margin) {
                c.margin = -at0;
                c.wx = x;
                c.wp = 0.0;
            }
            for (double p : ps) {
                if (p == 0.0) continue;
                double v = eval_H(spec, x, p);
                if (v < c.margin) {
                    c.margin = v;
                    c.wx = x;
                    c.wp = p;
                }
            }
        }
        c.pass = c.margin >= -tiny;
        c.has_witness = !c.pass;
        rep.checks.push_back(c);
    }

    // (convexity, midpoint sampling) H(x,(p+q)/2) <= (H(x,p)+H(x,q))/2 + 1e-12
    {
        AssumptionCheck c;
        c.key = "convexity";
        c.margin = std::numeric_limits<double>::infinity();
        for (double x : xs)
            for (std::size_t i = 0; i < ps.size(); ++i)
                for (std::size_t j = i + 1; j < ps.size(); ++j) {
                    double p = ps[i], q = ps[j];
                    double slack = 0.5 * (eval_H(spec, x, p) + eval_H(spec, x, q)) -
                                   eval_H(spec, x, 0.5 * (p + q));
                    if (slack < c.margin) {
                        c.margin = slack;
                        c.wx = x;
                        c.wp = p;
                        c.wq = q;
                    }
                }
        c.pass = c.margin >= -1e-12 * scale;
        c.has_witness = !c.pass;
        rep.checks.push_back(c);
    }

    // (two-point Lipschitz) |H(x,p)-H(y,q)| <= k_R (1+|p|)|x-y| + C_H |p-q|.
    // C_H is fitted on same-x pairs, k_R on same-p pairs; the mixed bound then
    // follows by the triangle inequality. Fitted k_R is diagnostic only.
    {
        AssumptionCheck c;
        c.key = "lipschitz";
        double fitted_ch = 0.0;
        for (double x : xs)
            for (std::size_t i = 0; i < ps.size(); ++i)
                for (std::size_t j = i + 1; j < ps.size(); ++j) {
                    double dp = std::abs(ps[i] - ps[j]);
                    if (dp == 0) continue;
                    double r = std::abs(eval_H(spec, x, ps[i]) - eval_H(spec, x, ps[j])) / dp;
                    if (r > fitted_ch) {
                        fitted_ch = r;
                        c.wx = x;
                        c.wp = ps[i];
                        c.wq = ps[j];
                    }
                }
        rep.fitted_c_h = fitted_ch;

        double half = std::max(std::abs(box.x_lo), std::abs(box.x_hi));
        for (double frac : {0.25, 0.5, 0.75, 1.0}) {
            double radius = frac * half;
            double k = 0.0;
            for (std::size_t a = 0; a < xs.size(); ++a)
                for (std::size_t b = a + 1; b < xs.size(); ++b) {
                    if (std::abs(xs[a]) > radius || std::abs(xs[b]) > radius) continue;
                    double dxab = std::abs(xs[a] - xs[b]);
                    if (dxab == 0) continue;
                    for (double p : ps) {
                        double r = std::abs(eval_H(spec, xs[a], p) - eval_H(spec, xs[b], p)) /
                                   ((1.0 + std::abs(p)) * dxab);
                        k = std::max(k, r);
                    }
                }
            rep.k_by_radius.emplace_back(radius, k);
        }

        c.margin = spec.c_h - fitted_ch;
        bool k_finite = true;
        for (const auto& [r, k] : rep.k_by_radius)
            if (!std::isfinite(k)) k_finite = false;
        c.pass = k_finite && fitted_ch <= spec.c_h + 1e-9 * (1.0 + spec.c_h);
        c.has_witness = !c.pass;
        c.note = "fitted C_H vs declared";
        rep.checks.push_back(c);
    }

    // (upper envelope) H(x,p) <= m(|p|)
    {
        AssumptionCheck c;
        c.key = "upper_envelope";
        if (!spec.m) {
            c.pass = false;
            c.note = "no m declared";
            c.margin = -std::numeric_limits<double>::infinity();
        } else {
            c.margin = std::numeric_limits<double>::infinity();
            for (double x : xs)
                for (double p : ps) {
                    double slack = spec.m(std::abs(p)) - eval_H(spec, x, p);
                    if (slack < c.margin) {
                        c.margin = slack;
                        c.wx = x;
                        c.wp = p;
                    }
                }
            c.pass = c.margin >= -1e-9 * scale;
            c.has_witness = !c.pass;
        }
        rep.checks.push_back(c);
    }

    // (cost sign) l >= 0 on its own nodes
    {
        AssumptionCheck c;
        c.key = "cost_nonnegative";
        c.margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cost.size(); ++i)
            if (cost[i] < c.margin) {
                c.margin = cost[i];
                c.wx = cost.grid.coord(i);
            }
        c.pass = c.margin >= -1e-12 * (1.0 + std::abs(c.margin));
        c.has_witness = !c.pass;
        rep.checks.push_back(c);
    }

    // (compactness proxy) interior min of l strictly below the boundary-collar
    // min by eta; stands in for liminf_{|x|->inf} l > min l on the finite box.
    {
        AssumptionCheck c;
        c.key = "cost_coercive_proxy";
        const Grid& g = cost.grid;
        int collar = std::max(2, g.n / 10);
        double min_collar = std::numeric_limits<double>::infinity();
        double min_interior = std::numeric_limits<double>::infinity();
        double arg_interior = 0.0;
        for (int i = 0; i < g.n; ++i) {
            bool in_collar = (i < collar) || (i >= g.n - collar);
            if (in_collar) {
                min_collar = std::min(min_collar, cost[i]);
            } else if (cost[i] < min_interior) {
                min_interior = cost[i];
                arg_interior = g.coord(i);
            }
        }
        c.margin = min_collar - min_interior - eta;
        c.pass = c.margin >= 0;
        c.wx = arg_interior;
        c.has_witness = !c.pass;
        c.note = "collar min - interior min - eta";
        rep.checks.push_back(c);
    }

    return rep;
}

} // namespace hjlab
