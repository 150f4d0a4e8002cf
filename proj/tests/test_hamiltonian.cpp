#include <doctest.h>

#include <cmath>
#include <random>

#include "hjlab/hamiltonian.hpp"

using namespace hjlab;

namespace {

HamiltonianSpec unit_eikonal(double lo = -8, double hi = 8) {
    return HamiltonianSpec::eikonal([](double) { return 1.0; }, lo, hi);
}

} // namespace

TEST_CASE("eval examples") {
    HamiltonianSpec h = unit_eikonal();
    CHECK(eval_H(h, 0.3, -2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eval_H(h, 1.7, 0.0) == 0.0);

    auto cauchy_speed = [](double x) { return 1.0 / (1.0 + x * x); };
    HamiltonianSpec hc = HamiltonianSpec::eikonal(cauchy_speed, -8, 8);
    CHECK(eval_H(hc, 1.0, 4.0) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(eval_H(h, 0.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("eikonal defaults") {
    HamiltonianSpec h = HamiltonianSpec::eikonal([](double x) { return 2.0 - std::abs(x) / 3.0; },
                                                 -3, 3);
    CHECK(h.speed_sup == doctest::Approx(2.0));
    CHECK(h.c_h == doctest::Approx(2.0));
    CHECK(h.m(3.0) == doctest::Approx(6.0));
    CHECK(h.m_inv(6.0) == doctest::Approx(3.0));
    CHECK(h.nu(1.5) == doctest::Approx(1.5));
}

TEST_CASE("numerical Hamiltonians") {
    HamiltonianSpec h = unit_eikonal();
    CHECK(numerical_H(h, 0.0, 1.0, 1.0, 0.0) == doctest::Approx(1.0));
    // rarefaction at a minimum
    CHECK(numerical_H(h, 0.0, -1.0, 1.0, 0.0) == 0.0);

    HamiltonianSpec lf = HamiltonianSpec::custom(
        [](double, double p) { return std::abs(p); }, [](double) { return 1.0; }, 1.0,
        [](double r) { return r; }, [](double s) { return s; });
    CHECK(numerical_H(lf, 0.0, 0.0, 2.0, 1.0) == doctest::Approx(0.0));
    // consistency is exact for Lax-Friedrichs
    for (double p : {-2.0, -0.5, 0.0, 1.0, 3.0})
        CHECK(numerical_H(lf, 0.3, p, p, 1.0) == doctest::Approx(std::abs(p)).epsilon(1e-15));
    // Godunov agrees with eval when both one-sided slopes agree
    for (double p : {-2.0, -0.5, 0.0, 1.0, 3.0})
        CHECK(godunov_flux(h, 0.0, p, p) == doctest::Approx(std::abs(p)).epsilon(1e-15));
}

TEST_CASE("numerical Hamiltonians are monotone") {
    HamiltonianSpec h = unit_eikonal();
    HamiltonianSpec lf = HamiltonianSpec::custom(
        [](double, double p) { return std::abs(p); }, [](double) { return 1.0; }, 1.0,
        [](double r) { return r; }, [](double s) { return s; });
    SampleBox box{-1, 1, -4, 4, 11, 41};
    double theta = lf_dissipation(lf, box);

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> slope(-4, 4), delta(0, 1);
    for (int k = 0; k < 2000; ++k) {
        double pm = slope(rng), pp = slope(rng), d = delta(rng);
        // nondecreasing in p_minus, nonincreasing in p_plus
        CHECK(godunov_flux(h, 0.0, pm + d, pp) >= godunov_flux(h, 0.0, pm, pp) - 1e-15);
        CHECK(godunov_flux(h, 0.0, pm, pp + d) <= godunov_flux(h, 0.0, pm, pp) + 1e-15);
        CHECK(lax_friedrichs_flux(lf, 0.0, pm + d, pp, theta) >=
              lax_friedrichs_flux(lf, 0.0, pm, pp, theta) - 1e-12);
        CHECK(lax_friedrichs_flux(lf, 0.0, pm, pp + d, theta) <=
              lax_friedrichs_flux(lf, 0.0, pm, pp, theta) + 1e-12);
    }
}

TEST_CASE("lf_dissipation") {
    SampleBox box{-3, 3, -2, 2, 41, 41};
    CHECK(lf_dissipation(unit_eikonal(-3, 3), box) == doctest::Approx(1.0));

    HamiltonianSpec ha = HamiltonianSpec::eikonal([](double x) { return 2.0 - std::abs(x) / 3.0; },
                                                  -3, 3);
    CHECK(lf_dissipation(ha, box) == doctest::Approx(2.0));

    HamiltonianSpec habs = HamiltonianSpec::custom(
        [](double, double p) { return std::abs(p); }, [](double) { return 1.0; }, 1.0,
        [](double r) { return r; }, [](double s) { return s; });
    CHECK(lf_dissipation(habs, box) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("audit passes the model problem with fitted C_H = 1") {
    HamiltonianSpec h = unit_eikonal(-3, 3);
    Grid g = make_uniform_grid(-3, 3, 301);
    ScalarField cost = ScalarField::sample(g, [](double x) { return 1.0 + std::abs(x); });
    SampleBox box{-3, 3, -5, 5, 41, 41};
    AuditReport rep = audit_assumptions(h, cost, box, 0.05);
    CHECK(rep.all_pass());
    CHECK(rep.fitted_c_h == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.to_text().find("coercivity.verdict = pass") != std::string::npos);
}

TEST_CASE("audit catches a signed Hamiltonian") {
    HamiltonianSpec bad = HamiltonianSpec::custom(
        [](double, double p) { return p; }, [](double) { return 1.0; }, 1.0,
        [](double r) { return r; }, [](double s) { return s; });
    Grid g = make_uniform_grid(-3, 3, 61);
    ScalarField cost = ScalarField::sample(g, [](double x) { return 1.0 + std::abs(x); });
    SampleBox box{-3, 3, -5, 5, 21, 21};
    AuditReport rep = audit_assumptions(bad, cost, box, 0.05);
    const AssumptionCheck* rest = rep.find("rest_state");
    REQUIRE(rest != nullptr);
    CHECK_FALSE(rest->pass);
    CHECK(rest->has_witness);
    CHECK(rest->wp < 0.0); // a negative p witnesses H(x,p) < 0
}

TEST_CASE("audit catches a violated upper envelope") {
    // H = p^2 against a declared m(r) = r fails at |p| = 2
    HamiltonianSpec quad = HamiltonianSpec::custom(
        [](double, double p) { return p * p; }, [](double) { return 1.0; }, 4.0,
        [](double r) { return r; }, [](double s) { return s; });
    Grid g = make_uniform_grid(-1, 1, 21);
    ScalarField cost = ScalarField::sample(g, [](double x) { return x * x; });
    SampleBox box{-1, 1, -2, 2, 5, 41};
    AuditReport rep = audit_assumptions(quad, cost, box, 1e-9);
    const AssumptionCheck* env = rep.find("upper_envelope");
    REQUIRE(env != nullptr);
    CHECK_FALSE(env->pass);
    CHECK(std::abs(env->wp) == doctest::Approx(2.0));
    CHECK(env->margin == doctest::Approx(2.0 - 4.0)); // m(2) - H(x,2)
}
