#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "hjlab/csv.hpp"
#include "hjlab/grid.hpp"

using namespace hjlab;

namespace {

double s_curve(double x) { return 0.5 * x * std::abs(x); } // closed form of int_0^x |y| dy

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hjlab-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

TEST_CASE("uniform grid construction") {
    Grid g = make_uniform_grid(-3, 3, 7);
    CHECK(g.n == 7);
    CHECK(g.dx == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i < 7; ++i) CHECK(g.coord(i) == doctest::Approx(-3.0 + i).epsilon(1e-15));

    Grid g2 = make_uniform_grid(0, 1, 3);
    CHECK(g2.coord(1) == doctest::Approx(0.5));

    Grid g3 = make_uniform_grid(-3, 3, 601);
    CHECK(g3.dx == doctest::Approx(0.01).epsilon(1e-14));
    // dx * (n-1) recovers the span to within one unit of roundoff
    CHECK(g3.dx * 600 == doctest::Approx(6.0).epsilon(1e-15));

    CHECK_THROWS_AS(make_uniform_grid(0, 1, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_uniform_grid(1, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_uniform_grid(2, 1, 5), std::invalid_argument);
}

TEST_CASE("linear interpolation") {
    Grid g = make_uniform_grid(-1, 1, 3);
    ScalarField f = ScalarField::sample(g, [](double x) { return x * x; });

    // chord of x^2 between 0 and 1 at the midpoint
    CHECK(interp_linear(f, 0.5) == doctest::Approx(0.5).epsilon(1e-15));

    // nodal queries return stored values exactly
    f.values = {0.1, -2.5, 1e-17};
    for (int i = 0; i < 3; ++i) CHECK(bit_equal(interp_linear(f, g.coord(i)), f.values[i]));

    // S samples on a dx = 0.01 grid: interpolant within dx^2 of the closed form
    Grid gs = make_uniform_grid(-3, 3, 601);
    ScalarField fs = ScalarField::sample(gs, s_curve);
    CHECK(std::abs(interp_linear(fs, 0.755) - s_curve(0.755)) <= gs.dx * gs.dx);

    CHECK_THROWS_AS(interp_linear(f, 1.0000001), std::out_of_range);
    CHECK_THROWS_AS(interp_linear(f, -2.0), std::out_of_range);
}

TEST_CASE("interpolation is monotone and reproduces affine data") {
    Grid g = make_uniform_grid(-2, 5, 141);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> val(-3, 3), bump(0, 2), query(-2, 5);

    ScalarField f(g), above(g);
    for (int i = 0; i < g.n; ++i) {
        f[i] = val(rng);
        above[i] = f[i] + bump(rng);
    }
    for (int k = 0; k < 500; ++k) {
        double x = query(rng);
        CHECK(interp_linear(f, x) <= interp_linear(above, x));
    }

    ScalarField affine = ScalarField::sample(g, [](double x) { return 1.75 * x - 0.3; });
    for (int k = 0; k < 200; ++k) {
        double x = query(rng);
        CHECK(interp_linear(affine, x) == doctest::Approx(1.75 * x - 0.3).epsilon(1e-13));
    }
}

TEST_CASE("field csv round trip is bit exact") {
    Grid g = make_uniform_grid(0, 1, 3);
    ScalarField f(g);
    f.values = {1.0 / 3.0, 1e-17, -2.5};
    ScalarField back = field_csv_round_trip(f, temp_file("roundtrip.csv"));
    CHECK(back.grid.same_as(g));
    CHECK(bit_equal(back.grid.dx, g.dx));
    for (int i = 0; i < 3; ++i) CHECK(bit_equal(back.values[i], f.values[i]));

    ScalarField zero(make_uniform_grid(-1, 1, 11));
    ScalarField zback = field_csv_round_trip(zero, temp_file("zero.csv"));
    for (int i = 0; i < zback.size(); ++i) CHECK(zback[i] == 0.0);

    // randomized: every double survives
    std::mt19937_64 rng(99);
    Grid gr = make_uniform_grid(-0.7, 1.3, 57);
    ScalarField fr(gr);
    std::uniform_real_distribution<double> val(-1e3, 1e3);
    for (auto& v : fr.values) v = val(rng) * std::pow(10.0, int(rng() % 20) - 10);
    ScalarField rback = field_csv_round_trip(fr, temp_file("random.csv"));
    for (int i = 0; i < gr.n; ++i) CHECK(bit_equal(rback.values[i], fr.values[i]));
}

TEST_CASE("field csv rejects malformed input") {
    Grid g = make_uniform_grid(0, 1, 5);
    ScalarField f = ScalarField::sample(g, [](double x) { return x; });
    auto path = temp_file("malformed.csv");

    write_field_csv(f, path);
    {
        // drop row 4 (node index 2)
        std::ifstream in(path);
        std::string line, all;
        int row = 0;
        while (std::getline(in, line))
            if (++row != 4) all += line + "\n";
        std::ofstream out(path, std::ios::binary);
        out << all;
    }
    CHECK_THROWS_WITH_AS(static_cast<void>(read_field_csv(path)),
                         doctest::Contains("row 4"), std::runtime_error);

    std::ofstream(path, std::ios::binary) << "a,b\n0,1\n0.5,1\n1,1\n";
    CHECK_THROWS_WITH_AS(static_cast<void>(read_field_csv(path)),
                         doctest::Contains("header"), std::runtime_error);

    std::ofstream(path, std::ios::binary) << "x,u\n0,1\n0.5,oops\n1,1\n";
    CHECK_THROWS_WITH_AS(static_cast<void>(read_field_csv(path)),
                         doctest::Contains("non-numeric"), std::runtime_error);

    write_field_csv(f, path);
    CHECK_THROWS_WITH_AS(static_cast<void>(read_field_csv(path, make_uniform_grid(0, 1, 7))),
                         doctest::Contains("declared grid"), std::runtime_error);
}

TEST_CASE("history csv groups slices by time") {
    Grid g = make_uniform_grid(-1, 1, 5);
    std::vector<double> times = {0.0, 0.25, 0.5};
    std::vector<ScalarField> fields;
    for (double t : times)
        fields.push_back(ScalarField::sample(g, [t](double x) { return t + x / 3.0; }));
    auto path = temp_file("history.csv");
    write_history_csv(times, fields, path);

    auto [rt, rf] = read_history_csv(path);
    REQUIRE(rt.size() == 3);
    for (std::size_t k = 0; k < rt.size(); ++k) {
        CHECK(bit_equal(rt[k], times[k]));
        for (int i = 0; i < g.n; ++i) CHECK(bit_equal(rf[k][i], fields[k][i]));
    }
}
