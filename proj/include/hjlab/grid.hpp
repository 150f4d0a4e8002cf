// Uniform 1D grid and nodal scalar fields.
#pragma once
#include <cmath>
#include <functional>
#include <vector>

#include "hjlab/common.hpp"

namespace hjlab {

struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 0; // node count, endpoints included
    double dx = 0.0;

    double coord(int i) const { return x_min + i * dx; }

    bool same_as(const Grid& o) const {
        return n == o.n && x_min == o.x_min && x_max == o.x_max;
    }

    // Index of the cell [x_i, x_{i+1}] containing x, clamped to [0, n-2].
    int cell_of(double x) const {
        int i = static_cast<int>(std::floor((x - x_min) / dx));
        if (i < 0) i = 0;
        if (i > n - 2) i = n - 2;
        return i;
    }
};

Grid make_uniform_grid(double x_min, double x_max, int n);

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), values(g.n, 0.0) {}

    static ScalarField sample(const Grid& g, const std::function<double(double)>& f) {
        ScalarField out(g);
        for (int i = 0; i < g.n; ++i) out.values[i] = f(g.coord(i));
        return out;
    }

    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    int size() const { return grid.n; }
};

// Piecewise-linear interpolation; exact at nodes. Out-of-range x is an
// error: callers clamp explicitly, silent extrapolation is forbidden.
double interp_linear(const ScalarField& f, double x);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
bool all_finite(const ScalarField& f);

} // namespace hjlab
