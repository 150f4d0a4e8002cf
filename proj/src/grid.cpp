#include "hjlab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hjlab {

Grid make_uniform_grid(double x_min, double x_max, int n) {
    ensure_arg(std::isfinite(x_min) && std::isfinite(x_max), "grid bounds must be finite");
    ensure_arg(x_min < x_max, "grid requires x_min < x_max");
    ensure_arg(n >= 3, "grid requires at least 3 nodes");
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.dx = (x_max - x_min) / (n - 1);
    return g;
}

double interp_linear(const ScalarField& f, double x) {
    const Grid& g = f.grid;
    ensure_arg(std::isfinite(x), "interp_linear: non-finite query");
    if (x < g.x_min || x > g.x_max)
        throw std::out_of_range("interp_linear: query outside [x_min, x_max]");
    int i = g.cell_of(x);
    // Exact nodal hits return the stored value bit-for-bit.
    if (x == g.coord(i)) return f.values[i];
    if (x == g.coord(i + 1)) return f.values[i + 1];
    double theta = (x - g.coord(i)) / g.dx;
    return f.values[i] + theta * (f.values[i + 1] - f.values[i]);
}

double min_value(const ScalarField& f) {
    return *std::min_element(f.values.begin(), f.values.end());
}

double max_value(const ScalarField& f) {
    return *std::max_element(f.values.begin(), f.values.end());
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace hjlab
