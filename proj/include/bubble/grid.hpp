#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bubble {

/// Uniform grid on [0,1] with n nodes, x_i = i*h, h = 1/(n-1).
struct Grid1D {
    int n = 0;
    double h = 0.0;

    double node(int i) const { return i * h; }
    bool operator==(const Grid1D&) const = default;
};

inline Grid1D make_grid(int n) {
    if (n < 3) throw std::invalid_argument("make_grid: need n >= 3, got " + std::to_string(n));
    return Grid1D{n, 1.0 / (n - 1)};
}

/// Nodal values of a function on a Grid1D.
struct ScalarField {
    Grid1D grid;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(Grid1D g, double c) : grid(g), values(static_cast<size_t>(g.n), c) {}
    ScalarField(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid.n)
            throw std::invalid_argument("ScalarField: value count does not match grid");
    }

    template <class F>
    static ScalarField from(Grid1D g, F&& f) {
        ScalarField u(g, 0.0);
        for (int i = 0; i < g.n; ++i) u.values[i] = f(g.node(i));
        return u;
    }

    int n() const { return grid.n; }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }

    /// Piecewise-linear evaluation at x in [0,1].
    double interp(double x) const {
        if (x <= 0.0) return values.front();
        if (x >= 1.0) return values.back();
        double s = x / grid.h;
        int i = static_cast<int>(s);
        if (i >= grid.n - 1) i = grid.n - 2;
        double t = s - i;
        return (1.0 - t) * values[i] + t * values[i + 1];
    }
};

void check_finite(const ScalarField& u, const char* what);

/// Second difference with ghost-node reflection at both ends (Neumann).
ScalarField neumann_laplacian(const ScalarField& u);

/// Centered first derivative; exactly 0 at the boundary nodes.
ScalarField gradient(const ScalarField& u);

/// Squared centered first derivative; 0 at the boundary nodes.
ScalarField gradient_squared(const ScalarField& u);

double sup_norm(const ScalarField& u);
double l1_norm(const ScalarField& u);  // trapezoid rule of |u|
std::pair<double, double> norms(const ScalarField& u);

double sup_diff(const ScalarField& u, const ScalarField& v);

/// Two-column CSV `x,value`, 17 significant digits.
void write_csv(const std::string& path, const ScalarField& u);
ScalarField read_csv(const std::string& path);

}  // namespace bubble
