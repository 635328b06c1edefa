#include "bubble/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bubble {

void check_finite(const ScalarField& u, const char* what) {
    for (double v : u.values)
        if (!std::isfinite(v)) throw std::runtime_error(std::string(what) + ": non-finite value");
}

ScalarField neumann_laplacian(const ScalarField& u) {
    const int n = u.n();
    const double h2 = u.grid.h * u.grid.h;
    ScalarField out(u.grid, 0.0);
    out[0] = 2.0 * (u[1] - u[0]) / h2;  // ghost reflection u_{-1} = u_1
    for (int i = 1; i < n - 1; ++i) out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / h2;
    out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) / h2;
    return out;
}

ScalarField gradient(const ScalarField& u) {
    const int n = u.n();
    const double inv2h = 0.5 / u.grid.h;
    ScalarField out(u.grid, 0.0);
    for (int i = 1; i < n - 1; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv2h;
    return out;
}

ScalarField gradient_squared(const ScalarField& u) {
    ScalarField out = gradient(u);
    for (double& v : out.values) v *= v;
    return out;
}

double sup_norm(const ScalarField& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::fabs(v));
    return m;
}

double l1_norm(const ScalarField& u) {
    const int n = u.n();
    double s = 0.5 * (std::fabs(u[0]) + std::fabs(u[n - 1]));
    for (int i = 1; i < n - 1; ++i) s += std::fabs(u[i]);
    return s * u.grid.h;
}

std::pair<double, double> norms(const ScalarField& u) { return {sup_norm(u), l1_norm(u)}; }

double sup_diff(const ScalarField& u, const ScalarField& v) {
    if (u.n() != v.n()) throw std::invalid_argument("sup_diff: grid mismatch");
    double m = 0.0;
    for (int i = 0; i < u.n(); ++i) m = std::max(m, std::fabs(u[i] - v[i]));
    return m;
}

void write_csv(const std::string& path, const ScalarField& u) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "x,value\n";
    char buf[64];
    for (int i = 0; i < u.n(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid.node(i), u[i]);
        out << buf;
    }
}

ScalarField read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string xf, vf;
        if (!std::getline(ls, xf, ',') || !std::getline(ls, vf))
            throw std::runtime_error("read_csv: malformed line in " + path);
        xs.push_back(std::stod(xf));
        vs.push_back(std::stod(vf));
    }
    const int n = static_cast<int>(vs.size());
    Grid1D g = make_grid(n);
    for (int i = 0; i < n; ++i)
        if (std::fabs(xs[i] - g.node(i)) > 1e-9)
            throw std::runtime_error("read_csv: nodes are not the uniform grid on [0,1]");
    return ScalarField(g, std::move(vs));
}

}  // namespace bubble
