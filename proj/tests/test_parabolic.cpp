#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "bubble/parabolic.hpp"
#include "doctest.h"

using namespace bubble;

namespace {

EllipticProblem constant_problem(Grid1D g, double nu, double aval, double fval = 0.0) {
    return EllipticProblem{nu, 1.0, ScalarField(g, 0.0), ScalarField(g, aval),
                           ScalarField(g, fval)};
}

}  // namespace

TEST_CASE("step_implicit: rest state") {
    Grid1D g = make_grid(101);
    EllipticProblem p = constant_problem(g, 0.1, -1.0);
    ScalarField w = step_implicit(p, ScalarField(g, 0.0), 0.1);
    CHECK(sup_norm(w) == 0.0);
}

TEST_CASE("step_implicit: ODE reduction") {
    Grid1D g = make_grid(101);
    EllipticProblem p = constant_problem(g, 0.1, -1.0);
    ScalarField w = step_implicit(p, ScalarField(g, 1.0), 0.1);
    for (int i = 0; i < g.n; ++i) CHECK(w[i] == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
}

TEST_CASE("step_implicit: implicit-equation residual") {
    Grid1D g = make_grid(101);
    EllipticProblem p{0.05, 1.0, ScalarField(g, 0.0),
                      ScalarField::from(g, [](double x) { return 4.0 * x - 1.0; }),
                      ScalarField(g, 0.1)};
    ScalarField u = ScalarField::from(g, [](double x) { return 0.2 + 0.1 * std::cos(3.0 * x); });
    double dt = 0.1;
    ScalarField w = step_implicit(p, u, dt);
    ScalarField lap = neumann_laplacian(w);
    ScalarField dw = gradient(w);
    double res = 0.0;
    for (int i = 0; i < g.n; ++i) {
        double ri = (w[i] - u[i]) / dt - p.nu * lap[i] + p.eps * dw[i] * dw[i] - p.a[i] * w[i] -
                    p.f[i];
        res = std::max(res, std::fabs(ri));
    }
    CHECK(res <= 1e-12 * (1.0 + sup_norm(u) / dt));
}

TEST_CASE("evolve_to_steady: zero data stays zero") {
    Grid1D g = make_grid(101);
    EllipticProblem p = constant_problem(g, 0.1, -1.0);
    EvolutionReport rep = evolve_to_steady(p, ScalarField(g, 0.0), 0.01, 10.0, 1e-8);
    CHECK(rep.converged);
    CHECK(sup_norm(rep.u_final) == 0.0);
}

TEST_CASE("evolve_to_steady: exponential ODE decay") {
    Grid1D g = make_grid(101);
    EllipticProblem p = constant_problem(g, 0.1, -1.0);
    double dt = 0.01;
    EvolutionReport rep = evolve_to_steady(p, ScalarField(g, 1.0), dt, 5.0, 1e-8);
    // every step is recorded here, so sup_norms[k] = (1+dt)^{-k}
    for (size_t k = 0; k < rep.times.size(); ++k) {
        double steps = std::round(rep.times[k] / dt);
        CHECK(std::fabs(rep.sup_norms[k] - std::pow(1.0 + dt, -steps)) < 1e-9);
    }
}

TEST_CASE("evolve_to_steady: long-time limit matches the elliptic solution") {
    Grid1D g = make_grid(257);
    EllipticProblem p{0.1, 0.1, ScalarField(g, 0.0),
                      ScalarField::from(g, [](double x) { return 3.0 * x - 1.2; }),
                      ScalarField(g, 0.0)};
    SolveReport stationary = solve_positive(p);
    REQUIRE(stationary.regime.regime == Regime::UniquePositive);
    EvolutionReport rep =
        evolve_to_steady(p, ScalarField(g, 0.1), 1e-2, 200.0, 1e-8, &stationary.u);
    CHECK(rep.gaps.back() <= 1e-4);
    // nonnegativity preserved
    for (int i = 0; i < g.n; ++i) CHECK(rep.u_final[i] >= -1e-12);
}

TEST_CASE("positivity propagation from a source") {
    Grid1D g = make_grid(101);
    EllipticProblem p = constant_problem(g, 0.1, -1.0, 0.3);
    ScalarField u = step_implicit(p, ScalarField(g, 0.0), 0.01);
    for (int i = 0; i < g.n; ++i) CHECK(u[i] > 0.0);
}

TEST_CASE("ordered initial data stay ordered") {
    Grid1D g = make_grid(101);
    EllipticProblem p{0.1, 1.0, ScalarField(g, 0.0),
                      ScalarField::from(g, [](double x) { return 4.0 * x - 1.0; }),
                      ScalarField(g, 0.0)};
    ScalarField lo(g, 0.1), hi(g, 0.2);
    for (int k = 0; k < 100; ++k) {
        lo = step_implicit(p, lo, 0.01);
        hi = step_implicit(p, hi, 0.01);
        for (int i = 0; i < g.n; ++i) CHECK(lo[i] <= hi[i] + 1e-10);
    }
}

TEST_CASE("gate failure: parabolic decay certifies ZeroOnly") {
    Grid1D g = make_grid(257);
    EllipticProblem p{0.1, 1.0, ScalarField(g, 0.0),
                      ScalarField::from(g, [](double x) { return 0.5 * x - 1.0; }),
                      ScalarField(g, 0.0)};
    REQUIRE(existence_gate(p.nu, p.a).regime == Regime::ZeroOnly);
    ScalarField u(g, 1.0);
    double t = 0.0;
    while (t < 200.0 && sup_norm(u) >= 1e-6) {
        u = step_implicit(p, u, 1e-2);
        t += 1e-2;
    }
    CHECK(sup_norm(u) < 1e-6);
}

TEST_CASE("step_implicit input validation") {
    Grid1D g = make_grid(65);
    EllipticProblem p = constant_problem(g, 0.1, -1.0);
    CHECK_THROWS_AS(step_implicit(p, ScalarField(g, 0.0), -0.1), std::invalid_argument);
    CHECK_THROWS(evolve_to_steady(p, ScalarField(g, -1.0), 0.01, 1.0, 1e-8));
}
