#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bubble/grid.hpp"
#include "doctest.h"

using namespace bubble;

TEST_CASE("make_grid basics") {
    Grid1D g = make_grid(3);
    CHECK(g.n == 3);
    CHECK(g.h == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.node(2) == doctest::Approx(1.0).epsilon(1e-15));

    Grid1D g2 = make_grid(101);
    CHECK(g2.h == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(g2.node(50) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::fabs(g2.h * (g2.n - 1) - 1.0) < 1e-15);

    CHECK_THROWS_AS(make_grid(2), std::invalid_argument);
}

TEST_CASE("neumann_laplacian annihilates constants") {
    Grid1D g = make_grid(64);
    ScalarField u(g, 3.7);
    ScalarField lap = neumann_laplacian(u);
    for (int i = 0; i < g.n; ++i) CHECK(lap[i] == 0.0);
}

TEST_CASE("neumann_laplacian of cos(pi x)") {
    Grid1D g = make_grid(1001);
    ScalarField u = ScalarField::from(g, [](double x) { return std::cos(M_PI * x); });
    ScalarField lap = neumann_laplacian(u);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
        err = std::max(err, std::fabs(lap[i] + M_PI * M_PI * std::cos(M_PI * g.node(i))));
    CHECK(err < 2e-5);  // O(h^2)
}

TEST_CASE("neumann_laplacian of x^2 at n=5, stencil by hand") {
    Grid1D g = make_grid(5);
    ScalarField u = ScalarField::from(g, [](double x) { return x * x; });
    ScalarField lap = neumann_laplacian(u);
    const double h2 = 0.25 * 0.25;
    // boundary rows from the reflection formula
    CHECK(lap[0] == doctest::Approx(2.0 * (u[1] - u[0]) / h2).epsilon(1e-14));
    CHECK(lap[4] == doctest::Approx(2.0 * (u[3] - u[4]) / h2).epsilon(1e-14));
    CHECK(lap[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lap[4] == doctest::Approx(-14.0).epsilon(1e-12));
    for (int i = 1; i <= 3; ++i) CHECK(lap[i] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gradient_squared") {
    Grid1D g = make_grid(101);
    ScalarField c(g, -4.0);
    ScalarField gc = gradient_squared(c);
    for (int i = 0; i < g.n; ++i) CHECK(gc[i] == 0.0);

    ScalarField lin = ScalarField::from(g, [](double x) { return x; });
    ScalarField gl = gradient_squared(lin);
    CHECK(gl[0] == 0.0);
    CHECK(gl[g.n - 1] == 0.0);
    for (int i = 1; i < g.n - 1; ++i) CHECK(gl[i] == doctest::Approx(1.0).epsilon(1e-12));

    Grid1D gf = make_grid(2001);
    ScalarField s = ScalarField::from(gf, [](double x) { return std::sin(2.0 * M_PI * x); });
    ScalarField gs = gradient_squared(s);
    double err = 0.0;
    for (int i = 1; i < gf.n - 1; ++i) {
        double exact = 2.0 * M_PI * std::cos(2.0 * M_PI * gf.node(i));
        err = std::max(err, std::fabs(gs[i] - exact * exact));
    }
    CHECK(err < 5e-4);
}

TEST_CASE("norms") {
    Grid1D g = make_grid(101);
    ScalarField c(g, -2.0);
    auto [sup, l1] = norms(c);
    CHECK(sup == 2.0);
    CHECK(l1 == doctest::Approx(2.0).epsilon(1e-14));

    ScalarField z(g, 0.0);
    CHECK(sup_norm(z) == 0.0);
    CHECK(l1_norm(z) == 0.0);

    ScalarField lin = ScalarField::from(g, [](double x) { return x; });
    CHECK(sup_norm(lin) == 1.0);
    CHECK(l1_norm(lin) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("discrete integration by parts: flux-free laplacian") {
    Grid1D g = make_grid(1001);
    ScalarField u = ScalarField::from(g, [](double x) {
        return std::exp(std::sin(2.0 * M_PI * x)) + 0.3 * std::cos(5.0 * x);
    });
    ScalarField lap = neumann_laplacian(u);
    double s = 0.5 * (lap[0] + lap[g.n - 1]);
    for (int i = 1; i < g.n - 1; ++i) s += lap[i];
    s *= g.h;
    CHECK(std::fabs(s) < 1e-8);
}

TEST_CASE("second-order convergence of the stencils") {
    auto stencil_err = [](int n) {
        Grid1D g = make_grid(n);
        ScalarField u = ScalarField::from(g, [](double x) { return std::cos(2.0 * M_PI * x); });
        ScalarField lap = neumann_laplacian(u);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i) {
            double exact = -4.0 * M_PI * M_PI * std::cos(2.0 * M_PI * g.node(i));
            err = std::max(err, std::fabs(lap[i] - exact));
        }
        return err;
    };
    double e1 = stencil_err(257), e2 = stencil_err(513);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("csv round trip") {
    Grid1D g = make_grid(257);
    ScalarField u = ScalarField::from(g, [](double x) { return std::sin(3.0 * x) + 1.0 / 3.0; });
    auto path = std::filesystem::temp_directory_path() / "bubble_grid_roundtrip.csv";
    write_csv(path.string(), u);
    ScalarField v = read_csv(path.string());
    REQUIRE(v.n() == u.n());
    for (int i = 0; i < u.n(); ++i) CHECK(v[i] == u[i]);  // 17 digits round-trip exactly
    std::filesystem::remove(path);
}

TEST_CASE("read_csv rejects non-uniform nodes") {
    auto path = std::filesystem::temp_directory_path() / "bubble_grid_bad.csv";
    {
        std::ofstream out(path);
        out << "x,value\n0,1\n0.3,1\n1,1\n";
    }
    CHECK_THROWS(read_csv(path.string()));
    std::filesystem::remove(path);
}

TEST_CASE("check_finite") {
    Grid1D g = make_grid(5);
    ScalarField u(g, 1.0);
    CHECK_NOTHROW(check_finite(u, "u"));
    u[2] = std::nan("");
    CHECK_THROWS(check_finite(u, "u"));
}

TEST_CASE("piecewise linear interp") {
    Grid1D g = make_grid(11);
    ScalarField u = ScalarField::from(g, [](double x) { return 2.0 * x - 0.5; });
    CHECK(u.interp(0.37) == doctest::Approx(2.0 * 0.37 - 0.5).epsilon(1e-14));
    CHECK(u.interp(-1.0) == u[0]);
    CHECK(u.interp(2.0) == u[10]);
}
