#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "bubble/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bubble;

TEST_CASE("constant potential: lambda1 = -a, phi constant") {
    Grid1D g = make_grid(1024);
    ScalarField b(g, 0.0), a(g, -2.0);
    EigenPair p = principal_eigenpair(1.0, b, a);
    CHECK(std::fabs(p.lambda1 - 2.0) < 1e-9);
    for (int i = 0; i < g.n; ++i) CHECK(std::fabs(p.phi[i] - 1.0) < 1e-9);
}

TEST_CASE("constant drift leaves the constant eigenfunction intact") {
    Grid1D g = make_grid(1024);
    ScalarField b(g, 5.0), a(g, 3.0);
    EigenPair p = principal_eigenpair(1.0, b, a);
    CHECK(std::fabs(p.lambda1 + 3.0) < 1e-9);
    for (int i = 0; i < g.n; ++i) CHECK(std::fabs(p.phi[i] - 1.0) < 1e-9);
}

TEST_CASE("cosine potential matches the Sturm bisection oracle") {
    Grid1D g = make_grid(1024);
    ScalarField b(g, 0.0);
    ScalarField a = ScalarField::from(g, [](double x) { return std::cos(2.0 * M_PI * x); });
    EigenPair p = principal_eigenpair(0.05, b, a);
    double ref = oracle::lambda1_dense(0.05, a);
    CHECK(std::fabs(p.lambda1 - ref) < 1e-8);
}

TEST_CASE("random smooth potentials match the oracle") {
    Grid1D g = make_grid(513);
    ScalarField b(g, 0.0);
    std::mt19937 gen(7);
    for (int k = 0; k < 3; ++k) {
        ScalarField a = oracle::random_potential(g, gen);
        EigenPair p = principal_eigenpair(0.1, b, a);
        CHECK(std::fabs(p.lambda1 - oracle::lambda1_dense(0.1, a)) < 1e-8);
        for (int i = 0; i < g.n; ++i) CHECK(p.phi[i] > 0.0);  // Perron vector
        CHECK(sup_norm(p.phi) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("constant shifts move lambda1 exactly") {
    Grid1D g = make_grid(513);
    ScalarField b(g, 0.0);
    ScalarField a = ScalarField::from(g, [](double x) { return std::sin(2.0 * M_PI * x) - 0.3; });
    double l0 = principal_eigenpair(0.1, b, a).lambda1;
    ScalarField a2 = a;
    for (double& v : a2.values) v += 0.1;
    double l1 = principal_eigenpair(0.1, b, a2).lambda1;
    CHECK(std::fabs((l0 - l1) - 0.1) < 1e-10);
}

TEST_CASE("existence_gate verdicts") {
    Grid1D g = make_grid(513);
    ScalarField a1(g, -1.0);
    GateVerdict v1 = existence_gate(1.0, a1);
    CHECK(v1.regime == Regime::ZeroOnly);
    CHECK(std::fabs(v1.lambda1 - 1.0) < 1e-9);

    ScalarField a2 = ScalarField::from(g, [](double x) { return 4.0 * x - 1.0; });
    GateVerdict v2 = existence_gate(0.1, a2);
    double ref = oracle::lambda1_dense(0.1, a2);
    CHECK(std::fabs(v2.lambda1 - ref) < 1e-8);
    if (ref < -kGateTol)
        CHECK(v2.regime == Regime::UniquePositive);
    else
        CHECK(v2.regime == Regime::ZeroOnly);
    // gate consistency: a positive verdict needs max a > 0
    if (v2.regime == Regime::UniquePositive)
        CHECK(*std::max_element(a2.values.begin(), a2.values.end()) > 0.0);

    ScalarField a3(g, 0.5);
    CHECK(existence_gate(1.0, a3).regime == Regime::DegenerateNonnegativeA);
}

TEST_CASE("critical_lambda: constant r gives lambda_c = 1") {
    Grid1D g = make_grid(257);
    ScalarField r(g, 1.0);
    double lc = critical_lambda(1.0, r, {0.0, 2.0});
    CHECK(std::fabs(lc - 1.0) < 1e-9);
}

TEST_CASE("critical_lambda matches oracle bisection") {
    Grid1D g = make_grid(513);
    ScalarField r = ScalarField::from(g, [](double x) { return 1.0 - std::cos(2.0 * M_PI * x); });
    double lc = critical_lambda(0.1, r, {0.0, 8.0});

    auto oracle_l1 = [&](double lam) {
        ScalarField a(g, 0.0);
        for (int i = 0; i < g.n; ++i) a[i] = lam * r[i] - 1.0;
        return oracle::lambda1_dense(0.1, a);
    };
    double lo = 0.0, hi = 8.0;
    while (hi - lo > 1e-11) {
        double mid = 0.5 * (lo + hi);
        (oracle_l1(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(std::fabs(lc - 0.5 * (lo + hi)) < 1e-8);
}

TEST_CASE("critical_lambda: bracket without sign change") {
    Grid1D g = make_grid(257);
    ScalarField r = ScalarField::from(g, [](double x) { return 1.0 - std::cos(2.0 * M_PI * x); });
    CHECK_THROWS(critical_lambda(0.1, r, {0.0, 0.01}));
}
