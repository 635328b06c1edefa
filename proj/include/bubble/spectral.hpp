#pragma once

#include <utility>

#include "bubble/grid.hpp"

namespace bubble {

/// Tridiagonal matrix; lower[0] and upper[n-1] are unused.
struct Tridiag {
    std::vector<double> lower, diag, upper;

    int n() const { return static_cast<int>(diag.size()); }
    std::vector<double> apply(const std::vector<double>& x) const;
};

/// Discretization of L = -nu*d2/dx2 - b*d/dx - a with Neumann conditions
/// (ghost-node reflection; the drift term vanishes at the boundary rows
/// because the reflected centered difference is zero there).
Tridiag assemble_operator(double nu, const ScalarField& b, const ScalarField& a);

/// In-place Thomas solve of (tridiagonal) A x = rhs.
std::vector<double> thomas_solve(const Tridiag& A, std::vector<double> rhs);

struct EigenPair {
    double lambda1 = 0.0;
    ScalarField phi;      // > 0 everywhere, sup-norm 1
    double residual = 0.0;
};

enum class Regime { UniquePositive, ZeroOnly, DegenerateNonnegativeA };

const char* regime_name(Regime r);

struct GateVerdict {
    Regime regime;
    double lambda1;
    double min_a;
};

struct IterationFailure : std::runtime_error {
    double last_residual;
    IterationFailure(const std::string& msg, double res)
        : std::runtime_error(msg), last_residual(res) {}
};

/// Principal eigenpair of L via inverse power iteration on (L + sigma*I)^-1,
/// sigma = 4*nu/h^2 + sup|a| + sup|b|/h so the resolvent is positivity
/// preserving.
EigenPair principal_eigenpair(double nu, const ScalarField& b, const ScalarField& a,
                              int max_iter = 100000, double tol = 1e-12);

inline constexpr double kGateTol = 1e-9;

GateVerdict existence_gate(double nu, const ScalarField& a);

/// Root of lambda -> lambda1(-nu*d2 - lambda*r + 1) by bisection, to 1e-10.
double critical_lambda(double nu, const ScalarField& r, std::pair<double, double> bracket);

}  // namespace bubble
