#pragma once

#include "bubble/spectral.hpp"

namespace bubble {

/// Coefficients of  -nu u'' + eps (u')^2 - b u' = a u + f  on [0,1], Neumann.
struct EllipticProblem {
    double nu = 0.0;
    double eps = 0.0;
    ScalarField b, a, f;

    Grid1D grid() const { return a.grid; }
    void validate() const;
};

struct SolveReport {
    ScalarField u;
    GateVerdict regime{Regime::ZeroOnly, 0.0, 0.0};
    int outer_iterations = 0;
    double final_residual = 0.0;
    double monotone_violation = 0.0;
};

/// u0 = alpha * phi with alpha small enough that eps |u0'|^2 <= lambda u0
/// holds at every node with a 10% margin (lambda = -lambda1 > 0).
ScalarField build_subsolution(const EigenPair& pair, double lambda, double eps_norm);

/// One outer step of the monotone scheme: damped Newton on
///   -nu w'' + eps (w')^2 - b w' + (kappa - a) w = rhs.
ScalarField inner_semilinear_solve(const EllipticProblem& p, double kappa,
                                   const ScalarField& rhs, const ScalarField& init);

/// Monotone iteration from a subsolution; see SolveReport for diagnostics.
/// `warm_start` may supply a known subsolution (branch continuation).
SolveReport solve_positive(const EllipticProblem& p, const ScalarField* warm_start = nullptr);

/// Sup-norm of the discrete equation residual at u.
double residual(const EllipticProblem& p, const ScalarField& u);

/// Quadratic homogeneity: u solves at eps_from  =>  u*(eps_from/eps_to)
/// solves the same f == 0 problem at eps_to.
ScalarField rescale_quadratic(const ScalarField& u, double eps_from, double eps_to);

struct InnerSolveError : std::runtime_error {
    double last_residual;
    InnerSolveError(const std::string& msg, double res)
        : std::runtime_error(msg), last_residual(res) {}
};

struct SchemeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bubble
