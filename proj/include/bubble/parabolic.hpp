#pragma once

#include "bubble/elliptic.hpp"

namespace bubble {

struct EvolutionReport {
    ScalarField u_final;
    std::vector<double> times;
    std::vector<double> gaps;       // sup distance to the reference, when given
    std::vector<double> sup_norms;  // sup norm of the state at the sample times
    bool converged = false;
    double dt = 0.0;
};

/// One implicit Euler step of d_t u - nu u'' + eps (u')^2 - b u' = a u + f.
/// Subdivides the step (up to 10 halvings) if the Newton solve fails.
ScalarField step_implicit(const EllipticProblem& p, const ScalarField& u, double dt);

/// March to steady state; `reference` (usually the elliptic solution) is
/// optional and only feeds the gap series.
EvolutionReport evolve_to_steady(const EllipticProblem& p, const ScalarField& u0, double dt,
                                 double t_max, double tol,
                                 const ScalarField* reference = nullptr);

struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bubble
