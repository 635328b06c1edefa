#pragma once

#include "bubble/elliptic.hpp"

namespace bubble {

struct BranchPoint {
    double eps = 0.0;
    double lambda = 0.0;
    double sup_norm = 0.0;
    ScalarField u;
};

/// Traced solution branches of -nu u'' + eps (u')^2 + u = lambda r u,
/// one vector of points per entry of eps_list.
struct BranchData {
    double lambda_c = 0.0;
    std::vector<double> eps_list;
    std::vector<std::vector<BranchPoint>> points;
    ScalarField r;
    double nu = 0.0;
};

struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solve the branch problem over lambda_grid for each eps, warm-starting each
/// solve from the previous lambda's solution (a subsolution, since lambda
/// increases).
BranchData trace_branch(double nu, const ScalarField& r, const std::vector<double>& eps_list,
                        const std::vector<double>& lambda_grid);

/// The lambda at which the branch's sup-norm equals target_norm (bisection on
/// the increasing map lambda -> ||u_{eps,lambda}||_inf).
double norm_matched_lambda(double nu, const ScalarField& r, double eps, double target_norm);

/// Solution of the branch problem at a single (eps, lambda).
SolveReport solve_branch_point(double nu, const ScalarField& r, double eps, double lambda,
                               const ScalarField* warm_start = nullptr);

}  // namespace bubble
