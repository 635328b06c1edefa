#include "bubble/branch.hpp"

#include <algorithm>
#include <cmath>

namespace bubble {

namespace {

EllipticProblem branch_problem(double nu, const ScalarField& r, double eps, double lambda) {
    // (pb2) in canonical form: a = lambda r - 1, f = 0
    ScalarField a(r.grid, 0.0);
    for (int i = 0; i < r.n(); ++i) a[i] = lambda * r[i] - 1.0;
    return EllipticProblem{nu, eps, ScalarField(r.grid, 0.0), std::move(a),
                           ScalarField(r.grid, 0.0)};
}

void check_r(const ScalarField& r) {
    check_finite(r, "branch r");
    for (double v : r.values)
        if (v < 0.0) throw std::invalid_argument("branch: need r >= 0");
}

}  // namespace

SolveReport solve_branch_point(double nu, const ScalarField& r, double eps, double lambda,
                               const ScalarField* warm_start) {
    return solve_positive(branch_problem(nu, r, eps, lambda), warm_start);
}

BranchData trace_branch(double nu, const ScalarField& r, const std::vector<double>& eps_list,
                        const std::vector<double>& lambda_grid) {
    check_r(r);
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
        throw std::invalid_argument("trace_branch: lambda_grid must be ascending");

    BranchData data;
    data.nu = nu;
    data.r = r;
    data.eps_list = eps_list;
    // bracket: lambda1(0) = 1 > 0; expand upward until the sign flips
    double hi = 1.0;
    if (!lambda_grid.empty()) hi = std::max(hi, lambda_grid.back());
    data.lambda_c = critical_lambda(nu, r, {0.0, hi});

    for (double eps : eps_list) {
        std::vector<BranchPoint> branch;
        ScalarField prev;
        bool have_prev = false;
        for (double lambda : lambda_grid) {
            BranchPoint pt;
            pt.eps = eps;
            pt.lambda = lambda;
            if (lambda <= data.lambda_c) {
                pt.u = ScalarField(r.grid, 0.0);
                pt.sup_norm = 0.0;
            } else {
                SolveReport rep =
                    solve_branch_point(nu, r, eps, lambda, have_prev ? &prev : nullptr);
                if (rep.regime.regime != Regime::UniquePositive && lambda > data.lambda_c + 1e-6)
                    throw BranchError("trace_branch: solver reports " +
                                      std::string(regime_name(rep.regime.regime)) +
                                      " at lambda = " + std::to_string(lambda) +
                                      " although lambda_c = " + std::to_string(data.lambda_c));
                pt.u = rep.u;
                pt.sup_norm = sup_norm(pt.u);
                if (rep.regime.regime == Regime::UniquePositive) {
                    prev = pt.u;
                    have_prev = true;
                }
            }
            branch.push_back(std::move(pt));
        }
        data.points.push_back(std::move(branch));
    }
    return data;
}

double norm_matched_lambda(double nu, const ScalarField& r, double eps, double target_norm) {
    check_r(r);
    if (target_norm <= 0.0) throw std::invalid_argument("norm_matched_lambda: target_norm > 0");

    double lambda_c = critical_lambda(nu, r, {0.0, 64.0});

    auto norm_at = [&](double lambda) {
        SolveReport rep = solve_branch_point(nu, r, eps, lambda);
        if (rep.regime.regime != Regime::UniquePositive) return 0.0;
        return sup_norm(rep.u);
    };

    double lo = lambda_c, hi = lambda_c + 0.25;
    double fhi = norm_at(hi);
    int expansions = 0;
    while (fhi < target_norm) {
        if (++expansions > 16)
            throw BranchError("norm_matched_lambda: target norm unreachable within bracket");
        lo = hi;
        hi = lambda_c + (hi - lambda_c) * 2.0;
        fhi = norm_at(hi);
    }
    // psi is increasing on (lambda_c, inf), so plain bisection on the norm gap
    while (true) {
        double mid = 0.5 * (lo + hi);
        double f = norm_at(mid);
        if (std::fabs(f - target_norm) <= 1e-8 || hi - lo <= 1e-13) return mid;
        (f < target_norm ? lo : hi) = mid;
    }
}

}  // namespace bubble
