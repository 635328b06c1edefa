#include "bubble/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bubble {

std::vector<double> Tridiag::apply(const std::vector<double>& x) const {
    const int m = n();
    std::vector<double> y(m);
    for (int i = 0; i < m; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i] * x[i - 1];
        if (i < m - 1) s += upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

Tridiag assemble_operator(double nu, const ScalarField& b, const ScalarField& a) {
    if (b.grid != a.grid) throw std::invalid_argument("assemble_operator: grid mismatch");
    const int n = a.n();
    const double h = a.grid.h;
    const double c = nu / (h * h);
    Tridiag A{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
              std::vector<double>(n, 0.0)};
    A.diag[0] = 2.0 * c - a[0];
    A.upper[0] = -2.0 * c;
    for (int i = 1; i < n - 1; ++i) {
        A.lower[i] = -c + b[i] / (2.0 * h);
        A.diag[i] = 2.0 * c - a[i];
        A.upper[i] = -c - b[i] / (2.0 * h);
    }
    A.lower[n - 1] = -2.0 * c;
    A.diag[n - 1] = 2.0 * c - a[n - 1];
    return A;
}

std::vector<double> thomas_solve(const Tridiag& A, std::vector<double> rhs) {
    const int n = A.n();
    std::vector<double> c(n), d(n);
    double beta = A.diag[0];
    if (beta == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    c[0] = A.upper[0] / beta;
    d[0] = rhs[0] / beta;
    for (int i = 1; i < n; ++i) {
        beta = A.diag[i] - A.lower[i] * c[i - 1];
        if (beta == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
        c[i] = (i < n - 1) ? A.upper[i] / beta : 0.0;
        d[i] = (rhs[i] - A.lower[i] * d[i - 1]) / beta;
    }
    for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
    return d;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::UniquePositive: return "UniquePositive";
        case Regime::ZeroOnly: return "ZeroOnly";
        case Regime::DegenerateNonnegativeA: return "DegenerateNonnegativeA";
    }
    return "?";
}

EigenPair principal_eigenpair(double nu, const ScalarField& b, const ScalarField& a,
                              int max_iter, double tol) {
    if (nu <= 0.0) throw std::invalid_argument("principal_eigenpair: need nu > 0");
    check_finite(a, "principal_eigenpair a");
    check_finite(b, "principal_eigenpair b");
    const int n = a.n();
    const double h = a.grid.h;
    const double sup_a = sup_norm(a), sup_b = sup_norm(b);
    const double sigma = 4.0 * nu / (h * h) + sup_a + sup_b / h;

    Tridiag L = assemble_operator(nu, b, a);

    const double opscale = 4.0 * nu / (h * h) + sup_a + sup_b / h;
    const double target = 200.0 * std::numeric_limits<double>::epsilon() * (opscale + 1.0);
    (void)tol;

    std::vector<double> x(n, 1.0);
    double lambda = 0.0;
    double res = std::numeric_limits<double>::infinity();

    auto rayleigh = [&](double& lam, double& r) {
        std::vector<double> Lx = L.apply(x);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += x[i] * Lx[i];
            den += x[i] * x[i];
        }
        lam = num / den;
        r = 0.0;
        for (int i = 0; i < n; ++i) r = std::max(r, std::fabs(Lx[i] - lam * x[i]));
    };

    auto step = [&](double shift) {
        Tridiag M = L;
        for (int i = 0; i < n; ++i) M.diag[i] += shift;
        std::vector<double> y = thomas_solve(M, x);
        double m = 0.0;
        for (double v : y) m = std::max(m, std::fabs(v));
        if (!(m > 0.0) || !std::isfinite(m))
            throw IterationFailure("principal_eigenpair: degenerate iterate", res);
        for (double& v : y) v /= m;
        x.swap(y);
    };

    // Warm-up with the positivity-preserving shift, pulling the iterate into
    // the Perron cone and producing a first eigenvalue estimate.
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
        step(sigma);
        rayleigh(lambda, res);
        if (res <= target) {
            converged = true;
            break;
        }
    }

    // The safe shift alone converges at rate 1 - gap/sigma, prohibitively slow
    // on fine grids; re-shift just below the current estimate instead.
    if (!converged) {
        double best = res;
        int stall = 0;
        for (int it = 0; it < std::min(max_iter, 2000); ++it) {
            double s = lambda - (10.0 * res + 1e-8 * (1.0 + std::fabs(lambda)));
            step(-s);
            rayleigh(lambda, res);
            if (res <= target) {
                converged = true;
                break;
            }
            if (res < 0.9 * best) {
                best = res;
                stall = 0;
            } else if (++stall >= 8) {
                break;  // residual at its rounding floor
            }
        }
        if (!converged && res > 1e4 * target)
            throw IterationFailure("principal_eigenpair: no convergence", res);
    }

    // Perron vector: fix the sign so the iterate is positive everywhere.
    double mx = *std::max_element(x.begin(), x.end());
    double mn = *std::min_element(x.begin(), x.end());
    if (std::fabs(mn) > std::fabs(mx))
        for (double& v : x) v = -v;
    if (*std::min_element(x.begin(), x.end()) <= 0.0)
        throw IterationFailure("principal_eigenpair: eigenvector not positive", res);

    EigenPair out;
    out.lambda1 = lambda;
    out.phi = ScalarField(a.grid, std::move(x));
    out.residual = res;
    return out;
}

GateVerdict existence_gate(double nu, const ScalarField& a) {
    double min_a = *std::min_element(a.values.begin(), a.values.end());
    if (min_a >= 0.0) {
        // lambda1 is still reported for diagnostics
        EigenPair p = principal_eigenpair(nu, ScalarField(a.grid, 0.0), a);
        return {Regime::DegenerateNonnegativeA, p.lambda1, min_a};
    }
    EigenPair p = principal_eigenpair(nu, ScalarField(a.grid, 0.0), a);
    Regime r = (p.lambda1 < -kGateTol) ? Regime::UniquePositive : Regime::ZeroOnly;
    return {r, p.lambda1, min_a};
}

double critical_lambda(double nu, const ScalarField& r, std::pair<double, double> bracket) {
    check_finite(r, "critical_lambda r");
    auto lam1 = [&](double lam) {
        ScalarField a(r.grid, 0.0);
        for (int i = 0; i < r.n(); ++i) a[i] = lam * r[i] - 1.0;
        return principal_eigenpair(nu, ScalarField(r.grid, 0.0), a).lambda1;
    };
    double lo = bracket.first, hi = bracket.second;
    double flo = lam1(lo), fhi = lam1(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::runtime_error("critical_lambda: lambda1 does not change sign on bracket");
    // lambda1 is nonincreasing in lambda (r >= 0), so the root is unique
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double f = lam1(mid);
        if (f == 0.0) return mid;
        if (f * flo > 0.0) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace bubble
