#include "bubble/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace bubble {

namespace {

void check_nonincreasing(const ScalarField& r0) {
    for (int i = 0; i + 1 < r0.n(); ++i)
        if (r0[i + 1] > r0[i] + 1e-12)
            throw ScenarioConfigError("scenario: r0 must be nonincreasing in x");
}

}  // namespace

void CryptoScenario::validate() const {
    if (nu <= 0.0) throw ScenarioConfigError("crypto scenario: need nu > 0");
    if (c <= 0.0) throw ScenarioConfigError("crypto scenario: need c > 0");
    if (K_asset <= 0.0) throw ScenarioConfigError("crypto scenario: need K > 0");
    if (N_agents <= 0.0) throw ScenarioConfigError("crypto scenario: need N > 0");
    check_finite(r0, "crypto r0");
    check_nonincreasing(r0);
}

void RealEstateScenario::validate() const {
    if (nu <= 0.0) throw ScenarioConfigError("real-estate scenario: need nu > 0");
    if (gamma <= 0.0) throw ScenarioConfigError("real-estate scenario: need gamma > 0");
    if (K_asset <= 0.0) throw ScenarioConfigError("real-estate scenario: need K > 0");
    if (Q_wealth <= 0.0) throw ScenarioConfigError("real-estate scenario: need Q > 0");
    check_finite(r0, "real-estate r0");
    check_nonincreasing(r0);
    if (f.grid != r0.grid) throw ScenarioConfigError("real-estate scenario: f grid mismatch");
    for (double v : f.values)
        if (v < 0.0) throw ScenarioConfigError("real-estate scenario: need f >= 0");
}

EllipticProblem build_problem(const Scenario& scn) {
    return std::visit(
        [](const auto& s) {
            s.validate();
            ScalarField a(s.r0.grid, 0.0);
            for (int i = 0; i < s.r0.n(); ++i) a[i] = s.r1 - s.r0[i];
            ScalarField f(s.r0.grid, 0.0);
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, RealEstateScenario>) f = s.f;
            return EllipticProblem{s.nu, s.eps(), ScalarField(s.r0.grid, 0.0), std::move(a),
                                   std::move(f)};
        },
        scn);
}

namespace {

// 5-point second derivative where it fits; the allocation check deliberately
// uses a different stencil than the solver so the clearing error measures
// discretization error instead of cancelling identically.
double d2_wide(const ScalarField& u, int i) {
    const double h2 = u.grid.h * u.grid.h;
    return (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h2);
}

}  // namespace

AllocationProfile allocation_profile(const Scenario& scn, const ScalarField& u,
                                     const SolveReport& report) {
    if (report.regime.regime != Regime::UniquePositive)
        throw NoBubbleError("allocation_profile: no positive solution (regime " +
                            std::string(regime_name(report.regime.regime)) + ")");
    const int n = u.n();
    ScalarField du = gradient(u);
    double du_max = sup_norm(du);

    AllocationProfile out;
    out.theta = ScalarField(u.grid, 0.0);
    out.demand = ScalarField(u.grid, 0.0);
    out.defined.assign(static_cast<size_t>(n), false);

    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            const double sigma_sq = 2.0 * s.nu;
            for (int i = 2; i <= n - 3; ++i) {
                if (std::fabs(du[i]) < 0.05 * du_max) continue;  // formula degenerates
                double num = u[i] * (s.r1 - s.r0[i]) + s.nu * d2_wide(u, i);
                if constexpr (std::is_same_v<S, RealEstateScenario>) num += s.f[i];
                double dsq = du[i] * du[i];
                if constexpr (std::is_same_v<S, CryptoScenario>) {
                    double D = num / (s.c * sigma_sq * dsq);  // per agent, quantity
                    out.theta[i] = u[i] * D;                  // per unit wealth q = 1
                    out.demand[i] = D;
                    out.clearing_error =
                        std::max(out.clearing_error, std::fabs(s.N_agents * D - s.K_asset));
                } else {
                    double theta = u[i] * num / (s.gamma * sigma_sq * dsq);
                    double agg = s.Q_wealth * theta / u[i];  // aggregate quantity demanded
                    out.theta[i] = theta;
                    out.demand[i] = agg;
                    out.clearing_error = std::max(out.clearing_error, std::fabs(agg - s.K_asset));
                }
                out.defined[static_cast<size_t>(i)] = true;
            }
        },
        scn);
    return out;
}

ThresholdScan gate_threshold_scan(const Scenario& scn, const std::vector<double>& shifts) {
    const EllipticProblem base = build_problem(scn);
    auto lam1 = [&](double shift) {
        ScalarField a = base.a;
        for (double& v : a.values) v -= shift;  // shifting r0 up lowers a
        return principal_eigenpair(base.nu, ScalarField(a.grid, 0.0), a).lambda1;
    };

    ThresholdScan scan;
    for (double s : shifts) {
        double l = lam1(s);
        Regime reg = (l < -kGateTol) ? Regime::UniquePositive : Regime::ZeroOnly;
        scan.rows.push_back({s, l, reg});
    }

    // lambda1 is increasing in the shift (exactly additive for constants)
    double lo = -64.0, hi = 64.0;
    if (!shifts.empty()) {
        lo = *std::min_element(shifts.begin(), shifts.end());
        hi = *std::max_element(shifts.begin(), shifts.end());
    }
    double flo = lam1(lo), fhi = lam1(hi);
    int guard = 0;
    while (flo > 0.0 && guard++ < 8) flo = lam1(lo -= 8.0);
    guard = 0;
    while (fhi < 0.0 && guard++ < 8) fhi = lam1(hi += 8.0);
    if (flo <= 0.0 && fhi >= 0.0) {
        while (hi - lo > 1e-8) {
            double mid = 0.5 * (lo + hi);
            (lam1(mid) < 0.0 ? lo : hi) = mid;
        }
        scan.critical_shift = 0.5 * (lo + hi);
    }
    return scan;
}

}  // namespace bubble
