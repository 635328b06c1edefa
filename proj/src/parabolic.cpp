#include "bubble/parabolic.hpp"

#include <algorithm>
#include <cmath>

namespace bubble {

namespace {

ScalarField one_step(const EllipticProblem& p, const ScalarField& u, double dt) {
    // (1/dt) w - nu w'' + eps (w')^2 - b w' - a w - f = u/dt
    // maps onto the inner solver with kappa = 1/dt and rhs = u/dt + f.
    const double kappa = 1.0 / dt;
    ScalarField rhs(u.grid, 0.0);
    for (int i = 0; i < u.n(); ++i) rhs[i] = kappa * u[i] + p.f[i];
    return inner_semilinear_solve(p, kappa, rhs, u);
}

}  // namespace

ScalarField step_implicit(const EllipticProblem& p, const ScalarField& u, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("step_implicit: need dt > 0");
    for (int halvings = 0; halvings <= 10; ++halvings) {
        int sub = 1 << halvings;
        double sdt = dt / sub;
        try {
            ScalarField w = u;
            for (int k = 0; k < sub; ++k) w = one_step(p, w, sdt);
            return w;
        } catch (const InnerSolveError&) {
            // retry with a smaller substep
        }
    }
    throw StepError("step_implicit: Newton failed after 10 dt halvings");
}

EvolutionReport evolve_to_steady(const EllipticProblem& p, const ScalarField& u0, double dt,
                                 double t_max, double tol, const ScalarField* reference) {
    p.validate();
    check_finite(u0, "evolve_to_steady u0");
    for (double v : u0.values)
        if (v < 0.0) throw std::invalid_argument("evolve_to_steady: need u0 >= 0");

    EvolutionReport rep;
    rep.dt = dt;
    ScalarField u = u0;

    const long long steps = static_cast<long long>(std::ceil(t_max / dt));
    const long long sample_every = std::max<long long>(1, steps / 400);

    auto record = [&](double t) {
        rep.times.push_back(t);
        rep.sup_norms.push_back(sup_norm(u));
        if (reference) rep.gaps.push_back(sup_diff(u, *reference));
    };
    record(0.0);

    for (long long k = 0; k < steps; ++k) {
        ScalarField next = step_implicit(p, u, dt);
        double rate = sup_diff(next, u) / dt;
        u = std::move(next);
        double t = (k + 1) * dt;
        if ((k + 1) % sample_every == 0 || k + 1 == steps) record(t);
        if (rate <= tol) {
            if (rep.times.back() != t) record(t);
            rep.converged = true;
            break;
        }
    }
    rep.u_final = std::move(u);
    return rep;
}

}  // namespace bubble
