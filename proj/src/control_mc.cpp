#include "bubble/control_mc.hpp"

#include <algorithm>
#include <cmath>

namespace bubble {

void McConfig::validate() const {
    if (paths < 1) throw std::invalid_argument("McConfig: need paths >= 1");
    if (dt <= 0.0) throw std::invalid_argument("McConfig: need dt > 0");
    if (horizon <= 0.0) throw std::invalid_argument("McConfig: need horizon > 0");
    if (x0 < 0.0 || x0 > 1.0) throw std::invalid_argument("McConfig: need x0 in [0,1]");
    if (weight_floor < 0.0) throw std::invalid_argument("McConfig: need weight_floor >= 0");
}

namespace rng {

static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t path_key(std::uint64_t master_seed, std::uint64_t path_index) {
    return mix(mix(master_seed + kGolden) ^ (path_index * 0xda942042e4dd58b5ULL));
}

double uniform(std::uint64_t path_base, std::uint64_t counter) {
    std::uint64_t x = mix(path_base + counter * kGolden);
    return ((x >> 11) + 1) * 0x1.0p-53;
}

void normal_block(std::uint64_t path_base, std::uint64_t k0, int count, double* out) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int j = 0; j < count; j += 2) {
        double u1 = uniform(path_base, k0 + j);
        double u2 = uniform(path_base, k0 + j + 1);
        double r = std::sqrt(-2.0 * std::log(u1));
        out[j] = r * std::cos(two_pi * u2);
        out[j + 1] = r * std::sin(two_pi * u2);
    }
}

}  // namespace rng

double fold_reflect(double x) {
    x = std::fabs(x);
    double m = std::fmod(x, 2.0);
    return m <= 1.0 ? m : 2.0 - m;
}

namespace {

// exp for the per-step weight factor a*dt; |z| is tiny, a degree-4 Taylor
// keeps the relative error below 1e-13 per step.
inline double exp_small(double z) {
    if (std::fabs(z) > 0.01) return std::exp(z);
    return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0))));
}

// linear interpolation against raw node data (hot loop; avoids the
// ScalarField bounds logic)
inline double interp_nodes(const double* v, int n, double inv_h, double x) {
    double s = x * inv_h;
    int i = static_cast<int>(s);
    if (i >= n - 1) return v[n - 1];
    double t = s - i;
    return (1.0 - t) * v[i] + t * v[i + 1];
}

constexpr int kBlock = 256;

// index-ordered pairwise sum, schedule independent
double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v, 0, v.size()); }

McEstimate reduce(const std::vector<double>& per_path, const std::vector<double>& residual_weight) {
    McEstimate est;
    const double n = static_cast<double>(per_path.size());
    est.paths_used = static_cast<long long>(per_path.size());
    est.mean = pairwise_sum(per_path) / n;
    std::vector<double> sq(per_path.size());
    for (size_t i = 0; i < per_path.size(); ++i) {
        double d = per_path[i] - est.mean;
        sq[i] = d * d;
    }
    double var = n > 1 ? pairwise_sum(sq) / (n - 1) : 0.0;
    est.std_error = std::sqrt(var / n);
    double mass = pairwise_sum(residual_weight) / n;
    est.truncation_mass = std::clamp(mass, 0.0, 1.0);
    return est;
}

}  // namespace

std::vector<double> simulate_reflected_path(double nu, const ScalarField& drift, double x0,
                                            const McConfig& cfg, long long path_index) {
    cfg.validate();
    if (x0 < 0.0 || x0 > 1.0) throw std::invalid_argument("simulate_reflected_path: x0 in [0,1]");
    check_finite(drift, "simulate_reflected_path drift");

    const long long steps = std::llround(cfg.horizon / cfg.dt);
    const double sig = std::sqrt(2.0 * nu * cfg.dt);
    const double inv_h = 1.0 / drift.grid.h;
    const double* dv = drift.values.data();
    const int n = drift.n();
    const std::uint64_t base = rng::path_key(cfg.master_seed, static_cast<std::uint64_t>(path_index));

    std::vector<double> path;
    path.reserve(static_cast<size_t>(steps) + 1);
    path.push_back(x0);
    double x = x0;
    double xi[kBlock];
    for (long long k = 0; k < steps; ++k) {
        int j = static_cast<int>(k % kBlock);
        if (j == 0) {
            int cnt = static_cast<int>(std::min<long long>(kBlock, steps - k));
            rng::normal_block(base, static_cast<std::uint64_t>(k), (cnt + 1) & ~1, xi);
        }
        x = fold_reflect(x + interp_nodes(dv, n, inv_h, x) * cfg.dt + sig * xi[j]);
        path.push_back(x);
    }
    return path;
}

McEstimate estimate_value(const EllipticProblem& p, const ScalarField& u_eps, double x0,
                          const McConfig& cfg) {
    cfg.validate();
    p.validate();
    check_finite(u_eps, "estimate_value u_eps");
    if (u_eps.grid != p.grid()) throw std::invalid_argument("estimate_value: grid mismatch");

    // half-normalized control form: w = 2 eps u solves
    //   -nu w'' + (1/2)(w')^2 = a w + 2 eps f
    const double s = 2.0 * p.eps;
    ScalarField w_field = u_eps;
    for (double& v : w_field.values) v *= s;
    ScalarField dw = gradient(w_field);
    ScalarField fw = p.f;
    for (double& v : fw.values) v *= s;

    const int n = p.grid().n;
    const double inv_h = 1.0 / p.grid().h;
    const double* dwv = dw.values.data();
    const double* av = p.a.values.data();
    const double* fv = fw.values.data();
    const double sig = std::sqrt(2.0 * p.nu * cfg.dt);
    const long long steps = std::llround(cfg.horizon / cfg.dt);
    const double dt = cfg.dt;

    std::vector<double> per_path(static_cast<size_t>(cfg.paths));
    std::vector<double> residual_w(static_cast<size_t>(cfg.paths));
    double xi[kBlock];

    for (long long pidx = 0; pidx < cfg.paths; ++pidx) {
        const std::uint64_t base = rng::path_key(cfg.master_seed, static_cast<std::uint64_t>(pidx));
        double x = x0;
        double w = 1.0;
        double cost = 0.0;
        for (long long k = 0; k < steps; ++k) {
            int j = static_cast<int>(k % kBlock);
            if (j == 0) {
                int cnt = static_cast<int>(std::min<long long>(kBlock, steps - k));
                rng::normal_block(base, static_cast<std::uint64_t>(k), (cnt + 1) & ~1, xi);
            }
            double alpha = -interp_nodes(dwv, n, inv_h, x);
            double c = 0.5 * alpha * alpha + interp_nodes(fv, n, inv_h, x);
            cost += w * c * dt;
            w *= exp_small(interp_nodes(av, n, inv_h, x) * dt);
            if (w < cfg.weight_floor) break;
            if (w > 1e12)
                throw WeightExplosion(
                    "estimate_value: exponential weight above 1e12; shorten the horizon or check "
                    "the existence gate of the controlled operator");
            x = fold_reflect(x + alpha * dt + sig * xi[j]);
        }
        per_path[static_cast<size_t>(pidx)] = cost / s;  // back to the eps-quadratic scale
        residual_w[static_cast<size_t>(pidx)] = std::min(1.0, w);
    }
    return reduce(per_path, residual_w);
}

McEstimate estimate_growth_rate(double nu, const ScalarField& b, const ScalarField& a,
                                const McConfig& cfg) {
    cfg.validate();
    check_finite(a, "estimate_growth_rate a");
    check_finite(b, "estimate_growth_rate b");
    if (a.grid != b.grid) throw std::invalid_argument("estimate_growth_rate: grid mismatch");

    const int n = a.n();
    const double inv_h = 1.0 / a.grid.h;
    const double* av = a.values.data();
    const double* bv = b.values.data();
    const double sig = std::sqrt(2.0 * nu * cfg.dt);
    const long long steps = std::llround(cfg.horizon / cfg.dt);
    const long long half = steps / 2;
    const double dt = cfg.dt;
    const double log_cap = std::log(1e12);

    std::vector<double> w_full(static_cast<size_t>(cfg.paths));
    std::vector<double> w_half(static_cast<size_t>(cfg.paths));
    double xi[kBlock];

    for (long long pidx = 0; pidx < cfg.paths; ++pidx) {
        const std::uint64_t base = rng::path_key(cfg.master_seed, static_cast<std::uint64_t>(pidx));
        double x = cfg.x0;
        double logw = 0.0;
        double wh = 0.0;
        for (long long k = 0; k < steps; ++k) {
            int j = static_cast<int>(k % kBlock);
            if (j == 0) {
                int cnt = static_cast<int>(std::min<long long>(kBlock, steps - k));
                rng::normal_block(base, static_cast<std::uint64_t>(k), (cnt + 1) & ~1, xi);
            }
            logw += interp_nodes(av, n, inv_h, x) * dt;
            if (logw > log_cap)
                throw WeightExplosion(
                    "estimate_growth_rate: exponential weight above 1e12; shorten the horizon");
            if (k + 1 == half) wh = std::exp(logw);
            x = fold_reflect(x + interp_nodes(bv, n, inv_h, x) * dt + sig * xi[j]);
        }
        w_half[static_cast<size_t>(pidx)] = wh;
        w_full[static_cast<size_t>(pidx)] = std::exp(logw);
    }

    const double np = static_cast<double>(cfg.paths);
    const double mT = pairwise_sum(w_full) / np;
    const double mH = pairwise_sum(w_half) / np;
    const double span = static_cast<double>(steps - half) * dt;

    McEstimate est;
    est.paths_used = cfg.paths;
    est.mean = (std::log(mT) - std::log(mH)) / span;
    est.truncation_mass = 0.0;

    // delta method on the log-ratio of the two (correlated) means
    double vT = 0.0, vH = 0.0, cov = 0.0;
    for (long long i = 0; i < cfg.paths; ++i) {
        double dT = w_full[static_cast<size_t>(i)] - mT;
        double dH = w_half[static_cast<size_t>(i)] - mH;
        vT += dT * dT;
        vH += dH * dH;
        cov += dT * dH;
    }
    if (cfg.paths > 1) {
        vT /= np - 1;
        vH /= np - 1;
        cov /= np - 1;
        double var_log = vT / (np * mT * mT) + vH / (np * mH * mH) - 2.0 * cov / (np * mT * mH);
        est.std_error = std::sqrt(std::max(0.0, var_log)) / span;
    }
    return est;
}

}  // namespace bubble
