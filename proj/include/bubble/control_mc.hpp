#pragma once

#include <cstdint>

#include "bubble/elliptic.hpp"

namespace bubble {

struct McConfig {
    long long paths = 100000;
    double dt = 1e-3;
    double horizon = 30.0;
    std::uint64_t master_seed = 42;
    double x0 = 0.5;
    double weight_floor = 1e-12;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long paths_used = 0;
    double truncation_mass = 0.0;  // average surviving weight at truncation
};

struct WeightExplosion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace rng {

/// splitmix64 finalizer; the per-path stream is counter-addressable as
/// mix(path_key(seed, p) + k * golden).
std::uint64_t mix(std::uint64_t z);
std::uint64_t path_key(std::uint64_t master_seed, std::uint64_t path_index);
double uniform(std::uint64_t path_base, std::uint64_t counter);  // in (0, 1]

/// count (even) standard normals from counters k0, k0+1, ... (Box-Muller).
void normal_block(std::uint64_t path_base, std::uint64_t k0, int count, double* out);

}  // namespace rng

/// x folded into [0,1] (normal reflection at both ends).
double fold_reflect(double x);

/// Euler-Maruyama path of dX = drift(X) dt + sqrt(2 nu) dW reflected on [0,1];
/// returns the states at 0, dt, 2 dt, ..., horizon.
std::vector<double> simulate_reflected_path(double nu, const ScalarField& drift, double x0,
                                            const McConfig& cfg, long long path_index);

/// Cost of the feedback control -grad(u_eps) along exponentially weighted
/// reflected paths; estimates u_eps(x0) for u_eps solving the problem with a
/// constant-source perturbation. The problem's eps-quadratic form is mapped to
/// the half-normalized control form by w = 2 eps u.
McEstimate estimate_value(const EllipticProblem& p, const ScalarField& u_eps, double x0,
                          const McConfig& cfg);

/// Empirical exponential growth rate of E[exp(int a(Y_t) dt)] from the ratio
/// of the horizon and half-horizon weight means; compare to -lambda1.
McEstimate estimate_growth_rate(double nu, const ScalarField& b, const ScalarField& a,
                                const McConfig& cfg);

}  // namespace bubble
