#pragma once

#include <string>
#include <vector>

#include "bubble/grid.hpp"
#include "bubble/scenarios.hpp"

namespace bubble {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Named field family: constant(c), affine(p,q) = p + q x,
/// cosine(c0,c1,k) = c0 + c1 cos(2 pi k x), or csv(path).
struct FieldSpec {
    enum class Kind { Constant, Affine, Cosine, Csv } kind = Kind::Constant;
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
    std::string path;

    ScalarField make(Grid1D g) const;
    std::string to_string() const;
    bool operator==(const FieldSpec&) const = default;

    static FieldSpec constant(double c) { return {Kind::Constant, c}; }
    static FieldSpec affine(double p, double q) { return {Kind::Affine, p, q}; }
    static FieldSpec cosine(double c0, double c1, double k) { return {Kind::Cosine, c0, c1, k}; }
    static FieldSpec parse(const std::string& text);
};

enum class ProblemKind { Generic, Crypto, RealEstate };

struct RunConfig {
    // [problem]
    ProblemKind kind = ProblemKind::Generic;
    int n = 1024;
    double nu = 0.1;
    double eps = 1.0;  // generic only; scenarios derive theirs
    FieldSpec a = FieldSpec::constant(-1.0);
    FieldSpec b = FieldSpec::constant(0.0);
    FieldSpec f = FieldSpec::constant(0.0);
    FieldSpec u0 = FieldSpec::constant(0.0);
    FieldSpec r = FieldSpec::cosine(1.0, -1.0, 1.0);
    // scenario parameters
    double cara_c = 1.0, crra_gamma = 2.0;
    double K_asset = 1.0, N_agents = 2.0, Q_wealth = 4.0;
    double r1 = -0.2;
    FieldSpec r0 = FieldSpec::affine(1.0, -3.0);

    // [solver]
    double tol = 1e-10;
    double dt = 1e-2;
    double t_max = 200.0;

    // [mc]
    long long paths = 100000;
    double mc_dt = 1e-3;
    double horizon = 30.0;
    std::uint64_t seed = 42;
    double x0 = 0.5;
    double weight_floor = 1e-12;
    double mc_eps = 1e-3;  // constant perturbation of the control value check

    // [branch]
    std::vector<double> eps_list{0.5, 1.0, 2.0};
    int lambda_count = 30;
    double lambda_span = 1.0;  // grid covers (lambda_c, lambda_c + span]

    // [output]
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;

    Scenario scenario(Grid1D g) const;        // Crypto/RealEstate kinds only
    EllipticProblem problem(Grid1D g) const;  // any kind
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string emit_config(const RunConfig& cfg);  // canonical round-trippable form

}  // namespace bubble
