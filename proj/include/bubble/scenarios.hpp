#pragma once

#include <optional>
#include <variant>

#include "bubble/elliptic.hpp"

namespace bubble {

/// Crypto pricing model: CARA agents, eps = 2 c K nu / N, no source term.
struct CryptoScenario {
    double nu = 0.0;
    double c = 0.0;        // CARA coefficient
    double K_asset = 0.0;  // total quantity
    double N_agents = 0.0;
    double r1 = 0.0;       // constant return of the asset
    ScalarField r0;        // nonincreasing return of the numeraire

    double eps() const { return 2.0 * c * K_asset * nu / N_agents; }
    void validate() const;
};

/// Real-estate pricing model: CRRA agents at fixed total wealth,
/// eps = gamma K sigma^2 / Q with sigma^2 = 2 nu, rent source f >= 0.
struct RealEstateScenario {
    double nu = 0.0;
    double gamma = 0.0;
    double K_asset = 0.0;
    double Q_wealth = 0.0;
    double r1 = 0.0;
    ScalarField r0;
    ScalarField f;

    double eps() const { return gamma * K_asset * (2.0 * nu) / Q_wealth; }
    void validate() const;
};

using Scenario = std::variant<CryptoScenario, RealEstateScenario>;

struct ScenarioConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoBubbleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-node allocation; nodes where the formula degenerates (u' ~ 0) carry
/// no value.
struct AllocationProfile {
    ScalarField theta;                   // CRRA: wealth fraction; CARA: per unit wealth
    ScalarField demand;                  // quantity units
    std::vector<bool> defined;           // false at degenerate nodes
    double clearing_error = 0.0;         // sup |N D - K| (CARA), |Q theta/u - K| (CRRA)
};

EllipticProblem build_problem(const Scenario& scn);

AllocationProfile allocation_profile(const Scenario& scn, const ScalarField& u,
                                     const SolveReport& report);

struct ThresholdScanRow {
    double shift = 0.0;
    double lambda1 = 0.0;
    Regime regime = Regime::ZeroOnly;
};

struct ThresholdScan {
    std::vector<ThresholdScanRow> rows;
    std::optional<double> critical_shift;  // sign-change shift, bisected to 1e-8
};

/// lambda1 of the gate operator under constant upward shifts of r0.
ThresholdScan gate_threshold_scan(const Scenario& scn, const std::vector<double>& shifts);

}  // namespace bubble
