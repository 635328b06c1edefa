#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bubble/config.hpp"

namespace bubble {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string json;  // full report line
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass = false;

    std::string jsonl() const;  // one line per check + an overall line
};

/// The verify-all pipeline: gate -> solve -> residual audit -> parabolic
/// long-time gap -> Monte Carlo value check on the constant-source
/// perturbation of the problem.
VerifyReport run_verify_all(const RunConfig& cfg);

/// Dispatch one CLI command (solve, eigen, evolve, branch, verify-control,
/// scenario, verify-all). Artifacts land in cfg.out_dir. Returns the process
/// exit status: 0 iff every requested check passed.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace bubble
