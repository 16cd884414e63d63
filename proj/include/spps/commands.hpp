#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "spps/problem.hpp"

namespace spps {

/// Stable exit-code contract for CI use.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitNumerical = 2,
    kExitInconclusive = 3,
};

struct CommandOptions {
    double tol = 1e-10;           // relative residual / discrepancy tolerance
    bool pretty = false;          // aligned columns instead of CSV
    double div_threshold = 25.0;  // practical-divergence threshold for diagnostics
    std::optional<std::string> mode_override;
    std::uint64_t rng_state = kDefaultSeedSearchState;
};

int cmd_solve(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt);
int cmd_eigen(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt);
int cmd_bounded(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt);
int cmd_verify(const ProblemFile& pf, std::ostream& out, const CommandOptions& opt);
int cmd_demo(const std::string& name, std::ostream& out, const CommandOptions& opt);

}  // namespace spps
