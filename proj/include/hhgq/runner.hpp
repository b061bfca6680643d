#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hhgq {

using Json = nlohmann::json;

// Subcommands: classical-drive, two-mode, backaction, scan-modes, floquet,
// cross-correlation, residuals.
Json default_config(const std::string& subcommand);

// Deep-merges user keys over the defaults; unknown keys are rejected,
// applied defaults are recorded for the run metadata.
Json resolve_config(const std::string& subcommand, const Json& user,
                    std::vector<std::string>& applied_defaults);

// Runs one subcommand and writes CSV + metadata under out_dir.
// Returns the exit code contract of the CLI: 0 ok (throws ConfigError /
// PhysicsGuardError for 2 / 3).
void run_subcommand(const std::string& subcommand, const Json& resolved,
                    const std::vector<std::string>& applied_defaults, const std::string& out_dir);

}  // namespace hhgq
