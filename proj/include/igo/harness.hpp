#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace igo {

// Exit statuses shared by the library API and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;

// Validates a config object against the per-kind schema (required keys,
// types, unknown-key rejection). Returns an error string or nullopt.
std::optional<std::string> validate_config(const nlohmann::json& cfg);

// Runs one experiment: writes the kind's CSV artifacts, a JSON summary, and
// a manifest (the fully resolved config; re-running it reproduces every CSV
// byte-for-byte) into out_dir. Returns one of the exit statuses above;
// diagnostics go to stderr.
int run_experiment(nlohmann::json cfg, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override = std::nullopt);

// File-based entry point used by the CLI: parses, validates, runs.
int run_experiment_file(const std::string& config_path, const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

// Parse + schema check only; prints diagnostics. Returns 0 or kExitConfigError.
int validate_config_file(const std::string& config_path);

}  // namespace igo
