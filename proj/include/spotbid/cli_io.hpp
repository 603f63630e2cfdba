#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "spotbid/experiments.hpp"
#include "spotbid/learner.hpp"
#include "spotbid/policy.hpp"
#include "spotbid/types.hpp"

namespace spotbid {

inline constexpr const char* kToolVersion = "0.1.0";

struct ParsedConfig {
    InstanceConfig instance;
    LearnConfig learn;
    ScenarioSpec scenario;
    nlohmann::json resolved;              // full config with every default expanded
    std::set<std::string> explicit_keys;  // dotted paths present in the source file
};

// Strict-schema JSON config: unknown keys are rejected, missing keys get
// documented defaults, out-of-range values name the offending key path.
// A run manifest (object with "resolved_config") is accepted as well, so a
// finished run can be replayed from its manifest.
ParsedConfig parse_config(const std::filesystem::path& path);
ParsedConfig parse_config_json(const nlohmann::json& doc);

// Hash of the resolved instance settings, stored in checkpoints.
std::string instance_config_hash(const InstanceConfig& cfg);

// Checkpoint schema: {theta, sigma, feature_order, config_hash}.
void save_checkpoint(const PolicyParams& params, const std::vector<std::string>& feature_order,
                     const std::string& config_hash, const std::filesystem::path& path);

// Round-trips bit-exactly. Rejects checkpoints whose feature_order does not
// match `expected_order`, or whose parameters violate policy invariants.
PolicyParams load_checkpoint(const std::filesystem::path& path,
                             const std::vector<std::string>& expected_order);

// 17 significant digits; enough for lossless double round-trips.
std::string format_number(double v);

void write_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path);
void write_sweep_csv(const SweepTable& table, std::size_t theta_size,
                     const std::filesystem::path& path);

// Entry point behind the `spotbid` binary. Returns the process exit status:
// 0 success, 2 usage or configuration error, 3 divergence abort.
int run_command(const std::vector<std::string>& args);

}  // namespace spotbid
