#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spotbid/learner.hpp"
#include "spotbid/types.hpp"

namespace spotbid {

// One experiment cell description: instance + learning settings plus the
// replication seeds. Sweeps copy this and vary one axis.
struct ScenarioSpec {
    std::string name = "base";
    InstanceConfig instance;
    LearnConfig learn;
    int replications = 5;
    std::vector<std::uint64_t> seeds;   // per replication; filled from learn.seed when empty
    std::string sweep_axis;             // optional override of a sweep's value list
    std::vector<double> sweep_values;

    std::vector<std::uint64_t> replication_seeds() const;
};

// Frozen-policy evaluation of one trained run.
struct RunMetrics {
    double avg_reward_per_completed_job = 0.0;
    double shipped_fraction = 0.0;
    double avg_bids_per_job = 0.0;
    double carrier_profit_margin = 0.0;
    double carrier_profit = 0.0;  // absolute, totaled over the validation episodes
    std::vector<double> final_theta;
    double final_sigma = 0.0;
};

// A sweep emits one row per (cell, replication).
struct SweepRow {
    std::string axis;      // axis name, e.g. "sharing_rate"
    std::string value;     // axis value, formatted
    std::uint64_t seed = 0;
    std::string status;    // "ok" or "diverged@<episode>"
    RunMetrics metrics;
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

// Trains with the given master seed, then evaluates with
// learn.validation_episodes frozen-policy episodes at
// learn.validation_horizon. Divergence is reported in the row status rather
// than thrown.
SweepRow run_cell(const ScenarioSpec& spec, const std::string& axis, const std::string& value,
                  std::uint64_t seed, const FeatureSet& features = standard_feature_set(),
                  const ArrivalProcess& arrivals = {});

// One trained policy per sharing rate. Default rates are 0%..100% in 10%
// steps.
SweepTable sharing_sweep(const ScenarioSpec& base, const std::vector<double>& rates,
                         int parallel_jobs = 1);
std::vector<double> default_sharing_rates();

// One trained policy per carrier capacity, scarce to abundant.
SweepTable capacity_sweep(const ScenarioSpec& base, const std::vector<int>& capacities,
                          int parallel_jobs = 1);
std::vector<int> default_capacity_levels();

// Fixed total-step budget split across horizons: episodes = total_steps / T.
// Validation always runs at T = 1000 so horizons compare fairly.
SweepTable horizon_sweep(const ScenarioSpec& base, const std::vector<int>& horizons,
                         long total_steps, int parallel_jobs = 1);
std::vector<int> default_horizon_levels();

// Stability grid over learning rates, bias-weight initializations and
// initial standard deviations. Diverged cells are recorded, not fatal.
SweepTable learning_rate_and_init_sweeps(const ScenarioSpec& base, int parallel_jobs = 1);

// Deterministic single-container scenarios. Jobs are due immediately
// (tau = 0), so each places exactly one bid: ship or fail.
struct ToyResult {
    std::string scenario;
    std::uint64_t seed = 0;
    double mean_accepted_bid = 0.0;
    double final_mean_bid = 0.0;  // learned Gaussian mean for the fixed job type
    double transport_cost = 0.0;  // per job
    double failure_cost = 0.0;    // per job
    RunMetrics metrics;
};

struct ToyConfig {
    int vol = 1;
    double dist = 10.0;
    int episodes = 1000;
    int horizon = 100;
};

// (a) abundance: one job per epoch, ample capacity; the winning bid should
//     settle just above transport cost.
// (b) scarcity: two identical jobs per epoch, capacity for one; the winning
//     bid should settle just below the failure cost.
std::vector<ToyResult> toy_scenarios(const ToyConfig& cfg, const std::vector<std::uint64_t>& seeds);

ToyResult toy_abundance(const ToyConfig& cfg, std::uint64_t seed);
ToyResult toy_scarcity(const ToyConfig& cfg, std::uint64_t seed);

// Replaces the bid features by [bias, carrier transport cost scaled]; the
// learned margin collapses because the bid can track cost directly.
RunMetrics carrier_cost_feature_scenario(const ScenarioSpec& base, std::uint64_t seed);

}  // namespace spotbid
