#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "spotbid/policy.hpp"
#include "spotbid/rng.hpp"
#include "spotbid/types.hpp"

namespace spotbid {

// One bid observation of a job: taken at time-till-due-date tau, with the
// features and Gaussian mean frozen at decision time.
struct TrajectoryStep {
    int tau = 0;
    FeatureVector features;
    Money bid = 0.0;
    Money mean = 0.0;
    Money reward = 0.0;
};

enum class Outcome { Shipped, Failed };

struct JobTrajectory {
    int job_id = 0;
    std::vector<TrajectoryStep> steps;  // taus strictly decreasing by 1
    Outcome outcome = Outcome::Shipped;
};

// Raw per-epoch tape entry, kept so bookkeeping can be re-derived
// independently of the trajectory structures.
struct RawStepRecord {
    int epoch = 0;
    int job_id = 0;
    int tau = 0;
    int vol = 0;
    double dist = 0.0;
    Money bid = 0.0;
    Money reward = 0.0;
    int decision = 0;
};

// Everything one episode contributes to a policy update: completed
// trajectories (in completion order), returns-to-go aligned with their
// steps, per-tau observation counts and baselines.
struct EpisodeLog {
    int tau_max = 0;
    std::vector<JobTrajectory> trajectories;
    std::vector<std::vector<Money>> returns;  // [trajectory][step]
    std::vector<int> counts;                  // indexed 0..tau_max
    std::vector<Money> baselines;             // indexed 0..tau_max; 0 where counts == 0
    std::vector<RawStepRecord> raw;           // chronological
};

// Cumulative reward from the step at each tau through completion, keyed by
// tau. Throws std::invalid_argument if the trajectory is empty, taus do not
// decrease by exactly 1, or a failed trajectory does not end at tau = 0.
std::map<int, Money> returns_to_go(const JobTrajectory& traj);

EpisodeLog finalize_episode(std::vector<JobTrajectory> trajectories, int tau_max,
                            std::vector<RawStepRecord> raw = {});

struct LearnConfig {
    int episodes = 4000;
    int horizon = 100;
    double alpha_mu = 0.1;
    double alpha_sigma = 0.01;
    double sigma0 = 10.0;
    double sigma_floor = kSigmaFloor;
    std::vector<double> theta0;  // defaults to zeros sized to the feature set
    double validation_every = 0.1;
    int validation_episodes = 10;
    int validation_horizon = 1000;
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError naming the field
};

struct ParamUpdate {
    std::vector<double> delta_theta;
    double delta_sigma = 0.0;
};

// Batch policy-gradient update from one finalized episode, using the stored
// decision-time means. Baseline-centered advantages, one term per
// (trajectory, observed step).
ParamUpdate compute_updates(const EpisodeLog& log, const PolicyParams& params,
                            const LearnConfig& cfg);

struct EpisodeMetrics {
    int completed_jobs = 0;
    int shipped_jobs = 0;
    int failed_jobs = 0;
    long bid_observations = 0;       // bids placed by completed jobs
    Money completed_reward_sum = 0;  // sum of completed-job total rewards
    Money carrier_revenue = 0;       // sum of accepted bids
    Money carrier_cost = 0;          // transport cost of shipped jobs

    double shipped_fraction() const;
    double avg_bids_per_completed_job() const;
    double avg_reward_per_completed_job() const;
    double carrier_profit_margin() const;

    EpisodeMetrics& operator+=(const EpisodeMetrics& other);
};

// Custom arrival process hook; the default draws generate_arrivals.
using ArrivalProcess = std::function<std::vector<Job>(RngStreams&, const InstanceConfig&, int&)>;

struct EpisodeResult {
    EpisodeLog log;
    EpisodeMetrics metrics;
};

// Simulates `horizon` epochs: every job in the state bids, the carrier
// selects, rewards and completions are recorded, arrivals merge in. Jobs
// still in flight at the end of the horizon are discarded.
EpisodeResult run_episode(const PolicyParams& params, const InstanceConfig& cfg, int horizon,
                          RngStreams& rng, const FeatureSet& features,
                          const ArrivalProcess& arrivals = {});

struct DivergenceError : std::runtime_error {
    int episode;
    explicit DivergenceError(int episode_index);
};

struct TraceRow {
    int episode = 0;
    double sigma = 0.0;
    std::vector<double> theta;
    double avg_reward_per_completed_job = 0.0;
    double shipped_fraction = 0.0;
    double avg_bids_per_job = 0.0;
    double carrier_profit_margin = 0.0;
    std::optional<double> validation_avg_cost;
};

struct TrainingTrace {
    std::vector<TraceRow> rows;
};

struct TrainResult {
    PolicyParams params;
    TrainingTrace trace;
};

// Validation pass with frozen parameters: pools metrics over `episodes`
// fresh episodes and reports the average cost (= -reward) per completed job.
struct ValidationResult {
    double avg_cost_per_completed_job = 0.0;
    EpisodeMetrics pooled;
};

ValidationResult validate_policy(const PolicyParams& params, const InstanceConfig& cfg,
                                 int episodes, int horizon, RngStreams& rng,
                                 const FeatureSet& features, const ArrivalProcess& arrivals = {});

// Full training loop: cfg.episodes on-policy episodes, batch update and
// sigma floor after each, periodic frozen-policy validation. Throws
// DivergenceError if any parameter turns non-finite.
TrainResult train(const LearnConfig& cfg, const InstanceConfig& inst,
                  const FeatureSet& features = standard_feature_set(),
                  const ArrivalProcess& arrivals = {});

}  // namespace spotbid
