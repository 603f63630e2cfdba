#include "spotbid/learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "spotbid/carrier.hpp"
#include "spotbid/market.hpp"

namespace spotbid {

void LearnConfig::validate() const {
    if (episodes < 1) throw ConfigError("learn.episodes: must be >= 1");
    if (horizon < 1) throw ConfigError("learn.horizon: must be >= 1");
    if (!(alpha_mu > 0.0 && alpha_mu < 1.0))
        throw ConfigError("learn.alpha_mu: must be in (0,1)");
    if (!(alpha_sigma > 0.0 && alpha_sigma < 1.0))
        throw ConfigError("learn.alpha_sigma: must be in (0,1)");
    if (!(sigma0 > 0.0)) throw ConfigError("learn.sigma0: must be > 0");
    if (!(sigma_floor > 0.0)) throw ConfigError("learn.sigma_floor: must be > 0");
    if (!(validation_every > 0.0 && validation_every <= 1.0))
        throw ConfigError("learn.validation_every: must be in (0,1]");
    if (validation_episodes < 1) throw ConfigError("learn.validation_episodes: must be >= 1");
    if (validation_horizon < 1) throw ConfigError("learn.validation_horizon: must be >= 1");
}

DivergenceError::DivergenceError(int episode_index)
    : std::runtime_error("training diverged at episode " + std::to_string(episode_index) +
                         ": non-finite policy parameters"),
      episode(episode_index) {}

std::map<int, Money> returns_to_go(const JobTrajectory& traj) {
    if (traj.steps.empty()) {
        throw std::invalid_argument("returns_to_go: trajectory has no steps");
    }
    for (std::size_t i = 1; i < traj.steps.size(); ++i) {
        if (traj.steps[i].tau != traj.steps[i - 1].tau - 1) {
            throw std::invalid_argument("returns_to_go: step taus must decrease by exactly 1");
        }
    }
    if (traj.outcome == Outcome::Failed && traj.steps.back().tau != 0) {
        throw std::invalid_argument("returns_to_go: failed trajectory must end at tau = 0");
    }

    // Accumulate from the final step backwards so each v(t) is the total
    // reward from the step at tau = t through completion.
    std::map<int, Money> v;
    Money acc = 0.0;
    for (auto it = traj.steps.rbegin(); it != traj.steps.rend(); ++it) {
        acc = it->reward + acc;
        v[it->tau] = acc;
    }
    return v;
}

EpisodeLog finalize_episode(std::vector<JobTrajectory> trajectories, int tau_max,
                            std::vector<RawStepRecord> raw) {
    EpisodeLog log;
    log.tau_max = tau_max;
    log.trajectories = std::move(trajectories);
    log.raw = std::move(raw);
    log.counts.assign(tau_max + 1, 0);
    log.baselines.assign(tau_max + 1, 0.0);
    log.returns.reserve(log.trajectories.size());

    std::vector<Money> sums(tau_max + 1, 0.0);
    for (const JobTrajectory& traj : log.trajectories) {
        const std::map<int, Money> v = returns_to_go(traj);
        std::vector<Money> per_step;
        per_step.reserve(traj.steps.size());
        for (const TrajectoryStep& step : traj.steps) {
            if (step.tau < 0 || step.tau > tau_max) {
                throw std::invalid_argument("finalize_episode: step tau outside [0, tau_max]");
            }
            const Money ret = v.at(step.tau);
            per_step.push_back(ret);
            log.counts[step.tau] += 1;
            sums[step.tau] += ret;
        }
        log.returns.push_back(std::move(per_step));
    }
    for (int t = 0; t <= tau_max; ++t) {
        if (log.counts[t] > 0) log.baselines[t] = sums[t] / log.counts[t];
    }
    return log;
}

ParamUpdate compute_updates(const EpisodeLog& log, const PolicyParams& params,
                            const LearnConfig& cfg) {
    ParamUpdate update;
    update.delta_theta.assign(params.theta.size(), 0.0);
    const double sigma = params.sigma;
    const double sigma2 = sigma * sigma;
    const double sigma3 = sigma2 * sigma;

    for (std::size_t j = 0; j < log.trajectories.size(); ++j) {
        const JobTrajectory& traj = log.trajectories[j];
        for (std::size_t s = 0; s < traj.steps.size(); ++s) {
            const TrajectoryStep& step = traj.steps[s];
            if (step.features.size() != params.theta.size()) {
                throw std::invalid_argument("compute_updates: feature/weight length mismatch");
            }
            const double advantage = log.returns[j][s] - log.baselines[step.tau];
            const double weight = advantage / log.counts[step.tau];
            const double dev = step.bid - step.mean;
            const double mu_scale = cfg.alpha_mu * weight * dev / sigma2;
            for (std::size_t k = 0; k < step.features.size(); ++k) {
                update.delta_theta[k] += mu_scale * step.features[k];
            }
            update.delta_sigma += cfg.alpha_sigma * weight * (dev * dev - sigma2) / sigma3;
        }
    }
    return update;
}

double EpisodeMetrics::shipped_fraction() const {
    return completed_jobs > 0 ? static_cast<double>(shipped_jobs) / completed_jobs : 0.0;
}

double EpisodeMetrics::avg_bids_per_completed_job() const {
    return completed_jobs > 0 ? static_cast<double>(bid_observations) / completed_jobs : 0.0;
}

double EpisodeMetrics::avg_reward_per_completed_job() const {
    return completed_jobs > 0 ? completed_reward_sum / completed_jobs : 0.0;
}

double EpisodeMetrics::carrier_profit_margin() const {
    return carrier_revenue > 0.0 ? (carrier_revenue - carrier_cost) / carrier_revenue : 0.0;
}

EpisodeMetrics& EpisodeMetrics::operator+=(const EpisodeMetrics& other) {
    completed_jobs += other.completed_jobs;
    shipped_jobs += other.shipped_jobs;
    failed_jobs += other.failed_jobs;
    bid_observations += other.bid_observations;
    completed_reward_sum += other.completed_reward_sum;
    carrier_revenue += other.carrier_revenue;
    carrier_cost += other.carrier_cost;
    return *this;
}

namespace {

std::vector<Job> standard_arrivals(RngStreams& rng, const InstanceConfig& cfg, int& next_id) {
    return generate_arrivals(rng, cfg, next_id);
}

}  // namespace

EpisodeResult run_episode(const PolicyParams& params, const InstanceConfig& cfg, int horizon,
                          RngStreams& rng, const FeatureSet& features,
                          const ArrivalProcess& arrivals) {
    const ArrivalProcess& generate = arrivals ? arrivals : ArrivalProcess(&standard_arrivals);

    int next_id = 0;
    SystemState state;
    state.jobs = generate(rng, cfg, next_id);

    std::vector<JobTrajectory> completed;
    std::vector<RawStepRecord> raw;
    std::unordered_map<int, JobTrajectory> open;
    EpisodeMetrics metrics;

    for (int epoch = 0; epoch < horizon; ++epoch) {
        const std::size_t n = state.jobs.size();
        std::vector<FeatureVector> phis(n);
        std::vector<Money> mus(n);
        std::vector<Money> bids(n);
        for (std::size_t i = 0; i < n; ++i) {
            phis[i] = features.extract(state.jobs[i], state, cfg);
            mus[i] = mean_bid(phis[i], params);
            bids[i] = sample_bid(rng.bids, mus[i], params.sigma);
        }

        const BidSheet sheet = make_bid_sheet(state, bids, cfg.mile_cost);
        const SelectionResult selection = select_jobs(sheet, cfg.capacity);

        for (std::size_t i = 0; i < n; ++i) {
            const Job& job = state.jobs[i];
            const bool accepted = selection.decisions[i] != 0;
            const Money reward = direct_reward(job, accepted, bids[i], cfg);

            JobTrajectory& traj = open[job.id];
            if (traj.steps.empty()) traj.job_id = job.id;
            traj.steps.push_back({job.tau, std::move(phis[i]), bids[i], mus[i], reward});
            raw.push_back({epoch, job.id, job.tau, job.vol, job.dist, bids[i], reward,
                           selection.decisions[i]});

            if (accepted) {
                metrics.carrier_revenue += bids[i];
                metrics.carrier_cost += transport_cost(job, cfg.mile_cost);
            }
            if (accepted || job.tau == 0) {
                traj.outcome = accepted ? Outcome::Shipped : Outcome::Failed;
                metrics.completed_jobs += 1;
                (accepted ? metrics.shipped_jobs : metrics.failed_jobs) += 1;
                metrics.bid_observations += static_cast<long>(traj.steps.size());
                Money total = 0.0;
                for (const TrajectoryStep& step : traj.steps) total += step.reward;
                metrics.completed_reward_sum += total;
                completed.push_back(std::move(traj));
                open.erase(job.id);
            }
        }

        const std::vector<Job> incoming = generate(rng, cfg, next_id);
        state = transition(state, incoming, selection.decisions);
    }

    // Jobs still in flight when the horizon ends contribute no observations.
    EpisodeResult result;
    result.log = finalize_episode(std::move(completed), cfg.tau_max, std::move(raw));
    result.metrics = metrics;
    return result;
}

ValidationResult validate_policy(const PolicyParams& params, const InstanceConfig& cfg,
                                 int episodes, int horizon, RngStreams& rng,
                                 const FeatureSet& features, const ArrivalProcess& arrivals) {
    ValidationResult result;
    for (int e = 0; e < episodes; ++e) {
        result.pooled += run_episode(params, cfg, horizon, rng, features, arrivals).metrics;
    }
    result.avg_cost_per_completed_job = -result.pooled.avg_reward_per_completed_job();
    return result;
}

TrainResult train(const LearnConfig& cfg, const InstanceConfig& inst, const FeatureSet& features,
                  const ArrivalProcess& arrivals) {
    cfg.validate();
    inst.validate();

    PolicyParams params;
    params.theta = cfg.theta0.empty() ? std::vector<double>(features.size(), 0.0) : cfg.theta0;
    if (params.theta.size() != features.size()) {
        throw ConfigError("learn.theta0: length " + std::to_string(params.theta.size()) +
                          " does not match feature count " + std::to_string(features.size()));
    }
    params.sigma = cfg.sigma0;

    RngStreams episode_rng(cfg.seed);
    const int interval =
        std::max(1, static_cast<int>(std::llround(cfg.validation_every * cfg.episodes)));

    TrainResult result;
    result.trace.rows.reserve(cfg.episodes);
    for (int n = 0; n < cfg.episodes; ++n) {
        const EpisodeResult episode = run_episode(params, inst, cfg.horizon, episode_rng,
                                                  features, arrivals);
        const ParamUpdate update = compute_updates(episode.log, params, cfg);
        for (std::size_t k = 0; k < params.theta.size(); ++k) {
            params.theta[k] += update.delta_theta[k];
        }
        params.sigma += update.delta_sigma;

        bool finite = std::isfinite(params.sigma);
        for (double w : params.theta) finite = finite && std::isfinite(w);
        if (!finite) throw DivergenceError(n);
        params.sigma = std::max(params.sigma, cfg.sigma_floor);

        TraceRow row;
        row.episode = n;
        row.sigma = params.sigma;
        row.theta = params.theta;
        row.avg_reward_per_completed_job = episode.metrics.avg_reward_per_completed_job();
        row.shipped_fraction = episode.metrics.shipped_fraction();
        row.avg_bids_per_job = episode.metrics.avg_bids_per_completed_job();
        row.carrier_profit_margin = episode.metrics.carrier_profit_margin();

        if ((n + 1) % interval == 0) {
            RngStreams validation_rng(mix_seed(cfg.seed, 0x76616cULL + n));
            const ValidationResult val =
                validate_policy(params, inst, cfg.validation_episodes, cfg.validation_horizon,
                                validation_rng, features, arrivals);
            row.validation_avg_cost = val.avg_cost_per_completed_job;
        }
        result.trace.rows.push_back(std::move(row));
    }
    result.params = std::move(params);
    return result;
}

}  // namespace spotbid
