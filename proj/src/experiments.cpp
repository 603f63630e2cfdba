#include "spotbid/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "spotbid/carrier.hpp"

namespace spotbid {

namespace {

constexpr std::uint64_t kEvalSalt = 0xe5a1ULL;

// Offset between cells so replications of neighboring cells never share a
// master seed.
constexpr std::uint64_t kCellStride = 1000003ULL;

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

RunMetrics metrics_from(const EpisodeMetrics& pooled, const PolicyParams& params) {
    RunMetrics m;
    m.avg_reward_per_completed_job = pooled.avg_reward_per_completed_job();
    m.shipped_fraction = pooled.shipped_fraction();
    m.avg_bids_per_job = pooled.avg_bids_per_completed_job();
    m.carrier_profit_margin = pooled.carrier_profit_margin();
    m.carrier_profit = pooled.carrier_revenue - pooled.carrier_cost;
    m.final_theta = params.theta;
    m.final_sigma = params.sigma;
    return m;
}

struct SweepCell {
    std::string value;
    ScenarioSpec spec;
};

SweepTable run_cells(const std::string& axis, const std::vector<SweepCell>& cells,
                     int parallel_jobs, const FeatureSet& features = standard_feature_set(),
                     const ArrivalProcess& arrivals = {}) {
    struct Task {
        std::size_t cell;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::uint64_t rep_seed : cells[c].spec.replication_seeds()) {
            tasks.push_back({c, rep_seed + kCellStride * c});
        }
    }

    SweepTable table;
    table.rows.resize(tasks.size());
    auto run_task = [&](std::size_t i) {
        const SweepCell& cell = cells[tasks[i].cell];
        table.rows[i] =
            run_cell(cell.spec, axis, cell.value, tasks[i].seed, features, arrivals);
    };

    const int jobs = std::max(1, parallel_jobs);
    if (jobs == 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const int n_workers = std::min<std::size_t>(jobs, tasks.size());
        workers.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1)) {
                    run_task(i);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }
    return table;
}

}  // namespace

std::vector<std::uint64_t> ScenarioSpec::replication_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    out.reserve(replications);
    for (int r = 0; r < replications; ++r) out.push_back(learn.seed + r);
    return out;
}

SweepRow run_cell(const ScenarioSpec& spec, const std::string& axis, const std::string& value,
                  std::uint64_t seed, const FeatureSet& features,
                  const ArrivalProcess& arrivals) {
    SweepRow row;
    row.axis = axis;
    row.value = value;
    row.seed = seed;

    LearnConfig learn = spec.learn;
    learn.seed = seed;
    try {
        const TrainResult trained = train(learn, spec.instance, features, arrivals);
        RngStreams eval_rng(mix_seed(seed, kEvalSalt));
        const ValidationResult val =
            validate_policy(trained.params, spec.instance, learn.validation_episodes,
                            learn.validation_horizon, eval_rng, features, arrivals);
        row.status = "ok";
        row.metrics = metrics_from(val.pooled, trained.params);
    } catch (const DivergenceError& e) {
        row.status = "diverged@" + std::to_string(e.episode);
        row.metrics.final_theta.assign(features.size(), std::numeric_limits<double>::quiet_NaN());
        row.metrics.final_sigma = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<double> default_sharing_rates() {
    std::vector<double> rates;
    for (int i = 0; i <= 10; ++i) rates.push_back(i / 10.0);
    return rates;
}

SweepTable sharing_sweep(const ScenarioSpec& base, const std::vector<double>& rates,
                         int parallel_jobs) {
    std::vector<SweepCell> cells;
    for (double rate : rates) {
        if (rate < 0.0 || rate > 1.0) {
            throw ConfigError("sharing sweep: rate " + format_value(rate) + " outside [0,1]");
        }
        SweepCell cell{format_value(rate), base};
        cell.spec.instance.sharing_rate = rate;
        cells.push_back(std::move(cell));
    }
    return run_cells("sharing_rate", cells, parallel_jobs);
}

std::vector<int> default_capacity_levels() {
    return {10, 20, 40, 80, 160, 320, 640};
}

SweepTable capacity_sweep(const ScenarioSpec& base, const std::vector<int>& capacities,
                          int parallel_jobs) {
    std::vector<SweepCell> cells;
    for (int capacity : capacities) {
        if (capacity < 1) {
            throw ConfigError("capacity sweep: capacity " + std::to_string(capacity) +
                              " must be >= 1");
        }
        SweepCell cell{std::to_string(capacity), base};
        cell.spec.instance.capacity = capacity;
        cells.push_back(std::move(cell));
    }
    return run_cells("capacity", cells, parallel_jobs);
}

std::vector<int> default_horizon_levels() {
    return {10, 25, 50, 100, 250, 500, 1000};
}

SweepTable horizon_sweep(const ScenarioSpec& base, const std::vector<int>& horizons,
                         long total_steps, int parallel_jobs) {
    std::vector<SweepCell> cells;
    for (int horizon : horizons) {
        if (horizon < 1) {
            throw ConfigError("horizon sweep: horizon must be >= 1");
        }
        const long episodes = total_steps / horizon;
        if (episodes < 1) {
            throw ConfigError("horizon sweep: total_steps " + std::to_string(total_steps) +
                              " too small for horizon " + std::to_string(horizon));
        }
        SweepCell cell{std::to_string(horizon), base};
        cell.spec.learn.horizon = horizon;
        cell.spec.learn.episodes = static_cast<int>(episodes);
        cell.spec.learn.validation_horizon = 1000;  // fixed so horizons compare fairly
        cells.push_back(std::move(cell));
    }
    return run_cells("horizon", cells, parallel_jobs);
}

SweepTable learning_rate_and_init_sweeps(const ScenarioSpec& base, int parallel_jobs) {
    const std::vector<double> rates = {0.0001, 0.001, 0.01, 0.1};
    const std::vector<double> sigma0s = {0.01, 0.1, 1.0, 10.0, 25.0};

    std::vector<SweepCell> rate_cells;
    for (double a_mu : rates) {
        for (double a_sigma : rates) {
            SweepCell cell{"alpha_mu=" + format_value(a_mu) +
                               "|alpha_sigma=" + format_value(a_sigma),
                           base};
            cell.spec.learn.alpha_mu = a_mu;
            cell.spec.learn.alpha_sigma = a_sigma;
            rate_cells.push_back(std::move(cell));
        }
    }
    SweepTable table = run_cells("learning_rates", rate_cells, parallel_jobs);

    std::vector<SweepCell> bias_cells;
    for (int bias = -50; bias <= 50; bias += 10) {
        SweepCell cell{std::to_string(bias), base};
        std::vector<double> theta0(standard_feature_names().size(), 0.0);
        theta0[0] = bias;
        cell.spec.learn.theta0 = std::move(theta0);
        bias_cells.push_back(std::move(cell));
    }
    SweepTable bias_table = run_cells("bias_init", bias_cells, parallel_jobs);
    table.rows.insert(table.rows.end(), bias_table.rows.begin(), bias_table.rows.end());

    std::vector<SweepCell> sigma_cells;
    for (double sigma0 : sigma0s) {
        SweepCell cell{format_value(sigma0), base};
        cell.spec.learn.sigma0 = sigma0;
        sigma_cells.push_back(std::move(cell));
    }
    SweepTable sigma_table = run_cells("sigma0", sigma_cells, parallel_jobs);
    table.rows.insert(table.rows.end(), sigma_table.rows.begin(), sigma_table.rows.end());
    return table;
}

namespace {

ArrivalProcess fixed_jobs_per_epoch(int jobs_per_epoch, int vol, double dist) {
    return [jobs_per_epoch, vol, dist](RngStreams&, const InstanceConfig&, int& next_id) {
        std::vector<Job> batch;
        batch.reserve(jobs_per_epoch);
        for (int i = 0; i < jobs_per_epoch; ++i) {
            Job job;
            job.id = next_id++;
            job.tau = 0;  // due immediately: one bid, ship or fail
            job.original_tau = 0;
            job.vol = vol;
            job.dist = dist;
            job.shares_info = false;
            batch.push_back(job);
        }
        return batch;
    };
}

ToyResult run_toy(const std::string& name, const ToyConfig& cfg, std::uint64_t seed,
                  int jobs_per_epoch, int capacity) {
    InstanceConfig inst;
    inst.max_arrivals = jobs_per_epoch;
    inst.tau_max = 1;
    inst.dist_min = cfg.dist;
    inst.dist_max = cfg.dist;
    inst.vol_max = cfg.vol;
    inst.capacity = capacity;

    LearnConfig learn;
    learn.episodes = cfg.episodes;
    learn.horizon = cfg.horizon;
    learn.seed = seed;
    // Identical jobs make the advantage scale shrink with sigma, so a low
    // floor is safe here. It must stay wide enough that the failure-penalty
    // gradient engages before the mean can step across the acceptance
    // threshold in a single update; far below 4*sigma per alpha_mu step the
    // policy can land in the all-fail region where every gradient is zero.
    learn.sigma_floor = 0.1;

    Job prototype;
    prototype.vol = cfg.vol;
    prototype.dist = cfg.dist;

    const ArrivalProcess arrivals = fixed_jobs_per_epoch(jobs_per_epoch, cfg.vol, cfg.dist);
    const FeatureSet features = standard_feature_set();
    const TrainResult trained = train(learn, inst, features, arrivals);

    RngStreams eval_rng(mix_seed(seed, kEvalSalt));
    const ValidationResult val =
        validate_policy(trained.params, inst, learn.validation_episodes,
                        learn.validation_horizon, eval_rng, features, arrivals);

    ToyResult result;
    result.scenario = name;
    result.seed = seed;
    result.mean_accepted_bid = val.pooled.shipped_jobs > 0
                                   ? val.pooled.carrier_revenue / val.pooled.shipped_jobs
                                   : std::numeric_limits<double>::quiet_NaN();
    SystemState lone_state;
    prototype.id = 0;
    lone_state.jobs = {prototype};
    result.final_mean_bid =
        mean_bid(features.extract(prototype, lone_state, inst), trained.params);
    result.transport_cost = transport_cost(prototype, inst.mile_cost);
    result.failure_cost = inst.penalty_cost * cfg.vol;
    result.metrics = metrics_from(val.pooled, trained.params);
    return result;
}

}  // namespace

ToyResult toy_abundance(const ToyConfig& cfg, std::uint64_t seed) {
    // Capacity covers every arrival, so any positive-value bid ships.
    return run_toy("abundance", cfg, seed, 1, std::max(10 * cfg.vol, 1));
}

ToyResult toy_scarcity(const ToyConfig& cfg, std::uint64_t seed) {
    // Two identical jobs compete for capacity that fits exactly one.
    return run_toy("scarcity", cfg, seed, 2, cfg.vol);
}

std::vector<ToyResult> toy_scenarios(const ToyConfig& cfg,
                                     const std::vector<std::uint64_t>& seeds) {
    std::vector<ToyResult> results;
    for (std::uint64_t seed : seeds) {
        results.push_back(toy_abundance(cfg, seed));
        results.push_back(toy_scarcity(cfg, seed));
    }
    return results;
}

RunMetrics carrier_cost_feature_scenario(const ScenarioSpec& base, std::uint64_t seed) {
    LearnConfig learn = base.learn;
    learn.seed = seed;
    learn.theta0.clear();  // re-sized to the two-feature parametrization

    const FeatureSet features = cost_feature_set();
    const TrainResult trained = train(learn, base.instance, features);
    RngStreams eval_rng(mix_seed(seed, kEvalSalt));
    const ValidationResult val =
        validate_policy(trained.params, base.instance, learn.validation_episodes,
                        learn.validation_horizon, eval_rng, features);
    return metrics_from(val.pooled, trained.params);
}

}  // namespace spotbid
