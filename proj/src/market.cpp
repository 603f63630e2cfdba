#include "spotbid/market.hpp"

#include <stdexcept>
#include <string>

namespace spotbid {

void InstanceConfig::validate() const {
    if (max_arrivals < 0) throw ConfigError("instance.max_arrivals: must be >= 0");
    if (tau_max < 1) throw ConfigError("instance.tau_max: must be >= 1");
    if (dist_min <= 0.0) throw ConfigError("instance.dist_min: must be > 0");
    if (dist_max < dist_min) throw ConfigError("instance.dist_max: must be >= dist_min");
    if (vol_max < 1) throw ConfigError("instance.vol_max: must be >= 1");
    if (hold_cost < 0.0) throw ConfigError("instance.hold_cost: must be >= 0");
    if (penalty_cost < 0.0) throw ConfigError("instance.penalty_cost: must be >= 0");
    if (mile_cost < 0.0) throw ConfigError("instance.mile_cost: must be >= 0");
    if (capacity < 1) throw ConfigError("instance.capacity: must be >= 1");
    if (sharing_rate < 0.0 || sharing_rate > 1.0)
        throw ConfigError("instance.sharing_rate: must be in [0,1]");
}

std::vector<Job> generate_arrivals(RngStreams& rng, const InstanceConfig& cfg, int& next_id) {
    std::vector<Job> batch;
    if (cfg.max_arrivals == 0) return batch;
    const int count = rng.arrivals.uniform_int(0, cfg.max_arrivals);
    batch.reserve(count);
    for (int i = 0; i < count; ++i) {
        Job job;
        job.id = next_id++;
        job.original_tau = rng.arrivals.uniform_int(1, cfg.tau_max);
        job.tau = job.original_tau;
        job.dist = rng.arrivals.uniform_real(cfg.dist_min, cfg.dist_max);
        job.vol = rng.arrivals.uniform_int(1, cfg.vol_max);
        job.shares_info = rng.sharing.bernoulli(cfg.sharing_rate);
        batch.push_back(job);
    }
    return batch;
}

Money direct_reward(const Job& job, bool accepted, Money bid, const InstanceConfig& cfg) {
    if (accepted) return -bid;
    if (job.tau > 0) return -cfg.hold_cost * job.vol;
    return -cfg.penalty_cost * job.vol;
}

SystemState transition(const SystemState& state, const std::vector<Job>& arrivals,
                       const std::vector<int>& decisions) {
    if (decisions.size() != state.jobs.size()) {
        throw std::invalid_argument("transition: decision vector length " +
                                    std::to_string(decisions.size()) + " does not match job count " +
                                    std::to_string(state.jobs.size()));
    }
    SystemState next;
    next.epoch = state.epoch + 1;
    next.jobs.reserve(state.jobs.size() + arrivals.size());
    for (std::size_t i = 0; i < state.jobs.size(); ++i) {
        const Job& job = state.jobs[i];
        if (decisions[i] != 0) continue;  // shipped
        if (job.tau == 0) continue;       // failed, leaves with the penalty already charged
        Job survivor = job;
        survivor.tau -= 1;
        next.jobs.push_back(survivor);
    }
    next.jobs.insert(next.jobs.end(), arrivals.begin(), arrivals.end());
    return next;
}

}  // namespace spotbid
