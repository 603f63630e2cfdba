#pragma once

#include <vector>

#include "spotbid/rng.hpp"
#include "spotbid/types.hpp"

namespace spotbid {

// Draws one batch of job arrivals: the batch size is uniform on
// [0, max_arrivals], due dates uniform on [1, tau_max], distance uniform on
// [dist_min, dist_max), volume uniform on [1, vol_max]. Sharing flags come
// from the dedicated sharing stream so demand stays fixed when the sharing
// rate changes. Ids are assigned consecutively from next_id.
std::vector<Job> generate_arrivals(RngStreams& rng, const InstanceConfig& cfg, int& next_id);

// Per-epoch reward of one job: -bid when shipped, holding cost while
// waiting, penalty when it fails at tau = 0.
Money direct_reward(const Job& job, bool accepted, Money bid, const InstanceConfig& cfg);

// Advances the state one epoch: shipped jobs and failed jobs (unshipped at
// tau = 0) leave, survivors age by one epoch, arrivals merge in. decisions
// must align with state.jobs; throws std::invalid_argument otherwise.
SystemState transition(const SystemState& state, const std::vector<Job>& arrivals,
                       const std::vector<int>& decisions);

}  // namespace spotbid
