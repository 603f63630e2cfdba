#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spotbid {

using Money = double;

// A smart container waiting for transport. One bidding agent per job.
struct Job {
    int id = 0;
    int tau = 0;            // epochs till due date
    double dist = 0.0;      // miles to destination
    int vol = 0;            // capacity units
    int original_tau = 0;   // due date at arrival, immutable
    bool shares_info = false;
};

// All jobs present at one decision epoch.
struct SystemState {
    int epoch = 0;
    std::vector<Job> jobs;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Market instance parameters. Defaults are the base instance.
struct InstanceConfig {
    int max_arrivals = 10;
    int tau_max = 5;
    double dist_min = 10.0;
    double dist_max = 100.0;
    int vol_max = 10;
    Money hold_cost = 1.0;     // per volume unit per epoch
    Money penalty_cost = 10.0; // per volume unit on failure
    Money mile_cost = 0.1;     // carrier cost per volume-mile
    int capacity = 80;
    double sharing_rate = 0.0;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

}  // namespace spotbid
