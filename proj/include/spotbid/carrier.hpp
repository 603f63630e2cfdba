#pragma once

#include <vector>

#include "spotbid/types.hpp"

namespace spotbid {

// One bid as the carrier sees it: offered price, marginal value after
// transport cost, and the capacity the job would consume.
struct BidEntry {
    int job_id = 0;
    Money bid = 0.0;
    Money value = 0.0;  // bid - mile_cost * vol * dist
    int vol = 0;
};

struct BidSheet {
    std::vector<BidEntry> entries;
};

struct SelectionResult {
    std::vector<int> decisions;  // 0/1 per sheet entry, in entry order
    Money total_value = 0.0;
    int used_capacity = 0;
};

Money transport_cost(const Job& job, Money mile_cost);

// Builds the sheet for the current state; bids align with state.jobs.
BidSheet make_bid_sheet(const SystemState& state, const std::vector<Money>& bids,
                        Money mile_cost);

// Picks the value-maximizing feasible subset of bids (0-1 knapsack over
// integer volumes, dynamic programming). Entries with value <= 0 are never
// accepted. Ties between equal-value optima go to the selection whose sorted
// job-id list is lexicographically smallest.
SelectionResult select_jobs(const BidSheet& sheet, int capacity);

// Exhaustive-enumeration oracle with the same tie-break. Throws
// std::invalid_argument beyond 20 entries.
SelectionResult select_jobs_bruteforce(const BidSheet& sheet, int capacity);

}  // namespace spotbid
