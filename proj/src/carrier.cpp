#include "spotbid/carrier.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spotbid {

namespace {

// Entry indices in ascending job-id order; the tie-break operates on ids.
std::vector<int> id_order(const BidSheet& sheet) {
    std::vector<int> order(sheet.entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return sheet.entries[a].job_id < sheet.entries[b].job_id;
    });
    return order;
}

// Accepted values summed in ascending job-id order, so the DP route and the
// enumeration route report bitwise-identical totals for identical selections.
Money selection_total(const BidSheet& sheet, const std::vector<int>& decisions,
                      const std::vector<int>& order) {
    Money total = 0.0;
    for (int idx : order) {
        if (decisions[idx]) total += sheet.entries[idx].value;
    }
    return total;
}

void check_entries(const BidSheet& sheet, int capacity, const char* who) {
    if (capacity < 0) throw std::invalid_argument(std::string(who) + ": capacity must be >= 0");
    for (const BidEntry& e : sheet.entries) {
        if (e.vol < 1) throw std::invalid_argument(std::string(who) + ": entry volume must be >= 1");
    }
}

}  // namespace

Money transport_cost(const Job& job, Money mile_cost) {
    return mile_cost * job.vol * job.dist;
}

BidSheet make_bid_sheet(const SystemState& state, const std::vector<Money>& bids,
                        Money mile_cost) {
    if (bids.size() != state.jobs.size()) {
        throw std::invalid_argument("make_bid_sheet: one bid per job required");
    }
    BidSheet sheet;
    sheet.entries.reserve(state.jobs.size());
    for (std::size_t i = 0; i < state.jobs.size(); ++i) {
        const Job& job = state.jobs[i];
        sheet.entries.push_back(
            {job.id, bids[i], bids[i] - transport_cost(job, mile_cost), job.vol});
    }
    return sheet;
}

SelectionResult select_jobs(const BidSheet& sheet, int capacity) {
    check_entries(sheet, capacity, "select_jobs");
    const std::vector<int> order = id_order(sheet);
    const int n = static_cast<int>(sheet.entries.size());

    // best[i][c]: max attainable value over entries order[i..n) with c units
    // of capacity left. Entries with value <= 0 never enter.
    std::vector<Money> best(static_cast<std::size_t>(n + 1) * (capacity + 1), 0.0);
    auto cell = [&](int i, int c) -> Money& {
        return best[static_cast<std::size_t>(i) * (capacity + 1) + c];
    };
    for (int i = n - 1; i >= 0; --i) {
        const BidEntry& e = sheet.entries[order[i]];
        const bool eligible = e.value > 0.0;
        for (int c = 0; c <= capacity; ++c) {
            Money v = cell(i + 1, c);
            if (eligible && e.vol <= c) {
                v = std::max(v, e.value + cell(i + 1, c - e.vol));
            }
            cell(i, c) = v;
        }
    }

    // Walk in ascending id order, taking an entry whenever doing so still
    // attains the optimum: yields the lexicographically smallest optimal
    // id set.
    SelectionResult result;
    result.decisions.assign(n, 0);
    int c = capacity;
    for (int i = 0; i < n; ++i) {
        const BidEntry& e = sheet.entries[order[i]];
        if (e.value > 0.0 && e.vol <= c && e.value + cell(i + 1, c - e.vol) >= cell(i + 1, c)) {
            result.decisions[order[i]] = 1;
            result.used_capacity += e.vol;
            c -= e.vol;
        }
    }
    result.total_value = selection_total(sheet, result.decisions, order);
    return result;
}

SelectionResult select_jobs_bruteforce(const BidSheet& sheet, int capacity) {
    if (sheet.entries.size() > 20) {
        throw std::invalid_argument("select_jobs_bruteforce: enumeration bound is 20 entries");
    }
    check_entries(sheet, capacity, "select_jobs_bruteforce");
    const std::vector<int> order = id_order(sheet);

    std::vector<int> candidates;  // positive-value entries, ascending id
    for (int idx : order) {
        if (sheet.entries[idx].value > 0.0) candidates.push_back(idx);
    }
    const int m = static_cast<int>(candidates.size());

    Money best_value = 0.0;
    std::uint32_t best_mask = 0;
    std::vector<int> best_ids;
    std::vector<int> ids;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        int vol = 0;
        Money value = 0.0;
        ids.clear();
        for (int b = 0; b < m; ++b) {
            if (mask & (1u << b)) {
                const BidEntry& e = sheet.entries[candidates[b]];
                vol += e.vol;
                value += e.value;
                ids.push_back(e.job_id);
            }
        }
        if (vol > capacity) continue;
        const bool better =
            value > best_value ||
            (value == best_value &&
             (best_mask == 0 || std::lexicographical_compare(ids.begin(), ids.end(),
                                                             best_ids.begin(), best_ids.end())));
        if (better) {
            best_value = value;
            best_mask = mask;
            best_ids = ids;
        }
    }

    SelectionResult result;
    result.decisions.assign(sheet.entries.size(), 0);
    for (int b = 0; b < m; ++b) {
        if (best_mask & (1u << b)) {
            result.decisions[candidates[b]] = 1;
            result.used_capacity += sheet.entries[candidates[b]].vol;
        }
    }
    result.total_value = selection_total(sheet, result.decisions, order);
    return result;
}

}  // namespace spotbid
