#pragma once

// Naive bookkeeping recomputed straight from the raw episode tape: groups
// records by job, detects completions, sums rewards step-to-end, and
// averages per tau bucket. Deliberately shares no code with
// finalize_episode so the two can check each other.

#include <map>
#include <vector>

#include "spotbid/learner.hpp"

namespace spotbid::test_support {

struct NaiveBooks {
    std::vector<int> counts;
    std::vector<Money> baselines;
    std::map<int, std::map<int, Money>> returns_by_job;
};

inline NaiveBooks naive_books(const std::vector<RawStepRecord>& raw, int tau_max) {
    std::map<int, std::vector<RawStepRecord>> by_job;
    for (const RawStepRecord& rec : raw) by_job[rec.job_id].push_back(rec);

    NaiveBooks books;
    books.counts.assign(tau_max + 1, 0);
    books.baselines.assign(tau_max + 1, 0.0);
    std::vector<Money> sums(tau_max + 1, 0.0);

    // completion order = order of completing records on the tape
    for (const RawStepRecord& rec : raw) {
        if (!(rec.decision == 1 || rec.tau == 0)) continue;
        const auto& records = by_job.at(rec.job_id);
        Money acc = 0.0;
        std::map<int, Money> rets;
        for (auto it = records.rbegin(); it != records.rend(); ++it) {
            acc = it->reward + acc;
            rets[it->tau] = acc;
        }
        for (const RawStepRecord& r : records) {
            books.counts[r.tau] += 1;
            sums[r.tau] += rets.at(r.tau);
        }
        books.returns_by_job[rec.job_id] = std::move(rets);
    }
    for (int t = 0; t <= tau_max; ++t) {
        if (books.counts[t] > 0) books.baselines[t] = sums[t] / books.counts[t];
    }
    return books;
}

}  // namespace spotbid::test_support
