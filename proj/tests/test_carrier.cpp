#include <doctest.h>

#include <algorithm>

#include "spotbid/carrier.hpp"
#include "spotbid/rng.hpp"

using namespace spotbid;

namespace {

BidEntry entry(int id, Money bid, Money cost, int vol) {
    return {id, bid, bid - cost, vol};
}

BidSheet random_sheet(Rng& rng, int max_entries) {
    BidSheet sheet;
    const int n = rng.uniform_int(0, max_entries);
    for (int i = 0; i < n; ++i) {
        const int vol = rng.uniform_int(1, 10);
        const double dist = rng.uniform_real(10.0, 100.0);
        const double bid = rng.uniform_real(-20.0, 120.0);
        sheet.entries.push_back({i, bid, bid - 0.1 * vol * dist, vol});
    }
    return sheet;
}

bool feasible(const BidSheet& sheet, const SelectionResult& sel, int capacity) {
    int used = 0;
    Money value = 0.0;
    for (std::size_t i = 0; i < sheet.entries.size(); ++i) {
        if (sel.decisions[i]) {
            if (sheet.entries[i].value <= 0.0) return false;
            used += sheet.entries[i].vol;
            value += sheet.entries[i].value;
        }
    }
    (void)value;
    return used <= capacity && used == sel.used_capacity;
}

}  // namespace

TEST_CASE("transport_cost is mile rate times volume times distance") {
    Job job;
    job.vol = 10;
    job.dist = 100.0;
    CHECK(transport_cost(job, 0.1) == doctest::Approx(100.0));
    job.vol = 1;
    job.dist = 10.0;
    CHECK(transport_cost(job, 0.1) == doctest::Approx(1.0));
    job.vol = 5;
    job.dist = 40.0;
    CHECK(transport_cost(job, 0.1) == doctest::Approx(20.0));
}

TEST_CASE("select_jobs accepts a lone positive bid when capacity suffices") {
    BidSheet sheet;
    sheet.entries = {entry(1, 50.0, 20.0, 5)};
    const SelectionResult sel = select_jobs(sheet, 80);
    CHECK(sel.decisions == std::vector<int>{1});
    CHECK(sel.total_value == doctest::Approx(30.0));
    CHECK(sel.used_capacity == 5);
}

TEST_CASE("select_jobs rejects negative-value bids") {
    BidSheet sheet;
    sheet.entries = {entry(1, 5.0, 10.0, 2)};
    const SelectionResult sel = select_jobs(sheet, 80);
    CHECK(sel.decisions == std::vector<int>{0});
    CHECK(sel.total_value == 0.0);
}

TEST_CASE("select_jobs rejects zero-value bids") {
    BidSheet sheet;
    sheet.entries = {entry(1, 10.0, 10.0, 2)};
    CHECK(select_jobs(sheet, 80).decisions == std::vector<int>{0});
}

// (value, vol) = (5,50), (4,40), (3,40) with capacity 80: the best subset is
// the last two. Expected value frozen from enumerating all 8 subsets.
TEST_CASE("select_jobs picks the value-maximizing subset, not the greedy one") {
    BidSheet sheet;
    sheet.entries = {entry(1, 5.0, 0.0, 50), entry(2, 4.0, 0.0, 40), entry(3, 3.0, 0.0, 40)};
    const SelectionResult sel = select_jobs(sheet, 80);
    CHECK(sel.decisions == std::vector<int>{0, 1, 1});
    CHECK(sel.total_value == doctest::Approx(7.0));
    CHECK(sel.used_capacity == 80);

    const SelectionResult oracle = select_jobs_bruteforce(sheet, 80);
    CHECK(oracle.total_value == sel.total_value);
    CHECK(oracle.decisions == sel.decisions);
}

TEST_CASE("select_jobs: zero capacity rejects everything") {
    BidSheet sheet;
    sheet.entries = {entry(1, 50.0, 20.0, 5), entry(2, 30.0, 5.0, 2)};
    const SelectionResult sel = select_jobs(sheet, 0);
    CHECK(sel.total_value == 0.0);
    CHECK(sel.used_capacity == 0);
}

TEST_CASE("select_jobs_bruteforce edge cases") {
    SUBCASE("empty sheet") {
        const SelectionResult sel = select_jobs_bruteforce(BidSheet{}, 80);
        CHECK(sel.total_value == 0.0);
        CHECK(sel.decisions.empty());
    }
    SUBCASE("all values non-positive accepts nothing") {
        BidSheet sheet;
        sheet.entries = {entry(1, 5.0, 10.0, 2), entry(2, 0.0, 0.0, 3), entry(3, -4.0, 1.0, 1)};
        const SelectionResult sel = select_jobs_bruteforce(sheet, 80);
        CHECK(sel.total_value == 0.0);
        CHECK(sel.decisions == std::vector<int>{0, 0, 0});
    }
    SUBCASE("rejects sheets beyond the enumeration bound") {
        BidSheet sheet;
        for (int i = 0; i < 21; ++i) sheet.entries.push_back(entry(i, 10.0, 1.0, 1));
        CHECK_THROWS_AS(select_jobs_bruteforce(sheet, 80), std::invalid_argument);
    }
}

TEST_CASE("select_jobs ties break toward the lexicographically smallest id set") {
    BidSheet sheet;
    // identical value and volume; only one fits
    sheet.entries = {entry(7, 10.0, 5.0, 4), entry(3, 10.0, 5.0, 4)};
    const SelectionResult sel = select_jobs(sheet, 4);
    CHECK(sel.decisions == std::vector<int>{0, 1});  // id 3 wins
    const SelectionResult oracle = select_jobs_bruteforce(sheet, 4);
    CHECK(oracle.decisions == sel.decisions);
}

TEST_CASE("select_jobs matches brute force on random sheets") {
    Rng rng(31415);
    for (int round = 0; round < 1200; ++round) {
        const BidSheet sheet = random_sheet(rng, 12);
        const int capacity = rng.uniform_int(0, 100);
        const SelectionResult fast = select_jobs(sheet, capacity);
        const SelectionResult oracle = select_jobs_bruteforce(sheet, capacity);
        REQUIRE(fast.total_value == oracle.total_value);
        REQUIRE(fast.decisions == oracle.decisions);
        REQUIRE(feasible(sheet, fast, capacity));
        REQUIRE(feasible(sheet, oracle, capacity));
    }
}

TEST_CASE("select_jobs total value is monotone in capacity") {
    Rng rng(999);
    for (int round = 0; round < 200; ++round) {
        const BidSheet sheet = random_sheet(rng, 10);
        Money prev = 0.0;
        for (int capacity : {0, 10, 20, 40, 80, 160}) {
            const Money value = select_jobs(sheet, capacity).total_value;
            CHECK(value >= prev);
            prev = value;
        }
    }
}

TEST_CASE("raising an accepted job's bid keeps it accepted") {
    Rng rng(2718);
    int checked = 0;
    for (int round = 0; round < 400; ++round) {
        BidSheet sheet = random_sheet(rng, 10);
        if (sheet.entries.empty()) continue;
        const int capacity = rng.uniform_int(1, 80);
        const SelectionResult before = select_jobs(sheet, capacity);
        const int pick = rng.uniform_int(0, static_cast<int>(sheet.entries.size()) - 1);
        if (!before.decisions[pick]) continue;
        const double eps = rng.uniform_real(0.001, 30.0);
        sheet.entries[pick].bid += eps;
        sheet.entries[pick].value += eps;
        const SelectionResult after = select_jobs(sheet, capacity);
        CHECK(after.decisions[pick] == 1);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("all positive-value entries are accepted when capacity suffices") {
    Rng rng(1618);
    for (int round = 0; round < 300; ++round) {
        const BidSheet sheet = random_sheet(rng, 10);
        int positive_vol = 0;
        for (const BidEntry& e : sheet.entries) {
            if (e.value > 0.0) positive_vol += e.vol;
        }
        const SelectionResult sel = select_jobs(sheet, positive_vol);
        for (std::size_t i = 0; i < sheet.entries.size(); ++i) {
            CHECK(sel.decisions[i] == (sheet.entries[i].value > 0.0 ? 1 : 0));
        }
    }
}
