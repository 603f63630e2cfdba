#include <doctest.h>

#include <cmath>
#include <map>

#include "bookkeeping_oracle.hpp"
#include "spotbid/learner.hpp"
#include "spotbid/market.hpp"

using namespace spotbid;
using spotbid::test_support::naive_books;
using spotbid::test_support::NaiveBooks;

namespace {

JobTrajectory traj_from(int id, Outcome outcome, std::vector<std::pair<int, Money>> tau_rewards) {
    JobTrajectory t;
    t.job_id = id;
    t.outcome = outcome;
    for (auto [tau, reward] : tau_rewards) {
        TrajectoryStep step;
        step.tau = tau;
        step.features = {1.0};
        step.reward = reward;
        t.steps.push_back(step);
    }
    return t;
}

// Literal per-observation evaluation of the update rules, independent of
// compute_updates' loop structure.
ParamUpdate scripted_update(const EpisodeLog& log, const PolicyParams& params,
                            double alpha_mu, double alpha_sigma) {
    ParamUpdate u;
    u.delta_theta.assign(params.theta.size(), 0.0);
    for (std::size_t j = 0; j < log.trajectories.size(); ++j) {
        for (std::size_t s = 0; s < log.trajectories[j].steps.size(); ++s) {
            const TrajectoryStep& step = log.trajectories[j].steps[s];
            const double adv = log.returns[j][s] - log.baselines[step.tau];
            const double k = log.counts[step.tau];
            const double dev = step.bid - step.mean;
            for (std::size_t i = 0; i < params.theta.size(); ++i) {
                u.delta_theta[i] += alpha_mu * (1.0 / k) * adv * dev * step.features[i] /
                                    (params.sigma * params.sigma);
            }
            u.delta_sigma += alpha_sigma * (1.0 / k) * adv *
                             (dev * dev - params.sigma * params.sigma) /
                             (params.sigma * params.sigma * params.sigma);
        }
    }
    return u;
}

}  // namespace

TEST_CASE("returns_to_go unrolls the recursion from completion backwards") {
    SUBCASE("shipped at tau 2 with due date 4") {
        const auto t = traj_from(1, Outcome::Shipped, {{4, -2}, {3, -2}, {2, -20}});
        const auto v = returns_to_go(t);
        REQUIRE(v.size() == 3);
        CHECK(v.at(2) == -20.0);
        CHECK(v.at(3) == -22.0);
        CHECK(v.at(4) == -24.0);
    }
    SUBCASE("failed with due date 2") {
        const auto t = traj_from(1, Outcome::Failed, {{2, -1}, {1, -1}, {0, -10}});
        const auto v = returns_to_go(t);
        CHECK(v.at(0) == -10.0);
        CHECK(v.at(1) == -11.0);
        CHECK(v.at(2) == -12.0);
    }
    SUBCASE("shipped at first opportunity") {
        const auto v = returns_to_go(traj_from(1, Outcome::Shipped, {{4, -20}}));
        REQUIRE(v.size() == 1);
        CHECK(v.at(4) == -20.0);
    }
}

TEST_CASE("returns_to_go rejects malformed trajectories") {
    CHECK_THROWS_AS(returns_to_go(JobTrajectory{}), std::invalid_argument);
    CHECK_THROWS_AS(returns_to_go(traj_from(1, Outcome::Shipped, {{4, -2}, {2, -2}})),
                    std::invalid_argument);
    // a failed job must end at tau 0
    CHECK_THROWS_AS(returns_to_go(traj_from(1, Outcome::Failed, {{3, -2}, {2, -2}})),
                    std::invalid_argument);
}

TEST_CASE("finalize_episode counts, returns and baselines") {
    SUBCASE("two observations in one bucket average their returns") {
        std::vector<JobTrajectory> trajs = {traj_from(1, Outcome::Shipped, {{2, -10}}),
                                            traj_from(2, Outcome::Shipped, {{2, -20}})};
        const EpisodeLog log = finalize_episode(std::move(trajs), 5);
        CHECK(log.counts[2] == 2);
        CHECK(log.baselines[2] == -15.0);
    }
    SUBCASE("a job due at 4 and shipped at 2 touches buckets 2, 3, 4") {
        std::vector<JobTrajectory> trajs = {
            traj_from(1, Outcome::Shipped, {{4, -2}, {3, -2}, {2, -20}})};
        const EpisodeLog log = finalize_episode(std::move(trajs), 5);
        CHECK(log.counts == std::vector<int>{0, 0, 1, 1, 1, 0});
    }
    SUBCASE("a single trajectory is its own baseline") {
        std::vector<JobTrajectory> trajs = {
            traj_from(1, Outcome::Failed, {{2, -1}, {1, -1}, {0, -10}})};
        const EpisodeLog log = finalize_episode(std::move(trajs), 5);
        CHECK(log.baselines[0] == log.returns[0][2]);
        CHECK(log.baselines[1] == log.returns[0][1]);
        CHECK(log.baselines[2] == log.returns[0][0]);
    }
    SUBCASE("no trajectories yields all-zero counts") {
        const EpisodeLog log = finalize_episode({}, 5);
        CHECK(log.counts == std::vector<int>(6, 0));
    }
}

TEST_CASE("compute_updates: a single completed job contributes nothing") {
    auto t = traj_from(1, Outcome::Shipped, {{4, -2}, {3, -2}, {2, -20}});
    for (auto& step : t.steps) {
        step.bid = 7.0;
        step.mean = 3.0;  // off-mean bids, still zero advantage
    }
    const EpisodeLog log = finalize_episode({t}, 5);
    PolicyParams params{{0.5}, 2.0};
    const ParamUpdate u = compute_updates(log, params, LearnConfig{});
    CHECK(u.delta_theta[0] == 0.0);
    CHECK(u.delta_sigma == 0.0);
}

TEST_CASE("compute_updates: bids exactly at the mean leave theta untouched") {
    std::vector<JobTrajectory> trajs;
    for (int id = 0; id < 4; ++id) {
        auto t = traj_from(id, Outcome::Shipped, {{3, -5.0 * id}, {2, -1}, {1, -2.0 * id}});
        for (auto& step : t.steps) {
            step.bid = 11.0;
            step.mean = 11.0;
        }
        trajs.push_back(std::move(t));
    }
    const EpisodeLog log = finalize_episode(std::move(trajs), 5);
    PolicyParams params{{0.0}, 3.0};
    const ParamUpdate u = compute_updates(log, params, LearnConfig{});
    CHECK(u.delta_theta[0] == 0.0);
    // centered advantages cancel the sigma term up to rounding
    CHECK(std::abs(u.delta_sigma) < 1e-12);
}

// Hand-evaluated two-trajectory case: one bucket (tau 4), returns -10 and
// -30, bids one sigma either side of the mean, bias-only features. The
// update reduces to alpha_mu * 10 / sigma on the bias weight and exactly 0
// on sigma.
TEST_CASE("compute_updates matches the hand-evaluated two-trajectory case") {
    const double mu = 5.0;
    for (double sigma : {0.5, 2.0, 10.0}) {
        std::vector<JobTrajectory> trajs;
        auto a = traj_from(1, Outcome::Shipped, {{4, -10}});
        a.steps[0].bid = mu + sigma;
        a.steps[0].mean = mu;
        auto b = traj_from(2, Outcome::Shipped, {{4, -30}});
        b.steps[0].bid = mu - sigma;
        b.steps[0].mean = mu;
        trajs.push_back(a);
        trajs.push_back(b);
        const EpisodeLog log = finalize_episode(std::move(trajs), 5);
        CHECK(log.baselines[4] == -20.0);

        PolicyParams params{{0.0}, sigma};
        LearnConfig cfg;  // alpha_mu 0.1, alpha_sigma 0.01
        const ParamUpdate u = compute_updates(log, params, cfg);
        CHECK(u.delta_theta[0] == doctest::Approx(cfg.alpha_mu * 10.0 / sigma).epsilon(1e-12));
        CHECK(u.delta_sigma == doctest::Approx(0.0));

        const ParamUpdate scripted = scripted_update(log, params, cfg.alpha_mu, cfg.alpha_sigma);
        CHECK(u.delta_theta[0] == doctest::Approx(scripted.delta_theta[0]).epsilon(1e-12));
        CHECK(u.delta_sigma == doctest::Approx(scripted.delta_sigma).epsilon(1e-12));
    }
}

TEST_CASE("run_episode: no arrivals means an empty log") {
    const ArrivalProcess none = [](RngStreams&, const InstanceConfig&, int&) {
        return std::vector<Job>{};
    };
    InstanceConfig cfg;
    PolicyParams params{std::vector<double>(8, 0.0), 1.0};
    RngStreams rng(3);
    const EpisodeResult result = run_episode(params, cfg, 1, rng, standard_feature_set(), none);
    CHECK(result.log.trajectories.empty());
    CHECK(result.metrics.completed_jobs == 0);
}

TEST_CASE("run_episode is deterministic for a fixed seed") {
    InstanceConfig cfg;
    cfg.sharing_rate = 0.4;
    PolicyParams params{std::vector<double>(8, 1.0), 5.0};
    RngStreams rng_a(97), rng_b(97);
    const EpisodeResult a = run_episode(params, cfg, 50, rng_a, standard_feature_set());
    const EpisodeResult b = run_episode(params, cfg, 50, rng_b, standard_feature_set());
    REQUIRE(a.log.trajectories.size() == b.log.trajectories.size());
    CHECK(a.log.returns == b.log.returns);
    CHECK(a.log.counts == b.log.counts);
    CHECK(a.metrics.carrier_revenue == b.metrics.carrier_revenue);
}

TEST_CASE("episode metrics agree with the raw carrier ledger") {
    InstanceConfig cfg;
    PolicyParams params{std::vector<double>(8, 0.0), 10.0};
    params.theta[0] = 25.0;
    RngStreams rng(4242);
    for (int round = 0; round < 20; ++round) {
        const EpisodeResult result = run_episode(params, cfg, 50, rng, standard_feature_set());
        CHECK(result.metrics.shipped_jobs + result.metrics.failed_jobs ==
              result.metrics.completed_jobs);
        Money revenue = 0.0, cost = 0.0;
        for (const RawStepRecord& rec : result.log.raw) {
            if (rec.decision == 1) {
                revenue += rec.bid;
                cost += cfg.mile_cost * rec.vol * rec.dist;
            }
        }
        if (revenue > 0.0) {
            const double margin = (revenue - cost) / revenue;
            CHECK(result.metrics.carrier_profit_margin() ==
                  doctest::Approx(margin).epsilon(1e-9));
        }
    }
}

TEST_CASE("episode bookkeeping equals the naive recomputation from raw records") {
    InstanceConfig cfg;
    cfg.sharing_rate = 0.2;
    PolicyParams params{std::vector<double>(8, 0.0), 10.0};
    params.theta[0] = 20.0;  // lively mix of shipped and failed jobs
    RngStreams rng(12345);

    for (int episode = 0; episode < 100; ++episode) {
        const EpisodeResult result = run_episode(params, cfg, 50, rng, standard_feature_set());
        const EpisodeLog& log = result.log;
        const NaiveBooks books = naive_books(log.raw, cfg.tau_max);

        REQUIRE(books.counts == log.counts);
        for (int t = 0; t <= cfg.tau_max; ++t) {
            REQUIRE(books.baselines[t] == log.baselines[t]);
        }
        REQUIRE(books.returns_by_job.size() == log.trajectories.size());
        for (std::size_t j = 0; j < log.trajectories.size(); ++j) {
            const auto& expected = books.returns_by_job.at(log.trajectories[j].job_id);
            for (std::size_t s = 0; s < log.trajectories[j].steps.size(); ++s) {
                REQUIRE(log.returns[j][s] == expected.at(log.trajectories[j].steps[s].tau));
            }
        }

        // advantages are centered within every touched bucket
        std::vector<double> adv_sum(cfg.tau_max + 1, 0.0);
        for (std::size_t j = 0; j < log.trajectories.size(); ++j) {
            for (std::size_t s = 0; s < log.trajectories[j].steps.size(); ++s) {
                const int t = log.trajectories[j].steps[s].tau;
                adv_sum[t] += log.returns[j][s] - log.baselines[t];
            }
        }
        for (double v : adv_sum) CHECK(std::abs(v) < 1e-9);
    }
}

TEST_CASE("every completed job contributes one observation per epoch in the system") {
    InstanceConfig cfg;
    std::map<int, int> original_tau;
    const ArrivalProcess recording = [&original_tau](RngStreams& rng, const InstanceConfig& c,
                                                     int& next_id) {
        auto batch = generate_arrivals(rng, c, next_id);
        for (const Job& job : batch) original_tau[job.id] = job.original_tau;
        return batch;
    };
    PolicyParams params{std::vector<double>(8, 0.0), 10.0};
    RngStreams rng(777);
    const EpisodeResult result = run_episode(params, cfg, 60, rng, standard_feature_set(),
                                             recording);
    REQUIRE(result.log.trajectories.size() > 50);
    for (const JobTrajectory& traj : result.log.trajectories) {
        const int completed_at = traj.steps.back().tau;
        CHECK(static_cast<int>(traj.steps.size()) ==
              original_tau.at(traj.job_id) - completed_at + 1);
        if (traj.outcome == Outcome::Failed) CHECK(completed_at == 0);
    }
}

TEST_CASE("shifting every return in one bucket leaves the updates unchanged") {
    InstanceConfig cfg;
    PolicyParams params{std::vector<double>(8, 0.0), 10.0};
    params.theta[0] = 15.0;
    RngStreams rng(55);
    EpisodeResult result = run_episode(params, cfg, 50, rng, standard_feature_set());
    EpisodeLog& log = result.log;
    REQUIRE(log.counts[3] >= 2);

    LearnConfig learn;
    const ParamUpdate before = compute_updates(log, params, learn);

    const double shift = 123.456;
    std::vector<Money> sums(cfg.tau_max + 1, 0.0);
    std::vector<int> counts(cfg.tau_max + 1, 0);
    for (std::size_t j = 0; j < log.trajectories.size(); ++j) {
        for (std::size_t s = 0; s < log.trajectories[j].steps.size(); ++s) {
            if (log.trajectories[j].steps[s].tau == 3) log.returns[j][s] += shift;
            sums[log.trajectories[j].steps[s].tau] += log.returns[j][s];
            counts[log.trajectories[j].steps[s].tau] += 1;
        }
    }
    for (int t = 0; t <= cfg.tau_max; ++t) {
        log.baselines[t] = counts[t] > 0 ? sums[t] / counts[t] : 0.0;
    }

    const ParamUpdate after = compute_updates(log, params, learn);
    for (std::size_t i = 0; i < before.delta_theta.size(); ++i) {
        CHECK(after.delta_theta[i] ==
              doctest::Approx(before.delta_theta[i]).epsilon(1e-9).scale(1.0));
    }
    CHECK(after.delta_sigma == doctest::Approx(before.delta_sigma).epsilon(1e-9).scale(1.0));
}

TEST_CASE("train: smoke run produces finite parameters and a full trace") {
    LearnConfig cfg;
    cfg.episodes = 1;
    cfg.horizon = 5;
    cfg.validation_episodes = 1;
    cfg.validation_horizon = 10;
    InstanceConfig inst;
    const TrainResult result = train(cfg, inst);
    REQUIRE(result.trace.rows.size() == 1);
    CHECK(std::isfinite(result.params.sigma));
    for (double w : result.params.theta) CHECK(std::isfinite(w));
}

TEST_CASE("train is reproducible from the seed") {
    LearnConfig cfg;
    cfg.episodes = 20;
    cfg.horizon = 20;
    cfg.validation_episodes = 2;
    cfg.validation_horizon = 20;
    cfg.seed = 31337;
    InstanceConfig inst;
    const TrainResult a = train(cfg, inst);
    const TrainResult b = train(cfg, inst);
    CHECK(a.params.theta == b.params.theta);
    CHECK(a.params.sigma == b.params.sigma);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
        CHECK(a.trace.rows[i].theta == b.trace.rows[i].theta);
    }
}

TEST_CASE("train keeps sigma at or above the configured floor") {
    LearnConfig cfg;
    cfg.episodes = 50;
    cfg.horizon = 10;
    cfg.sigma0 = 0.3;  // start below the default floor
    cfg.sigma_floor = 0.25;
    cfg.validation_episodes = 1;
    cfg.validation_horizon = 10;
    InstanceConfig inst;
    const TrainResult result = train(cfg, inst);
    for (const TraceRow& row : result.trace.rows) {
        CHECK(row.sigma >= cfg.sigma_floor);
    }
    cfg.sigma_floor = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sigma_floor"), ConfigError);
}

TEST_CASE("train aborts with a divergence error when rewards overflow") {
    LearnConfig cfg;
    cfg.episodes = 50;
    cfg.horizon = 20;
    InstanceConfig inst;
    inst.penalty_cost = 1e160;  // forces non-finite parameters within a few episodes
    inst.hold_cost = 1e160;
    try {
        train(cfg, inst);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.episode >= 0);
        CHECK(e.episode < cfg.episodes);
    }
}

TEST_CASE("LearnConfig validation names the offending field") {
    LearnConfig cfg;
    cfg.alpha_mu = 1.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("alpha_mu"), ConfigError);
    cfg = LearnConfig{};
    cfg.sigma0 = 0.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sigma0"), ConfigError);
}
