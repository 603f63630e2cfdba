#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spotbid/rng.hpp"
#include "spotbid/types.hpp"

namespace spotbid {

using FeatureVector = std::vector<double>;

inline constexpr std::size_t kStandardFeatureCount = 8;

// Column order of the standard feature vector; also the order persisted in
// policy checkpoints.
const std::vector<std::string>& standard_feature_names();

// Standard features, all scaled to [0,1]:
//   [bias, job_due_date, job_distance, job_volume,
//    system_job_count, system_avg_distance, system_total_volume,
//    system_avg_due_date]
// The four system components aggregate over information-sharing jobs only
// (including the bidding job itself) and are zero for a non-sharing job.
FeatureVector extract_features(const Job& job, const SystemState& state,
                               const InstanceConfig& cfg);

// Gaussian bid policy: mean is linear in the features, one shared scalar
// standard deviation.
struct PolicyParams {
    std::vector<double> theta;
    double sigma = 1.0;
};

// Default lower clamp applied to sigma after every update (LearnConfig can
// override). Besides keeping the density defined, the floor bounds the
// 1/sigma^2 and 1/sigma^3 factors in the score gradients: on instances with
// heterogeneous jobs, long runs otherwise drive sigma toward zero, one noisy
// batch then blows the weights apart and the policy never recovers. At 1.0
// the tuned full-size runs stay stable through convergence; homogeneous
// single-job-type scenarios can safely run much lower.
inline constexpr double kSigmaFloor = 1.0;

// Inner product phi . theta. Throws std::invalid_argument on length mismatch.
Money mean_bid(const FeatureVector& phi, const PolicyParams& params);

// Inverse standard normal CDF. Exact 0 at u = 0.5.
double inverse_normal_cdf(double u);

// Draws one bid via mu + sigma * Phi^-1(u), u uniform on (0,1).
// Throws std::invalid_argument when sigma <= 0.
Money sample_bid(Rng& rng, Money mu, double sigma);

// d/d(theta) log N(x; mu, sigma) = ((x - mu) / sigma^2) * phi.
std::vector<double> grad_log_mu(Money x, Money mu, double sigma, const FeatureVector& phi);

// d/d(sigma) log N(x; mu, sigma) = ((x - mu)^2 - sigma^2) / sigma^3.
double grad_log_sigma(Money x, Money mu, double sigma);

// A named feature extractor; the learner is generic over it so alternative
// parametrizations (e.g. carrier-cost-only) reuse the same machinery.
struct FeatureSet {
    std::vector<std::string> names;
    std::function<FeatureVector(const Job&, const SystemState&, const InstanceConfig&)> extract;

    std::size_t size() const { return names.size(); }
};

FeatureSet standard_feature_set();

// [bias, transport cost / (mile_cost * vol_max * dist_max)].
FeatureSet cost_feature_set();

}  // namespace spotbid
