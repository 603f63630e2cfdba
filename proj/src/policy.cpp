#include "spotbid/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spotbid/carrier.hpp"

namespace spotbid {

namespace {

double clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

void require_positive_sigma(double sigma, const char* who) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": sigma must be > 0");
    }
}

}  // namespace

const std::vector<std::string>& standard_feature_names() {
    static const std::vector<std::string> names = {
        "bias",
        "job_due_date",
        "job_distance",
        "job_volume",
        "system_job_count",
        "system_avg_distance",
        "system_total_volume",
        "system_avg_due_date",
    };
    return names;
}

FeatureVector extract_features(const Job& job, const SystemState& state,
                               const InstanceConfig& cfg) {
    FeatureVector phi(kStandardFeatureCount, 0.0);
    phi[0] = 1.0;
    phi[1] = clamp01(static_cast<double>(job.tau) / cfg.tau_max);
    phi[2] = clamp01(job.dist / cfg.dist_max);
    phi[3] = clamp01(static_cast<double>(job.vol) / cfg.vol_max);

    if (job.shares_info) {
        // Aggregates run over sharing jobs only, the bidder included.
        int n = 0;
        double dist_sum = 0.0;
        long vol_sum = 0;
        long tau_sum = 0;
        for (const Job& other : state.jobs) {
            if (!other.shares_info) continue;
            ++n;
            dist_sum += other.dist;
            vol_sum += other.vol;
            tau_sum += other.tau;
        }
        if (n > 0) {
            // Worst-case in-flight population bounds the count and volume
            // normalizers; anything beyond is clamped into [0,1].
            const double pop_cap =
                std::max(1.0, static_cast<double>(cfg.max_arrivals) * cfg.tau_max);
            phi[4] = clamp01(n / pop_cap);
            phi[5] = clamp01((dist_sum / n) / cfg.dist_max);
            phi[6] = clamp01(static_cast<double>(vol_sum) / (pop_cap * cfg.vol_max));
            phi[7] = clamp01((static_cast<double>(tau_sum) / n) / cfg.tau_max);
        }
    }
    return phi;
}

Money mean_bid(const FeatureVector& phi, const PolicyParams& params) {
    if (phi.size() != params.theta.size()) {
        throw std::invalid_argument("mean_bid: feature/weight length mismatch");
    }
    Money mu = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        mu += phi[i] * params.theta[i];
    }
    return mu;
}

double inverse_normal_cdf(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("inverse_normal_cdf: u must lie in (0,1)");
    }

    // Acklam's rational approximation, then one Halley refinement step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;

    double x;
    if (u < low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    static const double sqrt2pi = std::sqrt(2.0 * std::acos(-1.0));
    const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - u;
    const double step = err * sqrt2pi * std::exp(0.5 * x * x);
    return x - step / (1.0 + 0.5 * x * step);
}

Money sample_bid(Rng& rng, Money mu, double sigma) {
    require_positive_sigma(sigma, "sample_bid");
    return mu + sigma * inverse_normal_cdf(rng.uniform_unit());
}

std::vector<double> grad_log_mu(Money x, Money mu, double sigma, const FeatureVector& phi) {
    require_positive_sigma(sigma, "grad_log_mu");
    const double scale = (x - mu) / (sigma * sigma);
    std::vector<double> grad(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        grad[i] = scale * phi[i];
    }
    return grad;
}

double grad_log_sigma(Money x, Money mu, double sigma) {
    require_positive_sigma(sigma, "grad_log_sigma");
    const double dev = x - mu;
    return (dev * dev - sigma * sigma) / (sigma * sigma * sigma);
}

FeatureSet standard_feature_set() {
    return {standard_feature_names(), &extract_features};
}

FeatureSet cost_feature_set() {
    FeatureSet set;
    set.names = {"bias", "carrier_cost"};
    set.extract = [](const Job& job, const SystemState&, const InstanceConfig& cfg) {
        const double max_cost = cfg.mile_cost * cfg.vol_max * cfg.dist_max;
        FeatureVector phi(2, 1.0);
        phi[1] = max_cost > 0.0 ? clamp01(transport_cost(job, cfg.mile_cost) / max_cost) : 0.0;
        return phi;
    };
    return set;
}

}  // namespace spotbid
