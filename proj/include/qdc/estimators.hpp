#ifndef QDC_ESTIMATORS_HPP
#define QDC_ESTIMATORS_HPP

#include "qdc/quantizer.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>

namespace qdc {

enum class EstimatorId { mean, moment, mle };

const char* estimator_name(EstimatorId id);
std::optional<EstimatorId> estimator_from_name(const std::string& name);

struct EstimateReport {
    EstimatorId estimator_id = EstimatorId::mean;
    double theta_hat = 0.0;
    std::optional<double> sigma_hat;
    bool converged = false;
    int iterations = 0;
    std::optional<double> objective_value;
    bool degenerate = false;
    std::string degenerate_reason;
};

/// Per-code sample counts: the jointly sufficient statistic for (theta,
/// sigma) under a known quantizer. Only occupied codes are stored.
class CodeHistogram {
public:
    CodeHistogram(std::map<long, long> counts, long total, double delta);

    const std::map<long, long>& counts() const { return counts_; }
    long total() const { return total_; }
    double delta() const { return delta_; }
    bool single_bin() const { return counts_.size() == 1; }

    /// Mean of the reconstructed values sum(i * N_i) * delta / N.
    double mean_value() const;
    /// Unbiased variance of the reconstructed values; 0 when total < 2.
    double variance_value() const;

private:
    std::map<long, long> counts_;
    long total_;
    double delta_;
};

/// Bin the samples by code = value/delta. Every sample must sit on the code
/// grid within 1e-9 * delta (the quantizer output contract).
CodeHistogram build_histogram(std::span<const double> samples, double delta);

EstimateReport arithmetic_mean(std::span<const double> samples);

/// Unbiased (N-1 denominator) sample variance; requires at least 2 samples.
double sample_variance(std::span<const double> samples);

/// Floor on any estimated sigma: keeps the likelihood away from the
/// degenerate sigma -> 0 regime where its maximum stops being unique.
inline constexpr double k_sigma_floor_over_delta = 1e-3;

/// Moment inversion: finds (theta, sigma) whose theoretical output mean and
/// variance match the sample values. With known_sigma only the mean equation
/// is solved. The solve runs on the fractional part of mean_hat and the
/// integer multiple of delta is added back, so the estimate lands in the same
/// cell as mean_hat.
EstimateReport moment_estimate(double mean_hat, double var_hat, double delta,
                               std::optional<double> known_sigma = {});

struct LogLikelihoodResult {
    double value;
    bool clamped; ///< some occupied cell probability was floored at 1e-300
};

/// Histogram log-likelihood sum(N_i log p_i) with cell probabilities from the
/// quantizer model; only occupied codes contribute.
LogLikelihoodResult log_likelihood(const CodeHistogram& hist, double theta,
                                   double sigma, const QuantizerModel& q);

/// Maximum-likelihood estimate of (theta, sigma) by Nelder-Mead over
/// (theta, log sigma), seeded from the histogram mean and standard deviation
/// unless an explicit init is given. A single occupied code is degenerate:
/// theta = cell center, sigma = floor.
EstimateReport mle_estimate(const CodeHistogram& hist, const QuantizerModel& q,
                            std::optional<std::pair<double, double>> init = {});

} // namespace qdc

#endif
