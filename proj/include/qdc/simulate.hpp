#ifndef QDC_SIMULATE_HPP
#define QDC_SIMULATE_HPP

#include "qdc/estimators.hpp"
#include "qdc/quantizer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qdc {

inline constexpr const char* k_version = "0.1.0";

/// Monte Carlo sweep over a sigma_bar grid and a theta grid. Records are
/// paired: every estimator in `estimators` sees the same synthesized records,
/// so MSE ratios are computed on identical draws. Per-record seeds derive
/// from (master_seed, sigma index, theta index, record index) which makes
/// reports bit-identical for a given config regardless of thread count.
struct SweepConfig {
    std::vector<double> sigma_bar_grid;
    int theta_grid_points = 500; ///< M
    int records = 200;           ///< R per (sigma_bar, theta) cell
    long n_samples = 500;        ///< N per record
    QuantizerModel quantizer = UniformQuantizer{1.0}; ///< generates the data
    /// Model handed to the estimators; empty means "same as quantizer".
    /// The nonlinear robustness study sets data = tabulated, estimator =
    /// ideal uniform.
    std::optional<QuantizerModel> estimator_model;
    double theta_span_lo = -0.5; ///< in units of delta
    double theta_span_hi = 0.5;
    std::uint64_t master_seed = 1;
    std::vector<EstimatorId> estimators = {EstimatorId::mean,
                                           EstimatorId::moment};
    int threads = 1;
};

struct MseRow {
    EstimatorId estimator;
    double sigma_bar;
    double theta; ///< absolute, in amplitude units
    double mse;
};

struct MseAverage {
    EstimatorId estimator;
    double sigma_bar;
    double avg_mse;      ///< mean of per-theta MSE over the grid
    double rho;          ///< avg_mse / avg_mse(mean estimator)
    long degenerate_count;
};

struct MseSweepReport {
    SweepConfig config;
    std::vector<double> theta_grid;
    std::vector<MseRow> rows;
    std::vector<MseAverage> averages;
    double wall_seconds = 0.0;
};

/// N quantizer outputs of theta + Gaussian(sigma) noise, deterministic in
/// (arguments, seed).
std::vector<double> synthesize_record(double theta, double sigma,
                                      const QuantizerModel& q, long n_samples,
                                      std::uint64_t seed);

/// Mean squared estimation error over `records` independent records.
double empirical_mse(EstimatorId estimator, double theta, double sigma,
                     const QuantizerModel& q, long n_samples, int records,
                     std::uint64_t seed);

MseSweepReport run_sweep(const SweepConfig& config);

/// Same sweep with the estimators forced to assume the ideal uniform
/// quantizer while the data come from config.quantizer.
MseSweepReport nonlinear_robustness(SweepConfig config);

struct ThresholdRow {
    long n_samples;
    double sigma_bar;
    double mse_mean;
    double mse_mle;
    double se_mean; ///< MC standard error of mse_mean
    double se_mle;  ///< MC standard error of mse_mle
    /// Standard error of the per-record paired difference
    /// (err_mle^2 - err_mean^2).
    double diff_se;
};

struct ThresholdReport {
    double theta;
    int records;
    std::vector<ThresholdRow> rows;
};

/// Fixed-theta MSE comparison of mean vs MLE across record lengths,
/// exposing the small-N threshold effect.
ThresholdReport threshold_study(double theta, const std::vector<long>& n_list,
                                const std::vector<double>& sigma_bar_grid,
                                int records, std::uint64_t seed,
                                int threads = 1);

struct FisherMcRow {
    double theta_over_delta;
    double info_empirical; ///< mean of squared score
    double info_se;        ///< MC standard error of that mean
    double score_mean;     ///< should be ~0 (regularity check)
    double score_se;
};

struct FisherMcReport {
    double sigma_bar;
    long runs;
    std::vector<FisherMcRow> rows;
};

/// Empirical single-sample information: variance of the analytic score of
/// the drawn code, per theta grid point (delta = 1).
FisherMcReport fisher_mc_validate(const std::vector<double>& theta_over_delta,
                                  double sigma_bar, long runs,
                                  std::uint64_t seed, int threads = 1);

/// Tidy CSV emitters shared by the CLI and the test harness.
void write_sweep_csv(const MseSweepReport& report, const std::string& path);
void write_ratios_csv(const MseSweepReport& report, const std::string& path);
void write_manifest(const MseSweepReport& report, const std::string& path);

} // namespace qdc

#endif
