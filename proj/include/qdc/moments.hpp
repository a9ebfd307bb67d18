#ifndef QDC_MOMENTS_HPP
#define QDC_MOMENTS_HPP

#include "qdc/scenario.hpp"

namespace qdc {

/// Mean quantization error m_e(theta): first-order Fourier form
/// -(delta/pi) exp(-2 pi^2 sigma_bar^2) sin(2 pi theta/delta).
double error_mean(const EstimationScenario& s);

/// d m_e / d theta = -2 exp(-2 pi^2 sigma_bar^2) cos(2 pi theta/delta).
double error_mean_derivative(const EstimationScenario& s);

/// Quantization error variance, first-order form.
double error_variance(const EstimationScenario& s);

/// Variance of the quantizer output theta + noise + error; tends to
/// delta^2/12 + sigma^2 as sigma_bar grows.
double output_variance(const EstimationScenario& s);

struct BiasVariance {
    double bias;     ///< of the arithmetic mean over n_samples
    double variance; ///< output_variance / n_samples
};

BiasVariance mean_estimator_bias_variance(const EstimationScenario& s);

} // namespace qdc

#endif
