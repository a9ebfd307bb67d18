#include "qdc/moments.hpp"

#include <cmath>

namespace qdc {

namespace {
constexpr double k_pi = 3.141592653589793238462643383279502884;
constexpr double k_two_pi_sq = 2.0 * k_pi * k_pi;

// exp(-2 pi^2 sigma_bar^2): the first-harmonic attenuation every moment
// expression shares.
double attenuation(const EstimationScenario& s) {
    const double sb = s.sigma_bar();
    return std::exp(-k_two_pi_sq * sb * sb);
}

double phase(const EstimationScenario& s) {
    return 2.0 * k_pi * s.theta() / s.delta();
}
} // namespace

double error_mean(const EstimationScenario& s) {
    return -(s.delta() / k_pi) * attenuation(s) * std::sin(phase(s));
}

double error_mean_derivative(const EstimationScenario& s) {
    return -2.0 * attenuation(s) * std::cos(phase(s));
}

double error_variance(const EstimationScenario& s) {
    const double d2 = s.delta() * s.delta();
    const double att = attenuation(s);
    const double c = std::cos(phase(s));
    const double sn = std::sin(phase(s));
    return d2 / 12.0 - (d2 / (k_pi * k_pi)) * att * (c - att * sn * sn);
}

double output_variance(const EstimationScenario& s) {
    const double d2 = s.delta() * s.delta();
    const double sig2 = s.sigma() * s.sigma();
    const double att = attenuation(s);
    const double c = std::cos(phase(s));
    const double sn = std::sin(phase(s));
    return d2 / 12.0 + sig2 -
           att * ((4.0 * sig2 + d2 / (k_pi * k_pi)) * c -
                  (d2 / (k_pi * k_pi)) * att * sn * sn);
}

BiasVariance mean_estimator_bias_variance(const EstimationScenario& s) {
    return {error_mean(s),
            output_variance(s) / static_cast<double>(s.n_samples())};
}

} // namespace qdc
