#ifndef QDC_SCENARIO_HPP
#define QDC_SCENARIO_HPP

#include <cmath>
#include <stdexcept>

namespace qdc {

/// Measurement scenario for a constant value in Gaussian noise seen through a
/// uniform quantizer: true value theta, noise standard deviation sigma,
/// quantization step delta and record length. sigma_bar = sigma/delta is the
/// single ratio that governs every normalized quantity downstream.
class EstimationScenario {
public:
    EstimationScenario(double theta, double sigma, double delta,
                       long n_samples = 1)
        : theta_(theta), sigma_(sigma), delta_(delta), n_samples_(n_samples) {
        if (!std::isfinite(theta) || !std::isfinite(sigma) ||
            !std::isfinite(delta))
            throw std::invalid_argument("scenario parameters must be finite");
        if (sigma < 0.0)
            throw std::invalid_argument("sigma must be >= 0");
        if (delta <= 0.0)
            throw std::invalid_argument("delta must be > 0");
        if (n_samples < 1)
            throw std::invalid_argument("n_samples must be >= 1");
        sigma_bar_ = sigma_ / delta_;
    }

    double theta() const { return theta_; }
    double sigma() const { return sigma_; }
    double delta() const { return delta_; }
    long n_samples() const { return n_samples_; }
    double sigma_bar() const { return sigma_bar_; }

    EstimationScenario with_theta(double theta) const {
        return {theta, sigma_, delta_, n_samples_};
    }

private:
    double theta_;
    double sigma_;
    double delta_;
    long n_samples_;
    double sigma_bar_;
};

/// The closed-form moment expressions are first-order truncations valid for
/// sigma_bar > 0.3; they are still evaluated outside that range, this flag
/// tells the caller which regime a scenario falls in.
inline bool series_valid(const EstimationScenario& s) {
    return s.sigma_bar() > 0.3;
}

} // namespace qdc

#endif
