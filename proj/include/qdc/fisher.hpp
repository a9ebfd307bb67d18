#ifndef QDC_FISHER_HPP
#define QDC_FISHER_HPP

#include "qdc/scenario.hpp"

namespace qdc {

/// Probability that the quantizer output lands on the cell centered at x when
/// the input is theta plus Gaussian noise. Requires sigma > 0.
double cell_probability(double x, const EstimationScenario& s);

/// Fisher information carried by one quantized sample. Exact cell-sum with a
/// deterministic truncation window (|n*delta - theta| <= 12 sigma + delta);
/// excluded terms are below Gaussian-tail level 1e-30.
double fisher_single(const EstimationScenario& s);

/// N independent samples: N * fisher_single.
double fisher_n(const EstimationScenario& s);

/// Information per sample below this (times delta^-2) is treated as "no
/// usable information": the CRLB functions return infinity instead of an
/// astronomically large variance bound.
inline constexpr double k_info_floor = 1e-12;

/// 1/(N I1). Returns +infinity when the information is below the floor.
double crlb_unbiased(const EstimationScenario& s);

/// Bound for estimators biased by m_e: (1 + dm_e/dtheta)^2 / (N I1).
double crlb_biased(const EstimationScenario& s);

/// Closed-form extrema of I1 over theta, valid for sigma_bar < 0.3.
double fisher_max_approx(const EstimationScenario& s);
double fisher_min_approx(const EstimationScenario& s);

/// min_theta I1(theta) / (1/sigma^2). Scale-free: depends on sigma_bar only.
double quantization_efficiency(double sigma_bar);

struct InformationSummary {
    double i_max;         ///< grid-searched max of I1 over theta
    double i_min;         ///< grid-searched min of I1 over theta
    double i_noise_model; ///< 1/(sigma^2 + delta^2/12)
    double i_unquantized; ///< 1/sigma^2
    double rho;           ///< i_max / i_min
    double qe;            ///< i_min * sigma^2
};

/// Extrema are located on [0, delta/2] (periodicity plus symmetry about 0 and
/// delta/2 make that interval sufficient) with a 1000-point grid refined by
/// golden-section search.
InformationSummary information_summary(const EstimationScenario& s);

} // namespace qdc

#endif
