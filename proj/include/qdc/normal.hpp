#ifndef QDC_NORMAL_HPP
#define QDC_NORMAL_HPP

#include <cmath>

namespace qdc {

inline double normal_pdf(double z) {
    static constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

/// Standard normal CDF via erfc; keeps relative accuracy in the lower tail.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.7071067811865475244);
}

/// Upper-tail probability P(Z > z).
inline double normal_ccdf(double z) {
    return 0.5 * std::erfc(z * 0.7071067811865475244);
}

/// P(a < Z <= b) for a <= b. Evaluated through whichever tail keeps the
/// difference well-conditioned, so intervals far out in either tail retain
/// relative accuracy instead of cancelling to zero.
inline double normal_interval(double a, double b) {
    if (!(a <= b)) return 0.0;
    double p = (a + b > 0.0) ? normal_ccdf(a) - normal_ccdf(b)
                             : normal_cdf(b) - normal_cdf(a);
    return p < 0.0 ? 0.0 : p;
}

} // namespace qdc

#endif
