#include "qdc/fisher.hpp"

#include "qdc/moments.hpp"
#include "qdc/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdc {

namespace {
constexpr double k_pi = 3.141592653589793238462643383279502884;

void require_noise(const EstimationScenario& s, const char* op) {
    if (!(s.sigma() > 0.0))
        throw std::domain_error(std::string(op) +
                                ": degenerate noise (sigma must be > 0)");
}

// Normalized information g(theta_bar, sigma_bar) with I1 = g / sigma^2, so
// every result is an exact function of theta/delta and sigma/delta and the
// delta-invariance of the normalized plots holds by construction.
double info_normalized(double theta_bar, double sigma_bar) {
    const double sb = sigma_bar;
    const double coeff = 1.0 / (2.0 * k_pi);
    // Window |n - theta_bar| <= 12 sigma_bar + 1: each excluded term is
    // bounded by a Gaussian tail below 1e-30.
    const double w = 12.0 * sb + 1.0;
    const long n_lo = static_cast<long>(std::floor(theta_bar - w));
    const long n_hi = static_cast<long>(std::ceil(theta_bar + w));
    double total = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
        const double u = (static_cast<double>(n) - 0.5 - theta_bar) / sb;
        const double v = (static_cast<double>(n) + 0.5 - theta_bar) / sb;
        const double p = normal_interval(u, v);
        if (p < 1e-300) continue; // numerator decays strictly faster
        const double num =
            std::exp(-0.5 * u * u) - std::exp(-0.5 * v * v);
        total += coeff * num * num / p;
    }
    return total;
}

struct Extrema {
    double at_zero;
    double at_half;
    double grid_min;
    double grid_max;
};

// 1000-point scan of [0, 1/2] (in theta/delta) plus golden-section polish.
// Periodicity and the symmetries about 0 and 1/2 make this interval cover
// all of theta.
Extrema scan_extrema(double sigma_bar) {
    constexpr int n_grid = 1000;
    double best_min = std::numeric_limits<double>::infinity();
    double best_max = -std::numeric_limits<double>::infinity();
    double arg_min = 0.0, arg_max = 0.5;
    for (int i = 0; i < n_grid; ++i) {
        const double t = 0.5 * static_cast<double>(i) / (n_grid - 1);
        const double g = info_normalized(t, sigma_bar);
        if (g < best_min) { best_min = g; arg_min = t; }
        if (g > best_max) { best_max = g; arg_max = t; }
    }
    const double step = 0.5 / (n_grid - 1);
    auto refine = [&](double center, bool maximize) {
        double a = std::max(0.0, center - step);
        double b = std::min(0.5, center + step);
        constexpr double inv_phi = 0.6180339887498948482;
        double c = b - (b - a) * inv_phi;
        double d = a + (b - a) * inv_phi;
        double fc = info_normalized(c, sigma_bar);
        double fd = info_normalized(d, sigma_bar);
        while (b - a > 1e-9) {
            const bool keep_left = maximize ? (fc > fd) : (fc < fd);
            if (keep_left) {
                b = d; d = c; fd = fc;
                c = b - (b - a) * inv_phi;
                fc = info_normalized(c, sigma_bar);
            } else {
                a = c; c = d; fc = fd;
                d = a + (b - a) * inv_phi;
                fd = info_normalized(d, sigma_bar);
            }
        }
        return info_normalized(0.5 * (a + b), sigma_bar);
    };
    Extrema e;
    e.at_zero = info_normalized(0.0, sigma_bar);
    e.at_half = info_normalized(0.5, sigma_bar);
    e.grid_min = std::min(best_min, refine(arg_min, false));
    e.grid_max = std::max(best_max, refine(arg_max, true));
    // The analytic locations are part of the candidate set.
    e.grid_min = std::min(e.grid_min, std::min(e.at_zero, e.at_half));
    e.grid_max = std::max(e.grid_max, std::max(e.at_zero, e.at_half));
    return e;
}
} // namespace

double cell_probability(double x, const EstimationScenario& s) {
    require_noise(s, "cell_probability");
    const double half = 0.5 * s.delta();
    return normal_interval((-half + x - s.theta()) / s.sigma(),
                           (half + x - s.theta()) / s.sigma());
}

double fisher_single(const EstimationScenario& s) {
    require_noise(s, "fisher_single");
    const double g =
        info_normalized(s.theta() / s.delta(), s.sigma_bar());
    return g / (s.sigma() * s.sigma());
}

double fisher_n(const EstimationScenario& s) {
    return static_cast<double>(s.n_samples()) * fisher_single(s);
}

double crlb_unbiased(const EstimationScenario& s) {
    const double info = fisher_single(s);
    if (info * s.delta() * s.delta() < k_info_floor)
        return std::numeric_limits<double>::infinity();
    return 1.0 / (static_cast<double>(s.n_samples()) * info);
}

double crlb_biased(const EstimationScenario& s) {
    const double base = crlb_unbiased(s);
    if (std::isinf(base)) return base;
    const double slope = 1.0 + error_mean_derivative(s);
    return slope * slope * base;
}

double fisher_max_approx(const EstimationScenario& s) {
    require_noise(s, "fisher_max_approx");
    return 2.0 / (k_pi * s.sigma() * s.sigma());
}

double fisher_min_approx(const EstimationScenario& s) {
    require_noise(s, "fisher_min_approx");
    const double sb = s.sigma_bar();
    const double denom =
        normal_interval(0.5 / sb, 1.5 / sb);
    return (1.0 / (k_pi * s.sigma() * s.sigma())) *
           std::exp(-1.0 / (4.0 * sb * sb)) / denom;
}

double quantization_efficiency(double sigma_bar) {
    if (!(sigma_bar > 0.0))
        throw std::domain_error("quantization_efficiency: sigma_bar must be > 0");
    // The minimum sits at theta = 0 (mod delta); a coarse grid guards it.
    double g_min = info_normalized(0.0, sigma_bar);
    constexpr int n_check = 101;
    for (int i = 1; i < n_check; ++i) {
        const double t = 0.5 * static_cast<double>(i) / (n_check - 1);
        g_min = std::min(g_min, info_normalized(t, sigma_bar));
    }
    return g_min; // g = I1 * sigma^2 = I1 / I_inf
}

InformationSummary information_summary(const EstimationScenario& s) {
    require_noise(s, "information_summary");
    const double sig2 = s.sigma() * s.sigma();
    const Extrema e = scan_extrema(s.sigma_bar());
    InformationSummary out;
    out.i_max = e.grid_max / sig2;
    out.i_min = e.grid_min / sig2;
    out.i_noise_model = 1.0 / (sig2 + s.delta() * s.delta() / 12.0);
    out.i_unquantized = 1.0 / sig2;
    out.rho = out.i_max / out.i_min;
    out.qe = e.grid_min;
    return out;
}

} // namespace qdc
