#ifndef QDC_INGEST_HPP
#define QDC_INGEST_HPP

#include "qdc/estimators.hpp"

#include <string>
#include <vector>

namespace qdc {

/// Records measured at one reference value of the measurand.
struct CaptureGroup {
    double reference_value;
    std::vector<std::vector<double>> records;
};

struct CaptureSet {
    std::vector<CaptureGroup> groups;
    double delta = 1.0;
    double offset = 0.0; ///< amount subtracted from every raw sample
    long rejected_records = 0;
    std::vector<std::string> rejections; ///< one note per rejected record
    long total_samples = 0;
};

enum class OffsetMode { none, supplied, estimate };

/// Load a capture CSV with header `reference_value,record_id,sample`, one
/// sample per row. Offset handling: none, a supplied value, or estimated as
/// the mean residual of all samples to the nearest code grid. After offset
/// removal every sample must sit on the code grid within 1e-6 * delta;
/// records violating that are dropped and reported, malformed rows abort with
/// the line number.
CaptureSet load_captures(const std::string& path, double delta,
                         OffsetMode mode, double supplied_offset = 0.0);

struct ErrorCurvePoint {
    double reference_over_delta;
    EstimatorId estimator;
    double mean_error_over_delta; ///< mean of (theta_hat - V_theta)/delta
};

struct ErrorCurve {
    std::vector<ErrorCurvePoint> points;
    double rho_moment = 0.0;   ///< group-averaged MSE ratio vs mean estimator
    double rho_mle = 0.0;
    double sigma_bar_hat = 0.0; ///< MLE noise estimate averaged over groups
    long degenerate_count = 0;
};

/// Run all three estimators on every record in ideal-uniform mode with sigma
/// unknown; aggregate per-group mean errors and the global MSE ratios against
/// the reference values.
ErrorCurve error_curves(const CaptureSet& captures);

void write_error_curve_csv(const ErrorCurve& curve, const std::string& path);
void write_error_summary_csv(const ErrorCurve& curve, const std::string& path);

} // namespace qdc

#endif
