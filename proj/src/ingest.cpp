#include "qdc/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qdc {

namespace {

struct RawRow {
    double reference;
    long record_id;
    double sample;
};

std::vector<RawRow> parse_rows(std::istream& is, const std::string& source) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error(source + ": empty file");
    if (line.find("reference_value") == std::string::npos)
        throw std::runtime_error(source +
                                 ": missing reference_value header row");
    std::vector<RawRow> rows;
    long line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') ||
            !std::getline(row, c))
            throw std::runtime_error(source + ": malformed row at line " +
                                     std::to_string(line_no));
        try {
            rows.push_back({std::stod(a), std::stol(b), std::stod(c)});
        } catch (const std::exception&) {
            throw std::runtime_error(source + ": malformed row at line " +
                                     std::to_string(line_no));
        }
    }
    return rows;
}

} // namespace

CaptureSet load_captures(const std::string& path, double delta,
                         OffsetMode mode, double supplied_offset) {
    if (!(delta > 0.0))
        throw std::invalid_argument("load_captures: delta must be > 0");
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    const auto rows = parse_rows(is, path);
    if (rows.empty()) throw std::runtime_error(path + ": no sample rows");

    double offset = 0.0;
    if (mode == OffsetMode::supplied) {
        offset = supplied_offset;
    } else if (mode == OffsetMode::estimate) {
        // Mean residual of all samples to the nearest code grid. Constant
        // offsets are recovered modulo one step.
        double acc = 0.0;
        for (const auto& r : rows)
            acc += r.sample - delta * std::nearbyint(r.sample / delta);
        offset = acc / static_cast<double>(rows.size());
    }

    // Group rows; keys sorted so the result is independent of file order.
    std::map<double, std::map<long, std::vector<double>>> grouped;
    for (const auto& r : rows)
        grouped[r.reference][r.record_id].push_back(r.sample - offset);

    CaptureSet set;
    set.delta = delta;
    set.offset = offset;
    const double tol = 1e-6 * delta;
    for (auto& [ref, records] : grouped) {
        CaptureGroup group;
        group.reference_value = ref;
        for (auto& [rec_id, samples] : records) {
            bool on_grid = true;
            for (double s : samples)
                if (std::abs(s - delta * std::nearbyint(s / delta)) > tol) {
                    on_grid = false;
                    break;
                }
            if (!on_grid) {
                ++set.rejected_records;
                std::ostringstream msg;
                msg << "reference " << ref << " record " << rec_id
                    << ": off-grid sample after offset compensation";
                set.rejections.push_back(msg.str());
                continue;
            }
            set.total_samples += static_cast<long>(samples.size());
            group.records.push_back(std::move(samples));
        }
        if (!group.records.empty()) set.groups.push_back(std::move(group));
    }
    if (set.groups.empty())
        throw std::runtime_error(path + ": all records rejected");
    return set;
}

ErrorCurve error_curves(const CaptureSet& captures) {
    if (captures.groups.empty())
        throw std::invalid_argument("error_curves: no capture groups");

    const double delta = captures.delta;
    const QuantizerModel model = UniformQuantizer{delta};
    ErrorCurve curve;

    double mse_mean_total = 0.0, mse_moment_total = 0.0, mse_mle_total = 0.0;
    double sigma_bar_acc = 0.0;
    long sigma_bar_groups = 0;

    for (const auto& group : captures.groups) {
        const double ref = group.reference_value;
        double err_mean = 0.0, err_moment = 0.0, err_mle = 0.0;
        double mse_mean = 0.0, mse_moment = 0.0, mse_mle = 0.0;
        double sigma_acc = 0.0;
        long sigma_count = 0;

        for (const auto& rec : group.records) {
            const double mean = arithmetic_mean(rec).theta_hat;

            double theta_moment = mean;
            if (rec.size() >= 2) {
                const auto rep =
                    moment_estimate(mean, sample_variance(rec), delta);
                theta_moment = rep.theta_hat;
                if (rep.degenerate) ++curve.degenerate_count;
            }

            const auto hist = build_histogram(rec, delta);
            const auto mle = mle_estimate(hist, model);
            if (mle.degenerate) ++curve.degenerate_count;
            if (mle.sigma_hat) {
                sigma_acc += *mle.sigma_hat / delta;
                ++sigma_count;
            }

            err_mean += mean - ref;
            err_moment += theta_moment - ref;
            err_mle += mle.theta_hat - ref;
            mse_mean += (mean - ref) * (mean - ref);
            mse_moment += (theta_moment - ref) * (theta_moment - ref);
            mse_mle += (mle.theta_hat - ref) * (mle.theta_hat - ref);
        }

        const double n_rec = static_cast<double>(group.records.size());
        const double ref_over_delta = ref / delta;
        curve.points.push_back(
            {ref_over_delta, EstimatorId::mean, err_mean / n_rec / delta});
        curve.points.push_back(
            {ref_over_delta, EstimatorId::moment, err_moment / n_rec / delta});
        curve.points.push_back(
            {ref_over_delta, EstimatorId::mle, err_mle / n_rec / delta});

        mse_mean_total += mse_mean / n_rec;
        mse_moment_total += mse_moment / n_rec;
        mse_mle_total += mse_mle / n_rec;
        if (sigma_count > 0) {
            sigma_bar_acc += sigma_acc / static_cast<double>(sigma_count);
            ++sigma_bar_groups;
        }
    }

    // Group count cancels in the ratios of group-averaged MSEs.
    curve.rho_moment = mse_moment_total / mse_mean_total;
    curve.rho_mle = mse_mle_total / mse_mean_total;
    curve.sigma_bar_hat =
        sigma_bar_groups > 0 ? sigma_bar_acc / sigma_bar_groups : 0.0;
    return curve;
}

void write_error_curve_csv(const ErrorCurve& curve, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << std::setprecision(17);
    os << "reference_over_delta,estimator,mean_error_over_delta\n";
    for (const auto& p : curve.points)
        os << p.reference_over_delta << ',' << estimator_name(p.estimator)
           << ',' << p.mean_error_over_delta << '\n';
}

void write_error_summary_csv(const ErrorCurve& curve,
                             const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << std::setprecision(17);
    os << "rho_M,rho_mle,sigma_bar_hat,degenerate_records\n";
    os << curve.rho_moment << ',' << curve.rho_mle << ','
       << curve.sigma_bar_hat << ',' << curve.degenerate_count << '\n';
}

} // namespace qdc
