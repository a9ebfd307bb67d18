#include "qdc/simulate.hpp"

#include "qdc/normal.hpp"
#include "qdc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qdc {

namespace {

// Estimators as used inside sweeps: sigma unknown, failures fall back to the
// sample mean so a sweep never aborts.
struct RecordEstimates {
    double theta_hat = 0.0;
    bool degenerate = false;
};

RecordEstimates run_estimator(EstimatorId id, const std::vector<double>& rec,
                              double delta, const QuantizerModel& model) {
    RecordEstimates out;
    switch (id) {
        case EstimatorId::mean: {
            out.theta_hat = arithmetic_mean(rec).theta_hat;
            return out;
        }
        case EstimatorId::moment: {
            const double mean = arithmetic_mean(rec).theta_hat;
            if (rec.size() < 2) {
                out.theta_hat = mean;
                out.degenerate = true;
                return out;
            }
            const EstimateReport rep =
                moment_estimate(mean, sample_variance(rec), delta);
            out.theta_hat = rep.theta_hat;
            out.degenerate = rep.degenerate || !rep.converged;
            return out;
        }
        case EstimatorId::mle: {
            const CodeHistogram hist = build_histogram(rec, delta);
            const EstimateReport rep = mle_estimate(hist, model);
            out.theta_hat = rep.theta_hat;
            out.degenerate = rep.degenerate;
            return out;
        }
    }
    throw std::logic_error("unknown estimator");
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < n_workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<double> synthesize_record(double theta, double sigma,
                                      const QuantizerModel& q, long n_samples,
                                      std::uint64_t seed) {
    if (sigma < 0.0)
        throw std::invalid_argument("synthesize_record: sigma must be >= 0");
    if (n_samples < 1)
        throw std::invalid_argument("synthesize_record: need n_samples >= 1");
    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    for (auto& y : out) {
        const double x = sigma > 0.0 ? theta + sigma * rng.next_gaussian()
                                     : theta;
        y = model_quantize(q, x);
    }
    return out;
}

double empirical_mse(EstimatorId estimator, double theta, double sigma,
                     const QuantizerModel& q, long n_samples, int records,
                     std::uint64_t seed) {
    if (records < 1)
        throw std::invalid_argument("empirical_mse: need records >= 1");
    const double delta = model_delta(q);
    double acc = 0.0;
    for (int r = 0; r < records; ++r) {
        const auto rec = synthesize_record(
            theta, sigma, q, n_samples,
            derive_seed(seed, static_cast<std::uint64_t>(r)));
        const auto est = run_estimator(estimator, rec, delta, q);
        const double err = theta - est.theta_hat;
        acc += err * err;
    }
    return acc / static_cast<double>(records);
}

MseSweepReport run_sweep(const SweepConfig& config) {
    if (config.sigma_bar_grid.empty())
        throw std::invalid_argument("run_sweep: empty sigma_bar grid");
    if (config.theta_grid_points < 1 || config.records < 1 ||
        config.n_samples < 1)
        throw std::invalid_argument("run_sweep: M, R, N must all be >= 1");

    const auto t_start = std::chrono::steady_clock::now();
    const double delta = model_delta(config.quantizer);
    const QuantizerModel est_model =
        config.estimator_model ? *config.estimator_model : config.quantizer;

    // Estimators to run; the mean is always included because every ratio is
    // taken against it.
    std::vector<EstimatorId> ests = config.estimators;
    if (std::find(ests.begin(), ests.end(), EstimatorId::mean) == ests.end())
        ests.insert(ests.begin(), EstimatorId::mean);

    const int m_pts = config.theta_grid_points;
    const std::size_t n_sb = config.sigma_bar_grid.size();
    const double span = config.theta_span_hi - config.theta_span_lo;

    MseSweepReport report;
    report.config = config;
    report.theta_grid.resize(static_cast<std::size_t>(m_pts));
    for (int m = 0; m < m_pts; ++m)
        report.theta_grid[static_cast<std::size_t>(m)] =
            (config.theta_span_lo + static_cast<double>(m) * span / m_pts) *
            delta;

    const std::size_t n_cells = n_sb * static_cast<std::size_t>(m_pts);
    std::vector<std::vector<double>> cell_mse(
        n_cells, std::vector<double>(ests.size(), 0.0));
    std::vector<std::vector<long>> cell_degenerate(
        n_cells, std::vector<long>(ests.size(), 0));

    parallel_for(n_cells, config.threads, [&](std::size_t cell) {
        const std::size_t i_sb = cell / static_cast<std::size_t>(m_pts);
        const std::size_t i_th = cell % static_cast<std::size_t>(m_pts);
        const double sigma = config.sigma_bar_grid[i_sb] * delta;
        const double theta = report.theta_grid[i_th];
        auto& mse = cell_mse[cell];
        auto& degen = cell_degenerate[cell];
        for (int r = 0; r < config.records; ++r) {
            const std::uint64_t seed =
                derive_seed(config.master_seed, i_sb, i_th,
                            static_cast<std::uint64_t>(r));
            const auto rec = synthesize_record(theta, sigma, config.quantizer,
                                               config.n_samples, seed);
            for (std::size_t e = 0; e < ests.size(); ++e) {
                RecordEstimates est;
                try {
                    est = run_estimator(ests[e], rec, delta, est_model);
                } catch (const std::exception&) {
                    est.theta_hat = arithmetic_mean(rec).theta_hat;
                    est.degenerate = true;
                }
                const double err = theta - est.theta_hat;
                mse[e] += err * err;
                if (est.degenerate) ++degen[e];
            }
        }
        for (auto& v : mse) v /= static_cast<double>(config.records);
    });

    // Tidy rows plus per-sigma averages and ratios against the mean.
    for (std::size_t e = 0; e < ests.size(); ++e)
        for (std::size_t i_sb = 0; i_sb < n_sb; ++i_sb)
            for (int m = 0; m < m_pts; ++m) {
                const std::size_t cell =
                    i_sb * static_cast<std::size_t>(m_pts) +
                    static_cast<std::size_t>(m);
                report.rows.push_back(
                    {ests[e], config.sigma_bar_grid[i_sb],
                     report.theta_grid[static_cast<std::size_t>(m)],
                     cell_mse[cell][e]});
            }

    for (std::size_t i_sb = 0; i_sb < n_sb; ++i_sb) {
        double mean_avg = 0.0;
        for (int m = 0; m < m_pts; ++m)
            mean_avg += cell_mse[i_sb * m_pts + static_cast<std::size_t>(m)][0];
        mean_avg /= m_pts;
        for (std::size_t e = 0; e < ests.size(); ++e) {
            double avg = 0.0;
            long degen = 0;
            for (int m = 0; m < m_pts; ++m) {
                const std::size_t cell =
                    i_sb * static_cast<std::size_t>(m_pts) +
                    static_cast<std::size_t>(m);
                avg += cell_mse[cell][e];
                degen += cell_degenerate[cell][e];
            }
            avg /= m_pts;
            report.averages.push_back({ests[e], config.sigma_bar_grid[i_sb],
                                       avg, avg / mean_avg, degen});
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    return report;
}

MseSweepReport nonlinear_robustness(SweepConfig config) {
    config.estimator_model = UniformQuantizer{model_delta(config.quantizer)};
    if (config.theta_span_lo == -0.5 && config.theta_span_hi == 0.5) {
        config.theta_span_lo = -12.5;
        config.theta_span_hi = 12.5;
    }
    return run_sweep(config);
}

ThresholdReport threshold_study(double theta, const std::vector<long>& n_list,
                                const std::vector<double>& sigma_bar_grid,
                                int records, std::uint64_t seed, int threads) {
    if (records < 2)
        throw std::invalid_argument("threshold_study: need records >= 2");
    ThresholdReport report;
    report.theta = theta;
    report.records = records;

    const UniformQuantizer q{1.0};
    const QuantizerModel model = q;
    const std::size_t n_cells = n_list.size() * sigma_bar_grid.size();
    report.rows.resize(n_cells);

    parallel_for(n_cells, threads, [&](std::size_t cell) {
        const std::size_t i_n = cell / sigma_bar_grid.size();
        const std::size_t i_sb = cell % sigma_bar_grid.size();
        const long n_samples = n_list[i_n];
        const double sigma = sigma_bar_grid[i_sb];

        double acc_mean = 0.0, acc_mle = 0.0;
        double acc_mean2 = 0.0, acc_mle2 = 0.0;
        double acc_diff = 0.0, acc_diff2 = 0.0;
        for (int r = 0; r < records; ++r) {
            const std::uint64_t rs = derive_seed(
                seed, i_n, i_sb, static_cast<std::uint64_t>(r));
            const auto rec =
                synthesize_record(theta, sigma, model, n_samples, rs);
            const auto est_mean =
                run_estimator(EstimatorId::mean, rec, 1.0, model);
            const auto est_mle =
                run_estimator(EstimatorId::mle, rec, 1.0, model);
            const double e_mean =
                (theta - est_mean.theta_hat) * (theta - est_mean.theta_hat);
            const double e_mle =
                (theta - est_mle.theta_hat) * (theta - est_mle.theta_hat);
            acc_mean += e_mean;
            acc_mean2 += e_mean * e_mean;
            acc_mle += e_mle;
            acc_mle2 += e_mle * e_mle;
            const double d = e_mle - e_mean;
            acc_diff += d;
            acc_diff2 += d * d;
        }
        const double r_count = static_cast<double>(records);
        auto se_of = [r_count](double sum, double sum2) {
            const double m = sum / r_count;
            return std::sqrt(std::max(0.0, sum2 / r_count - m * m) / r_count);
        };
        report.rows[cell] = {n_samples,
                             sigma,
                             acc_mean / r_count,
                             acc_mle / r_count,
                             se_of(acc_mean, acc_mean2),
                             se_of(acc_mle, acc_mle2),
                             se_of(acc_diff, acc_diff2)};
    });
    return report;
}

FisherMcReport fisher_mc_validate(const std::vector<double>& theta_over_delta,
                                  double sigma_bar, long runs,
                                  std::uint64_t seed, int threads) {
    if (!(sigma_bar > 0.0))
        throw std::invalid_argument("fisher_mc_validate: sigma_bar must be > 0");
    if (runs < 2)
        throw std::invalid_argument("fisher_mc_validate: need runs >= 2");

    FisherMcReport report;
    report.sigma_bar = sigma_bar;
    report.runs = runs;
    report.rows.resize(theta_over_delta.size());

    // delta = 1; the score of an observed code y is
    // d/dtheta log p(y; theta) = (phi(u) - phi(v)) / (sigma p), with u, v the
    // standardized cell edges.
    parallel_for(theta_over_delta.size(), threads, [&](std::size_t i) {
        const double theta = theta_over_delta[i];
        const double sigma = sigma_bar;
        Rng rng(derive_seed(seed, i));
        double s1 = 0.0, s2 = 0.0, s4 = 0.0;
        for (long r = 0; r < runs; ++r) {
            const double x = theta + sigma * rng.next_gaussian();
            const double y = std::floor(x + 0.5);
            const double u = (y - 0.5 - theta) / sigma;
            const double v = (y + 0.5 - theta) / sigma;
            const double p = normal_interval(u, v);
            const double score =
                (normal_pdf(u) - normal_pdf(v)) / (sigma * p);
            const double sq = score * score;
            s1 += score;
            s2 += sq;      // mean of squared score = empirical information
            s4 += sq * sq; // for its standard error
        }
        const double n = static_cast<double>(runs);
        const double score_mean = s1 / n;
        const double score_var = std::max(0.0, s2 / n - score_mean * score_mean);
        const double info = s2 / n;
        const double info_var = std::max(0.0, s4 / n - info * info);
        report.rows[i] = {theta, info, std::sqrt(info_var / n), score_mean,
                          std::sqrt(score_var / n)};
    });
    return report;
}

// ---------------------------------------------------------------------------
// Report writers
// ---------------------------------------------------------------------------

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << std::setprecision(17);
    return os;
}
} // namespace

void write_sweep_csv(const MseSweepReport& report, const std::string& path) {
    auto os = open_out(path);
    const double delta = model_delta(report.config.quantizer);
    os << "estimator,sigma_bar,theta_over_delta,mse\n";
    for (const auto& row : report.rows)
        os << estimator_name(row.estimator) << ',' << row.sigma_bar << ','
           << row.theta / delta << ',' << row.mse << '\n';
}

void write_ratios_csv(const MseSweepReport& report, const std::string& path) {
    auto os = open_out(path);
    os << "estimator,sigma_bar,avg_mse,rho,degenerate_records\n";
    for (const auto& avg : report.averages)
        os << estimator_name(avg.estimator) << ',' << avg.sigma_bar << ','
           << avg.avg_mse << ',' << avg.rho << ',' << avg.degenerate_count
           << '\n';
}

void write_manifest(const MseSweepReport& report, const std::string& path) {
    auto os = open_out(path);
    const auto& c = report.config;
    os << "tool_version=" << k_version << '\n';
    os << "master_seed=" << c.master_seed << '\n';
    os << "theta_grid_points=" << c.theta_grid_points << '\n';
    os << "records=" << c.records << '\n';
    os << "n_samples=" << c.n_samples << '\n';
    os << "theta_span_lo=" << c.theta_span_lo << '\n';
    os << "theta_span_hi=" << c.theta_span_hi << '\n';
    os << "threads=" << c.threads << '\n';
    os << "quantizer="
       << (std::holds_alternative<UniformQuantizer>(c.quantizer)
               ? "uniform"
               : "tabulated")
       << '\n';
    os << "estimator_model="
       << (!c.estimator_model ? "same"
           : std::holds_alternative<UniformQuantizer>(*c.estimator_model)
               ? "uniform"
               : "tabulated")
       << '\n';
    os << "delta=" << model_delta(c.quantizer) << '\n';
    os << "sigma_bar_grid=";
    for (std::size_t i = 0; i < c.sigma_bar_grid.size(); ++i)
        os << (i ? ";" : "") << c.sigma_bar_grid[i];
    os << '\n';
    os << "estimators=";
    for (std::size_t i = 0; i < c.estimators.size(); ++i)
        os << (i ? ";" : "") << estimator_name(c.estimators[i]);
    os << '\n';
    os << "wall_seconds=" << report.wall_seconds << '\n';
}

} // namespace qdc
