// Acceptance suite: one numbered criterion per function, each printing a
// single PASS/FAIL line plus indented clause details. Run with no arguments
// for the full battery or with a criterion number for one entry. The exit
// code is the number of failed criteria.

#include "qdc/estimators.hpp"
#include "qdc/fisher.hpp"
#include "qdc/ingest.hpp"
#include "qdc/moments.hpp"
#include "qdc/normal.hpp"
#include "qdc/quantizer.hpp"
#include "qdc/rng.hpp"
#include "qdc/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

using namespace qdc;

namespace {

int g_clause_failures = 0;

void clause(bool ok, const char* fmt, ...) {
    if (!ok) ++g_clause_failures;
    std::printf("    [%s] ", ok ? "ok" : "FAILED");
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stdout, fmt, args);
    va_end(args);
    std::printf("\n");
}

bool finish(int id, const char* title, int fails_before) {
    const bool pass = g_clause_failures == fails_before;
    std::printf("criterion %d: %s (%s)\n", id, pass ? "PASS" : "FAIL", title);
    std::fflush(stdout);
    return pass;
}

double wall_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
}

// --------------------------------------------------------------------------
// 1. Fisher information curves against score-variance Monte Carlo
// --------------------------------------------------------------------------
bool criterion_1() {
    const int before = g_clause_failures;
    for (double sb : {0.125, 0.2}) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> grid(201);
        for (int i = 0; i < 201; ++i) grid[i] = i / 200.0;
        const auto rep = fisher_mc_validate(grid, sb, 1000000, 1);
        double worst_z = 0.0;
        int bad = 0;
        for (const auto& r : rep.rows) {
            EstimationScenario s(r.theta_over_delta, sb, 1.0);
            const double theory = fisher_single(s);
            const double diff = std::abs(r.info_empirical - theory);
            // symmetric low-noise cells can have an exactly degenerate
            // score-squared distribution (zero MC error); those compare at
            // floating precision
            if (diff > 3.0 * r.info_se + 1e-9 * theory) ++bad;
            if (r.info_se > 0.0) worst_z = std::max(worst_z, diff / r.info_se);
        }
        const double secs = wall_since(t0);
        clause(bad == 0,
               "sigma_bar=%.3f: all 201 grid points within 3 MC standard "
               "errors at 1e6 runs (worst z=%.2f)",
               sb, worst_z);
        clause(secs < 120.0, "sigma_bar=%.3f runtime %.1fs < 120s", sb, secs);
    }
    return finish(1, "Fisher curve reproduction vs Monte Carlo", before);
}

// --------------------------------------------------------------------------
// 2. Closed-form information extrema
// --------------------------------------------------------------------------
bool criterion_2() {
    const int before = g_clause_failures;
    for (double sb : {0.1, 0.15, 0.2, 0.25}) {
        EstimationScenario s(0.0, sb, 1.0);
        const auto summary = information_summary(s);
        const double max_err =
            std::abs(summary.i_max / fisher_max_approx(s) - 1.0);
        const double min_err =
            std::abs(summary.i_min / fisher_min_approx(s) - 1.0);
        clause(max_err < 0.05,
               "sigma_bar=%.2f: grid max within 5%% of closed form (%.3g)",
               sb, max_err);
        clause(min_err < 0.05,
               "sigma_bar=%.2f: grid min within 5%% of closed form (%.3g)",
               sb, min_err);
    }
    const auto s03 = information_summary(EstimationScenario(0.0, 0.3, 1.0));
    clause(std::abs(s03.rho - 1.53) <= 0.05,
           "max/min information ratio at sigma_bar=0.3: %.4f = 1.53 +- 0.05",
           s03.rho);
    return finish(2, "information extrema approximations", before);
}

// --------------------------------------------------------------------------
// 3. Quantization efficiency
// --------------------------------------------------------------------------
bool criterion_3() {
    const int before = g_clause_failures;
    const double qe_third = quantization_efficiency(1.0 / 3.0);
    clause(std::abs(qe_third - 0.5) <= 0.05,
           "QE(1/3) = %.4f = 0.5 +- 0.05", qe_third);

    const double qe_one = quantization_efficiency(1.0);
    clause(qe_one >= 0.99, "QE(1.0) = %.4f >= 0.99", qe_one);

    bool approx_ok = true;
    double worst = 0.0;
    for (double sb : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
        EstimationScenario s(0.0, sb, 1.0);
        const double approx = fisher_min_approx(s) * sb * sb;
        const double rel =
            std::abs(approx / quantization_efficiency(sb) - 1.0);
        worst = std::max(worst, rel);
        if (rel >= 0.05) approx_ok = false;
    }
    clause(approx_ok,
           "closed-form QE within 5%% of exact grid QE for sigma_bar <= 0.3 "
           "(worst %.3g)",
           worst);
    return finish(3, "quantization efficiency levels", before);
}

// --------------------------------------------------------------------------
// 4. Mean-estimator variance against the biased bound
// --------------------------------------------------------------------------
bool criterion_4() {
    const int before = g_clause_failures;
    int violations = 0;
    double worst_gap = 0.0;
    for (int m = 0; m <= 100; ++m) {
        const double theta = -0.5 + m / 100.0;
        EstimationScenario s(theta, 0.25, 1.0, 1);
        const double var = output_variance(s);
        const double bound = crlb_biased(s);
        if (var < bound) ++violations;
        worst_gap = std::max(worst_gap, (var - bound) / bound);
    }
    clause(violations == 0,
           "variance >= biased bound at all 101 grid points (%d violations)",
           violations);
    clause(worst_gap < 0.03,
           "max relative gap (variance - bound)/bound = %.4f < 0.03",
           worst_gap);
    return finish(4, "mean-estimator optimality evidence at sigma_bar=0.25",
                  before);
}

// --------------------------------------------------------------------------
// 5. Moment-estimator efficiency sweep
// --------------------------------------------------------------------------
bool criterion_5() {
    const int before = g_clause_failures;
    SweepConfig cfg;
    cfg.sigma_bar_grid = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30,
                          0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
    cfg.theta_grid_points = 100;
    cfg.records = 200;
    cfg.n_samples = 500;
    cfg.master_seed = 20250808;
    cfg.estimators = {EstimatorId::mean, EstimatorId::moment};
    const auto rep = run_sweep(cfg);

    bool low_ok = true;
    double worst = 0.0, at_06 = 0.0;
    for (const auto& a : rep.averages) {
        if (a.estimator != EstimatorId::moment) continue;
        if (a.sigma_bar <= 0.351) {
            worst = std::max(worst, a.rho);
            if (a.rho >= 1.0) low_ok = false;
        }
        if (a.sigma_bar == 0.60) at_06 = a.rho;
    }
    clause(low_ok, "rho_M < 1 at every sigma_bar <= 0.35 (worst %.4f)",
           worst);
    clause(at_06 >= 0.9 && at_06 <= 1.1, "rho_M(0.6) = %.4f within [0.9, 1.1]",
           at_06);
    clause(rep.wall_seconds < 600.0, "runtime %.1fs < 600s", rep.wall_seconds);
    return finish(5, "moment-estimator efficiency, N=500 R=200 M=100",
                  before);
}

// --------------------------------------------------------------------------
// 6. MLE efficiency sweep and the small-sample threshold regimes
// --------------------------------------------------------------------------
bool criterion_6() {
    const int before = g_clause_failures;
    {
        SweepConfig cfg;
        cfg.sigma_bar_grid = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30,
                              0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
        cfg.theta_grid_points = 100;
        cfg.records = 400;
        cfg.n_samples = 500;
        cfg.master_seed = 606060;
        cfg.estimators = {EstimatorId::mean, EstimatorId::mle};
        const auto rep = run_sweep(cfg);
        bool low_ok = true;
        double worst = 0.0;
        for (const auto& a : rep.averages) {
            if (a.estimator != EstimatorId::mle) continue;
            if (a.sigma_bar <= 0.351) {
                worst = std::max(worst, a.rho);
                if (a.rho >= 1.0) low_ok = false;
            }
        }
        clause(low_ok, "rho_mle < 1 for sigma_bar <= 0.35 at N=500 R=400 "
                       "(worst %.4f)",
               worst);
    }

    // threshold study at theta = delta/6; extra grid points resolve the
    // N=100 crossing near sigma_bar 0.38
    const std::vector<double> grid = {0.05, 0.10, 0.15, 0.20, 0.25,
                                      0.30, 0.35, 0.38, 0.39, 0.395,
                                      0.40, 0.45, 0.50, 0.55, 0.60};
    const auto th =
        threshold_study(1.0 / 6.0, {10, 100, 500}, grid, 2000, 424242);

    bool overlap_ok = true;
    double overlap_worst = 0.0;
    bool mean_wins_somewhere = false;
    bool n500_ok = true;
    double n500_worst = 0.0;
    for (const auto& r : th.rows) {
        if (r.n_samples == 10) {
            const double band = 3.0 * (r.se_mean + r.se_mle);
            const double diff = std::abs(r.mse_mle - r.mse_mean);
            if (band > 0.0)
                overlap_worst = std::max(overlap_worst, diff / band);
            if (diff > band) overlap_ok = false;
        }
        if (r.n_samples == 100 && r.sigma_bar > 0.25 && r.sigma_bar < 0.40 &&
            r.mse_mean < r.mse_mle)
            mean_wins_somewhere = true;
        if (r.n_samples == 500) {
            const double ratio = r.mse_mle / r.mse_mean;
            n500_worst = std::max(n500_worst, ratio);
            if (ratio > 1.1) n500_ok = false;
        }
    }
    clause(overlap_ok,
           "N=10: mean and MLE MSE curves agree within combined 3-SE MC "
           "bands (worst fraction %.2f)",
           overlap_worst);
    clause(mean_wins_somewhere,
           "N=100: mean MSE < MLE MSE at some grid point inside (0.25, 0.40)");
    clause(n500_ok,
           "N=500: MLE MSE <= 1.1 x mean MSE across the grid (worst ratio "
           "%.4f)",
           n500_worst);
    return finish(6, "MLE efficiency and threshold regimes", before);
}

// --------------------------------------------------------------------------
// 7. Robustness to quantizer nonlinearity
// --------------------------------------------------------------------------
bool criterion_7() {
    const int before = g_clause_failures;
    SweepConfig cfg;
    cfg.sigma_bar_grid = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30,
                          0.35, 0.40, 0.45, 0.50, 0.55, 0.60};
    cfg.theta_grid_points = 50;
    cfg.records = 150;
    cfg.n_samples = 500;
    cfg.master_seed = 777001;
    cfg.estimators = {EstimatorId::mean, EstimatorId::mle};

    cfg.quantizer = gen_inl_uniform(99, 255, 1.0 / 3.0, 1.0);
    const auto inl = nonlinear_robustness(cfg);
    cfg.quantizer = gen_resistor_ladder(99, 256, 1000.0, 150.0, 256.0);
    const auto lad = nonlinear_robustness(cfg);

    int below = 0, total = 0;
    for (const auto& a : inl.averages)
        if (a.estimator == EstimatorId::mle && a.sigma_bar <= 0.401) {
            ++total;
            if (a.rho < 1.0) ++below;
        }
    clause(10 * below >= 7 * total,
           "uniform-INL(1/3): rho_mle < 1 on %d/%d grid points <= 0.4 "
           "(need >= 70%%)",
           below, total);

    double avg_inl = 0.0, avg_lad = 0.0;
    int n_pts = 0;
    for (std::size_t i = 0; i < inl.averages.size(); ++i) {
        if (inl.averages[i].estimator != EstimatorId::mle) continue;
        avg_inl += inl.averages[i].rho;
        avg_lad += lad.averages[i].rho;
        ++n_pts;
    }
    avg_inl /= n_pts;
    avg_lad /= n_pts;
    clause(avg_lad >= avg_inl,
           "ladder rho_mle (avg %.4f) >= uniform-INL rho_mle (avg %.4f) "
           "across matched sigma_bar",
           avg_lad, avg_inl);
    return finish(7, "nonlinear quantizer robustness", before);
}

// --------------------------------------------------------------------------
// 8. Property suites
// --------------------------------------------------------------------------
bool criterion_8() {
    const int before = g_clause_failures;

    // periodicity and symmetry of the information and moment functions
    {
        Rng rng(8801);
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double theta = rng.next_uniform(-0.5, 0.5);
            const double sb = rng.next_uniform(0.12, 0.8);
            EstimationScenario s(theta, sb, 1.0);
            const double f = fisher_single(s);
            const double checks[] = {
                std::abs(fisher_single(s.with_theta(theta + 2.0)) / f - 1.0),
                std::abs(fisher_single(s.with_theta(-theta)) / f - 1.0),
                std::abs(fisher_single(s.with_theta(1.0 - theta)) / f - 1.0),
                std::abs(error_mean(s.with_theta(theta + 1.0)) -
                         error_mean(s)),
                std::abs(error_mean(s.with_theta(-theta)) + error_mean(s)),
                std::abs(error_variance(s.with_theta(theta + 1.0)) -
                         error_variance(s)),
                std::abs(output_variance(s.with_theta(-theta)) -
                         output_variance(s)),
            };
            for (double c : checks) {
                worst = std::max(worst, c);
                if (c > 1e-10) ok = false;
            }
        }
        clause(ok,
               "periodicity/symmetry of information and moments at 1e-10 "
               "(worst %.2e)",
               worst);
    }

    // shift equivariance of the three estimators
    {
        bool ok = true;
        double worst = 0.0;
        const QuantizerModel uq = UniformQuantizer{1.0};
        for (int i = 0; i < 10; ++i) {
            Rng rng(derive_seed(8802, static_cast<std::uint64_t>(i)));
            const double theta = rng.next_uniform(-0.5, 0.5);
            const double sb = rng.next_uniform(0.15, 0.6);
            const long m = static_cast<long>(rng.next_u64() % 9) - 4;
            const auto rec =
                synthesize_record(theta, sb, uq, 300,
                                  derive_seed(8803, static_cast<std::uint64_t>(i)));
            auto shifted = rec;
            for (auto& v : shifted) v += static_cast<double>(m);

            const double d_mean = arithmetic_mean(shifted).theta_hat -
                                  arithmetic_mean(rec).theta_hat -
                                  static_cast<double>(m);
            const double d_mom =
                moment_estimate(arithmetic_mean(shifted).theta_hat,
                                sample_variance(shifted), 1.0)
                    .theta_hat -
                moment_estimate(arithmetic_mean(rec).theta_hat,
                                sample_variance(rec), 1.0)
                    .theta_hat -
                static_cast<double>(m);
            const double d_mle =
                mle_estimate(build_histogram(shifted, 1.0), uq).theta_hat -
                mle_estimate(build_histogram(rec, 1.0), uq).theta_hat -
                static_cast<double>(m);
            for (double d : {d_mean, d_mom, d_mle}) {
                worst = std::max(worst, std::abs(d));
                if (std::abs(d) > 1e-12) ok = false;
            }
        }
        clause(ok,
               "whole-step shift equivariance of mean/moment/MLE at 1e-12 "
               "(worst %.2e)",
               worst);
    }

    // MLE against an exhaustive 2000x2000 lattice on small instances
    {
        const QuantizerModel uq = UniformQuantizer{1.0};
        Rng rng(8805);
        int done = 0;
        std::uint64_t attempt = 0;
        bool ok = true;
        double worst = 0.0;
        while (done < 25) {
            const double theta_true = rng.next_uniform(-0.5, 0.5);
            const double sb = rng.next_uniform(0.25, 0.6);
            const long n = 20 + static_cast<long>(rng.next_u64() % 31);
            const auto rec = synthesize_record(theta_true, sb, uq, n,
                                               derive_seed(8806, attempt++));
            const auto hist = build_histogram(rec, 1.0);
            // a two-cell histogram maximizes along a ridge where the lattice
            // argmax is arbitrary; the oracle needs an identifiable instance
            if (hist.counts().size() < 3) continue;
            ++done;
            const auto rep = mle_estimate(hist, uq);
            double best = -1e300, best_t = 0.0;
            for (int i = 0; i < 2000; ++i) {
                const double t = rep.theta_hat - 1.0 + 2.0 * i / 1999.0;
                for (int j = 0; j < 2000; ++j) {
                    const double s = 0.02 + (2.0 - 0.02) * j / 1999.0;
                    const double ll = log_likelihood(hist, t, s, uq).value;
                    if (ll > best) { best = ll; best_t = t; }
                }
            }
            const double err = std::abs(rep.theta_hat - best_t);
            worst = std::max(worst, err);
            if (err > 1e-3) ok = false;
            if (rep.objective_value.value() < best - 1e-9) ok = false;
        }
        clause(ok,
               "MLE within 1e-3 of a 2000x2000 lattice argmax on 25 small "
               "instances (worst %.2e)",
               worst);
    }

    // moment-solver fixed-point recovery
    {
        Rng rng(8807);
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 25; ++i) {
            const double theta = rng.next_uniform(-0.5, 0.5);
            const double sb = rng.next_uniform(0.3, 0.8);
            EstimationScenario s(theta, sb, 1.0);
            const auto rep = moment_estimate(theta + error_mean(s),
                                             output_variance(s), 1.0);
            const double err = std::abs(rep.theta_hat - theta);
            worst = std::max(worst, err);
            if (err > 1e-8) ok = false;
        }
        clause(ok,
               "moment solver recovers exact moment pairs within 1e-8 "
               "(worst %.2e)",
               worst);
    }

    // analytic derivatives against finite differences
    {
        Rng rng(8808);
        bool ok = true;
        double worst = 0.0;
        const QuantizerModel uq = UniformQuantizer{1.0};
        int checked = 0;
        std::uint64_t attempt = 0;
        while (checked < 20) {
            const double theta_true = rng.next_uniform(-0.5, 0.5);
            const double sb = rng.next_uniform(0.2, 0.7);
            const auto rec = synthesize_record(theta_true, sb, uq, 200,
                                               derive_seed(8809, attempt++));
            const auto hist = build_histogram(rec, 1.0);
            const double theta = theta_true + rng.next_uniform(-0.2, 0.2);
            double analytic = 0.0;
            for (const auto& [code, cnt] : hist.counts()) {
                const double u = (code - 0.5 - theta) / sb;
                const double v = (code + 0.5 - theta) / sb;
                analytic += cnt * (normal_pdf(u) - normal_pdf(v)) /
                            (sb * normal_interval(u, v));
            }
            if (std::abs(analytic) < 1.0) continue;
            ++checked;
            const double h = 1e-6;
            const double fd = (log_likelihood(hist, theta + h, sb, uq).value -
                               log_likelihood(hist, theta - h, sb, uq).value) /
                              (2.0 * h);
            const double rel = std::abs(fd / analytic - 1.0);
            worst = std::max(worst, rel);
            if (rel > 1e-5) ok = false;

            EstimationScenario s(theta, sb, 1.0);
            const double fd_me = (error_mean(s.with_theta(theta + h)) -
                                  error_mean(s.with_theta(theta - h))) /
                                 (2.0 * h);
            const double an_me = error_mean_derivative(s);
            if (std::abs(an_me) > 1e-3) {
                const double rel_me = std::abs(fd_me / an_me - 1.0);
                worst = std::max(worst, rel_me);
                if (rel_me > 1e-5) ok = false;
            }
        }
        clause(ok,
               "log-likelihood score and bias derivative match finite "
               "differences at 1e-5 (worst %.2e)",
               worst);
    }
    return finish(8, "property suites", before);
}

// --------------------------------------------------------------------------
// 9. Capture ingestion pipeline
// --------------------------------------------------------------------------
bool criterion_9() {
    const int before = g_clause_failures;
    const QuantizerModel uq = UniformQuantizer{1.0};

    // offset round trip on synthesized captures
    {
        const std::string path = "/tmp/qdc_acceptance_offset.csv";
        std::ofstream os(path);
        os.precision(17);
        os << "reference_value,record_id,sample\n";
        const double offset = 0.37;
        const double refs[] = {-0.31, -0.05, 0.12, 0.4};
        for (int g = 0; g < 4; ++g)
            for (int r = 0; r < 4; ++r) {
                const auto rec = synthesize_record(
                    refs[g], 0.25, uq, 320,
                    derive_seed(9901, static_cast<std::uint64_t>(g),
                                static_cast<std::uint64_t>(r)));
                for (double v : rec)
                    os << refs[g] << ',' << r << ',' << v + offset << '\n';
            }
        os.close();
        const auto set = load_captures(path, 1.0, OffsetMode::estimate);
        clause(std::abs(set.offset - offset) <= 0.02,
               "estimated offset %.5f recovers 0.37 within 0.02 steps",
               set.offset);
        clause(set.rejected_records == 0, "no records rejected (%ld)",
               set.rejected_records);
        std::remove(path.c_str());
    }

    // seed-aligned captures reproduce the sweep's MSE ratios exactly
    {
        SweepConfig cfg;
        cfg.sigma_bar_grid = {0.3};
        cfg.theta_grid_points = 20;
        cfg.records = 30;
        cfg.n_samples = 200;
        cfg.master_seed = 9902;
        cfg.estimators = {EstimatorId::mean, EstimatorId::moment,
                          EstimatorId::mle};
        const auto sweep = run_sweep(cfg);

        const std::string path = "/tmp/qdc_acceptance_aligned.csv";
        std::ofstream os(path);
        os.precision(17);
        os << "reference_value,record_id,sample\n";
        for (int m = 0; m < cfg.theta_grid_points; ++m) {
            const double theta = sweep.theta_grid[static_cast<std::size_t>(m)];
            for (int r = 0; r < cfg.records; ++r) {
                const auto rec = synthesize_record(
                    theta, 0.3, uq, cfg.n_samples,
                    derive_seed(cfg.master_seed, 0,
                                static_cast<std::uint64_t>(m),
                                static_cast<std::uint64_t>(r)));
                for (double v : rec)
                    os << theta << ',' << r << ',' << v << '\n';
            }
        }
        os.close();
        const auto curve =
            error_curves(load_captures(path, 1.0, OffsetMode::none));
        std::remove(path.c_str());

        double rho_m_sweep = 0.0, rho_mle_sweep = 0.0;
        for (const auto& a : sweep.averages) {
            if (a.estimator == EstimatorId::moment) rho_m_sweep = a.rho;
            if (a.estimator == EstimatorId::mle) rho_mle_sweep = a.rho;
        }
        clause(std::abs(curve.rho_moment / rho_m_sweep - 1.0) < 1e-10,
               "aligned-seed rho_M %.6f reproduces the sweep value %.6f",
               curve.rho_moment, rho_m_sweep);
        clause(std::abs(curve.rho_mle / rho_mle_sweep - 1.0) < 1e-10,
               "aligned-seed rho_mle %.6f reproduces the sweep value %.6f",
               curve.rho_mle, rho_mle_sweep);

        // independent-seed consistency corridor (the ratio estimates at
        // these record counts carry ~10% MC error; 0.3 is a 3-sigma band)
        SweepConfig cfg2 = cfg;
        cfg2.master_seed = 777;
        cfg2.records = 200;
        cfg2.theta_grid_points = 100;
        const auto sweep2 = run_sweep(cfg2);
        double rho_m2 = 0.0, rho_mle2 = 0.0;
        for (const auto& a : sweep2.averages) {
            if (a.estimator == EstimatorId::moment) rho_m2 = a.rho;
            if (a.estimator == EstimatorId::mle) rho_mle2 = a.rho;
        }
        clause(std::abs(curve.rho_moment - rho_m2) < 0.3 * rho_m2,
               "capture-set rho_M %.4f within the MC corridor of an "
               "independent sweep %.4f",
               curve.rho_moment, rho_m2);
        clause(std::abs(curve.rho_mle - rho_mle2) < 0.3 * rho_mle2,
               "capture-set rho_mle %.4f within the MC corridor of an "
               "independent sweep %.4f",
               curve.rho_mle, rho_mle2);
    }
    return finish(9,
                  "capture ingestion: offset round-trip and cross-module "
                  "consistency",
                  before);
}

} // namespace

int main(int argc, char** argv) {
    using CriterionFn = bool (*)();
    const CriterionFn criteria[] = {criterion_1, criterion_2, criterion_3,
                                    criterion_4, criterion_5, criterion_6,
                                    criterion_7, criterion_8, criterion_9};
    int failures = 0;
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        if (id < 1 || id > 9) {
            std::fprintf(stderr, "usage: %s [1..9]\n", argv[0]);
            return 2;
        }
        if (!criteria[id - 1]()) ++failures;
    } else {
        for (const auto& fn : criteria)
            if (!fn()) ++failures;
        std::printf("%d of 9 criteria failed\n", failures);
    }
    return failures;
}
