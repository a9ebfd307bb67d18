// qdc: quantized-DC estimation toolbox.
//
// Subcommands cover the closed-form moment and information curves, the
// three estimators on sample files, the deterministic Monte Carlo harness
// (sweep / threshold / fisher-mc / nonlinear), capture-file ingestion and
// synthetic nonlinear quantizer generation.

#include "qdc/estimators.hpp"
#include "qdc/fisher.hpp"
#include "qdc/ingest.hpp"
#include "qdc/moments.hpp"
#include "qdc/quantizer.hpp"
#include "qdc/simulate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qdc;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw CLI::RuntimeError("cannot open for writing: " + path, 1);
    os << std::setprecision(17);
    return os;
}

void write_kv_manifest(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& kv) {
    auto os = open_out(path);
    os << "tool_version=" << k_version << '\n';
    for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

std::vector<double> default_sigma_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 12; ++i) g.push_back(0.05 * i);
    return g;
}

std::vector<double> read_sample_column(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CLI::RuntimeError("cannot open: " + path, 1);
    std::vector<double> samples;
    std::string line;
    long line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(line, &pos);
            samples.push_back(v);
        } catch (const std::exception&) {
            if (line_no == 1) continue; // header row
            throw CLI::RuntimeError(path + ": malformed row at line " +
                                        std::to_string(line_no),
                                    1);
        }
    }
    if (samples.empty())
        throw CLI::RuntimeError(path + ": no samples found", 1);
    return samples;
}

void write_estimate_report(std::ostream& os, const EstimateReport& rep) {
    os << "estimator," << estimator_name(rep.estimator_id) << '\n';
    os << "theta_hat," << rep.theta_hat << '\n';
    os << "sigma_hat,";
    if (rep.sigma_hat) os << *rep.sigma_hat;
    os << '\n';
    os << "converged," << (rep.converged ? 1 : 0) << '\n';
    os << "iterations," << rep.iterations << '\n';
    os << "objective,";
    if (rep.objective_value) os << *rep.objective_value;
    os << '\n';
    os << "degenerate," << (rep.degenerate ? 1 : 0) << '\n';
    os << "degenerate_reason," << rep.degenerate_reason << '\n';
}

struct SweepCli {
    std::vector<double> sigma_bars = default_sigma_grid();
    int theta_points = 100;
    int records = 200;
    long n_samples = 500;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_prefix = "sweep";
    std::vector<std::string> estimators = {"mean", "moment", "mle"};
};

// Expand `--config FILE` into the flags it stands for: each `key=value`
// line becomes `--key value...`, inserted in place so later explicit flags
// still override it.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        std::string tok = argv[i];
        std::string file;
        if (tok == "--config" && i + 1 < argc) {
            file = argv[++i];
        } else if (tok.rfind("--config=", 0) == 0) {
            file = tok.substr(9);
        } else {
            out.push_back(std::move(tok));
            continue;
        }
        std::ifstream is(file);
        if (!is) throw CLI::RuntimeError("cannot open config: " + file, 1);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw CLI::RuntimeError(file + ": expected key=value, got '" +
                                            line + "'",
                                        1);
            out.push_back("--" + line.substr(0, eq));
            std::istringstream values(line.substr(eq + 1));
            std::string v;
            while (values >> v) out.push_back(v);
        }
    }
    return out;
}

void add_sweep_options(CLI::App* cmd, SweepCli& s) {
    cmd->option_defaults()->multi_option_policy(
        CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--sigma-bars", s.sigma_bars,
                    "sigma/delta grid points")
        ->capture_default_str();
    cmd->add_option("--theta-points,-M", s.theta_points,
                    "theta grid points per sigma_bar")
        ->capture_default_str();
    cmd->add_option("--records,-R", s.records, "records per cell")
        ->capture_default_str();
    cmd->add_option("--samples,-N", s.n_samples, "samples per record")
        ->capture_default_str();
    cmd->add_option("--seed", s.seed, "master seed")->capture_default_str();
    cmd->add_option("--threads", s.threads, "worker threads")
        ->capture_default_str();
    cmd->add_option("--out-prefix,-o", s.out_prefix,
                    "output prefix for _mse.csv, _ratios.csv, _manifest.txt")
        ->capture_default_str();
    cmd->add_option("--estimators", s.estimators,
                    "subset of mean/moment/mle")
        ->capture_default_str();
}

SweepConfig to_config(const SweepCli& s) {
    SweepConfig cfg;
    cfg.sigma_bar_grid = s.sigma_bars;
    cfg.theta_grid_points = s.theta_points;
    cfg.records = s.records;
    cfg.n_samples = s.n_samples;
    cfg.master_seed = s.seed;
    cfg.threads = s.threads;
    cfg.estimators.clear();
    for (const auto& name : s.estimators) {
        const auto id = estimator_from_name(name);
        if (!id) throw CLI::RuntimeError("unknown estimator: " + name, 1);
        cfg.estimators.push_back(*id);
    }
    return cfg;
}

void emit_sweep_outputs(const MseSweepReport& rep,
                        const std::string& prefix) {
    write_sweep_csv(rep, prefix + "_mse.csv");
    write_ratios_csv(rep, prefix + "_ratios.csv");
    write_manifest(rep, prefix + "_manifest.txt");
    std::cout << "wrote " << prefix << "_mse.csv, " << prefix
              << "_ratios.csv, " << prefix << "_manifest.txt ("
              << rep.wall_seconds << " s)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"estimation of quantized DC values in noise"};
    app.require_subcommand(1);

    // ---- moments -----------------------------------------------------
    auto* cmd_moments = app.add_subcommand(
        "moments", "closed-form error/output moment curves over theta");
    double mo_sigma_bar = 0.4, mo_delta = 1.0;
    int mo_points = 201;
    std::string mo_out = "moments.csv";
    cmd_moments->add_option("--sigma-bar", mo_sigma_bar, "sigma/delta")
        ->capture_default_str();
    cmd_moments->add_option("--delta", mo_delta, "quantization step")
        ->capture_default_str();
    cmd_moments->add_option("--points", mo_points, "theta grid points")
        ->capture_default_str();
    cmd_moments->add_option("--out,-o", mo_out, "output CSV")
        ->capture_default_str();
    cmd_moments->callback([&]() {
        auto os = open_out(mo_out);
        os << "theta,m_e,var_e,var_y\n";
        for (int i = 0; i < mo_points; ++i) {
            const double theta =
                (-0.5 + static_cast<double>(i) / (mo_points - 1)) * mo_delta;
            EstimationScenario s(theta, mo_sigma_bar * mo_delta, mo_delta);
            os << theta << ',' << error_mean(s) << ',' << error_variance(s)
               << ',' << output_variance(s) << '\n';
        }
        std::cout << "wrote " << mo_out << '\n';
    });

    // ---- fisher ------------------------------------------------------
    auto* cmd_fisher = app.add_subcommand(
        "fisher", "normalized per-sample information over theta/delta");
    double fi_sigma_bar = 0.2;
    int fi_points = 201;
    std::string fi_out = "fisher.csv";
    cmd_fisher->add_option("--sigma-bar", fi_sigma_bar, "sigma/delta")
        ->capture_default_str();
    cmd_fisher->add_option("--points", fi_points, "grid points on [0, 1]")
        ->capture_default_str();
    cmd_fisher->add_option("--out,-o", fi_out, "output CSV")
        ->capture_default_str();
    cmd_fisher->callback([&]() {
        auto os = open_out(fi_out);
        os << "theta_over_delta,delta2_I1,delta2_IM,delta2_Im,delta2_Iq,"
              "delta2_Iinf\n";
        EstimationScenario base(0.0, fi_sigma_bar, 1.0);
        const double im = fisher_max_approx(base);
        const double imin = fisher_min_approx(base);
        const double iq = 1.0 / (fi_sigma_bar * fi_sigma_bar + 1.0 / 12.0);
        const double iinf = 1.0 / (fi_sigma_bar * fi_sigma_bar);
        for (int i = 0; i < fi_points; ++i) {
            const double t = static_cast<double>(i) / (fi_points - 1);
            os << t << ',' << fisher_single(base.with_theta(t)) << ',' << im
               << ',' << imin << ',' << iq << ',' << iinf << '\n';
        }
        std::cout << "wrote " << fi_out << '\n';
    });

    // ---- qe ----------------------------------------------------------
    auto* cmd_qe =
        app.add_subcommand("qe", "quantization efficiency vs sigma_bar");
    double qe_min = 0.05, qe_max = 1.0;
    int qe_points = 96;
    std::string qe_out = "qe.csv";
    cmd_qe->add_option("--min", qe_min, "lowest sigma_bar")
        ->capture_default_str();
    cmd_qe->add_option("--max", qe_max, "highest sigma_bar")
        ->capture_default_str();
    cmd_qe->add_option("--points", qe_points, "grid points")
        ->capture_default_str();
    cmd_qe->add_option("--out,-o", qe_out, "output CSV")
        ->capture_default_str();
    cmd_qe->callback([&]() {
        auto os = open_out(qe_out);
        os << "sigma_bar,qe\n";
        for (int i = 0; i < qe_points; ++i) {
            const double sb =
                qe_min + (qe_max - qe_min) * i / (qe_points - 1);
            os << sb << ',' << quantization_efficiency(sb) << '\n';
        }
        std::cout << "wrote " << qe_out << '\n';
    });

    // ---- estimate ------------------------------------------------------
    auto* cmd_est = app.add_subcommand(
        "estimate", "run estimators on a one-column CSV of quantized samples");
    std::string es_input, es_levels, es_out = "estimate.csv";
    std::string es_which = "all";
    double es_delta = 1.0;
    std::optional<double> es_sigma;
    cmd_est->add_option("--input,-i", es_input, "sample CSV")->required();
    cmd_est->add_option("--delta", es_delta, "quantization step")
        ->capture_default_str();
    cmd_est
        ->add_option("--estimator", es_which, "mean, moment, mle or all")
        ->capture_default_str();
    cmd_est->add_option("--levels", es_levels,
                        "transition-level CSV for a tabulated quantizer");
    cmd_est->add_option("--sigma", es_sigma,
                        "known noise standard deviation (moment estimator)");
    cmd_est->add_option("--out,-o", es_out, "output CSV")
        ->capture_default_str();
    cmd_est->callback([&]() {
        const auto samples = read_sample_column(es_input);
        QuantizerModel model = UniformQuantizer{es_delta};
        if (!es_levels.empty())
            model = TabulatedQuantizer::load_csv(es_levels, es_delta);

        std::vector<EstimatorId> which;
        if (es_which == "all")
            which = {EstimatorId::mean, EstimatorId::moment, EstimatorId::mle};
        else if (auto id = estimator_from_name(es_which))
            which = {*id};
        else
            throw CLI::RuntimeError("unknown estimator: " + es_which, 1);

        auto os = open_out(es_out);
        for (const auto id : which) {
            EstimateReport rep;
            switch (id) {
                case EstimatorId::mean:
                    rep = arithmetic_mean(samples);
                    break;
                case EstimatorId::moment:
                    rep = moment_estimate(arithmetic_mean(samples).theta_hat,
                                          samples.size() > 1
                                              ? sample_variance(samples)
                                              : 0.0,
                                          es_delta, es_sigma);
                    break;
                case EstimatorId::mle:
                    rep = mle_estimate(build_histogram(samples, es_delta),
                                       model);
                    break;
            }
            write_estimate_report(os, rep);
        }
        std::cout << "wrote " << es_out << '\n';
    });

    // ---- sweep ---------------------------------------------------------
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "Monte Carlo MSE sweep over (sigma_bar, theta)");
    SweepCli sw;
    add_sweep_options(cmd_sweep, sw);
    cmd_sweep->callback([&]() {
        emit_sweep_outputs(run_sweep(to_config(sw)), sw.out_prefix);
    });

    // ---- nonlinear -------------------------------------------------------
    auto* cmd_nl = app.add_subcommand(
        "nonlinear",
        "MSE sweep with data from a nonlinear quantizer, estimators assuming "
        "the ideal uniform one");
    SweepCli nl;
    nl.estimators = {"mean", "mle"};
    nl.out_prefix = "nonlinear";
    nl.records = 150;
    nl.theta_points = 50;
    add_sweep_options(cmd_nl, nl);
    std::string nl_kind = "inl";
    std::string nl_levels;
    std::uint64_t nl_qseed = 99;
    std::size_t nl_nlevels = 255;
    double nl_bound = 1.0 / 3.0;
    std::size_t nl_resistors = 256;
    double nl_mean_r = 1000.0, nl_sd_r = 150.0;
    cmd_nl->add_option("--kind", nl_kind, "inl, ladder or file")
        ->capture_default_str();
    cmd_nl->add_option("--levels", nl_levels,
                       "transition-level CSV (kind=file)");
    cmd_nl->add_option("--quantizer-seed", nl_qseed, "generator seed")
        ->capture_default_str();
    cmd_nl->add_option("--n-levels", nl_nlevels, "levels (kind=inl)")
        ->capture_default_str();
    cmd_nl->add_option("--inl-bound", nl_bound,
                       "uniform INL bound, fraction of delta (kind=inl)")
        ->capture_default_str();
    cmd_nl->add_option("--resistors", nl_resistors,
                       "resistor count (kind=ladder)")
        ->capture_default_str();
    cmd_nl->add_option("--mean-r", nl_mean_r, "mean resistance, ohm")
        ->capture_default_str();
    cmd_nl->add_option("--sd-r", nl_sd_r, "resistance spread, ohm")
        ->capture_default_str();
    cmd_nl->callback([&]() {
        SweepConfig cfg = to_config(nl);
        if (nl_kind == "inl")
            cfg.quantizer = gen_inl_uniform(nl_qseed, nl_nlevels, nl_bound);
        else if (nl_kind == "ladder")
            cfg.quantizer = gen_resistor_ladder(
                nl_qseed, nl_resistors, nl_mean_r, nl_sd_r,
                static_cast<double>(nl_resistors));
        else if (nl_kind == "file")
            cfg.quantizer = TabulatedQuantizer::load_csv(nl_levels, 1.0);
        else
            throw CLI::RuntimeError("unknown quantizer kind: " + nl_kind, 1);
        emit_sweep_outputs(nonlinear_robustness(std::move(cfg)),
                           nl.out_prefix);
    });

    // ---- threshold -------------------------------------------------------
    auto* cmd_th = app.add_subcommand(
        "threshold", "fixed-theta mean-vs-MLE MSE across record lengths");
    double th_theta = 1.0 / 6.0;
    std::vector<long> th_n = {10, 100, 500};
    std::vector<double> th_grid = default_sigma_grid();
    int th_records = 2000;
    std::uint64_t th_seed = 1;
    int th_threads = 1;
    std::string th_out = "threshold";
    cmd_th->option_defaults()->multi_option_policy(
        CLI::MultiOptionPolicy::TakeLast);
    cmd_th->add_option("--theta", th_theta, "true value, steps")
        ->capture_default_str();
    cmd_th->add_option("--n-list", th_n, "record lengths")
        ->capture_default_str();
    cmd_th->add_option("--sigma-bars", th_grid, "sigma/delta grid")
        ->capture_default_str();
    cmd_th->add_option("--records,-R", th_records, "records per cell")
        ->capture_default_str();
    cmd_th->add_option("--seed", th_seed, "master seed")
        ->capture_default_str();
    cmd_th->add_option("--threads", th_threads, "worker threads")
        ->capture_default_str();
    cmd_th->add_option("--out-prefix,-o", th_out, "output prefix")
        ->capture_default_str();
    cmd_th->callback([&]() {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = threshold_study(th_theta, th_n, th_grid, th_records,
                                         th_seed, th_threads);
        auto os = open_out(th_out + "_mse.csv");
        os << "n_samples,sigma_bar,mse_mean,mse_mle,se_mean,se_mle,diff_se\n";
        for (const auto& r : rep.rows)
            os << r.n_samples << ',' << r.sigma_bar << ',' << r.mse_mean
               << ',' << r.mse_mle << ',' << r.se_mean << ',' << r.se_mle
               << ',' << r.diff_se << '\n';
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        write_kv_manifest(
            th_out + "_manifest.txt",
            {{"theta", std::to_string(th_theta)},
             {"records", std::to_string(th_records)},
             {"master_seed", std::to_string(th_seed)},
             {"wall_seconds", std::to_string(wall)}});
        std::cout << "wrote " << th_out << "_mse.csv, " << th_out
                  << "_manifest.txt (" << wall << " s)\n";
    });

    // ---- fisher-mc -------------------------------------------------------
    auto* cmd_fmc = app.add_subcommand(
        "fisher-mc", "score-variance Monte Carlo check of the information");
    double fmc_sigma_bar = 0.2;
    long fmc_runs = 1000000;
    int fmc_points = 201;
    std::uint64_t fmc_seed = 1;
    int fmc_threads = 1;
    std::string fmc_out = "fisher_mc";
    cmd_fmc->option_defaults()->multi_option_policy(
        CLI::MultiOptionPolicy::TakeLast);
    cmd_fmc->add_option("--sigma-bar", fmc_sigma_bar, "sigma/delta")
        ->capture_default_str();
    cmd_fmc->add_option("--runs", fmc_runs, "draws per theta point")
        ->capture_default_str();
    cmd_fmc->add_option("--points", fmc_points, "theta/delta points on [0,1]")
        ->capture_default_str();
    cmd_fmc->add_option("--seed", fmc_seed, "master seed")
        ->capture_default_str();
    cmd_fmc->add_option("--threads", fmc_threads, "worker threads")
        ->capture_default_str();
    cmd_fmc->add_option("--out-prefix,-o", fmc_out, "output prefix")
        ->capture_default_str();
    cmd_fmc->callback([&]() {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> grid(static_cast<std::size_t>(fmc_points));
        for (int i = 0; i < fmc_points; ++i)
            grid[static_cast<std::size_t>(i)] =
                static_cast<double>(i) / (fmc_points - 1);
        const auto rep = fisher_mc_validate(grid, fmc_sigma_bar, fmc_runs,
                                            fmc_seed, fmc_threads);
        auto os = open_out(fmc_out + "_info.csv");
        os << "theta_over_delta,info_mc,info_se,score_mean,score_se,"
              "info_theory\n";
        for (const auto& r : rep.rows) {
            EstimationScenario s(r.theta_over_delta, fmc_sigma_bar, 1.0);
            os << r.theta_over_delta << ',' << r.info_empirical << ','
               << r.info_se << ',' << r.score_mean << ',' << r.score_se << ','
               << fisher_single(s) << '\n';
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        write_kv_manifest(
            fmc_out + "_manifest.txt",
            {{"sigma_bar", std::to_string(fmc_sigma_bar)},
             {"runs", std::to_string(fmc_runs)},
             {"master_seed", std::to_string(fmc_seed)},
             {"wall_seconds", std::to_string(wall)}});
        std::cout << "wrote " << fmc_out << "_info.csv, " << fmc_out
                  << "_manifest.txt (" << wall << " s)\n";
    });

    // ---- ingest ----------------------------------------------------------
    auto* cmd_ing = app.add_subcommand(
        "ingest", "estimation-error curves from a capture CSV");
    std::string ing_input, ing_out = "ingest";
    double ing_delta = 1.0;
    std::optional<double> ing_offset;
    bool ing_estimate_offset = false;
    cmd_ing->add_option("--input,-i", ing_input,
                        "capture CSV (reference_value,record_id,sample)")
        ->required();
    cmd_ing->add_option("--delta", ing_delta, "quantization step, volts")
        ->capture_default_str();
    cmd_ing->add_option("--offset", ing_offset, "known offset to remove");
    cmd_ing->add_flag("--estimate-offset", ing_estimate_offset,
                      "estimate the offset from the data");
    cmd_ing->add_option("--out-prefix,-o", ing_out, "output prefix")
        ->capture_default_str();
    cmd_ing->callback([&]() {
        if (ing_offset && ing_estimate_offset)
            throw CLI::RuntimeError(
                "--offset and --estimate-offset are exclusive", 1);
        const OffsetMode mode = ing_offset ? OffsetMode::supplied
                                : ing_estimate_offset ? OffsetMode::estimate
                                                      : OffsetMode::none;
        const auto set = load_captures(ing_input, ing_delta, mode,
                                       ing_offset.value_or(0.0));
        for (const auto& note : set.rejections)
            std::cerr << "rejected: " << note << '\n';
        const auto curve = error_curves(set);
        write_error_curve_csv(curve, ing_out + "_curve.csv");
        write_error_summary_csv(curve, ing_out + "_summary.csv");
        std::cout << "wrote " << ing_out << "_curve.csv, " << ing_out
                  << "_summary.csv (offset " << set.offset << ", "
                  << set.rejected_records << " records rejected)\n";
    });

    // ---- genq ------------------------------------------------------------
    auto* cmd_genq = app.add_subcommand(
        "genq", "generate a synthetic nonlinear quantizer level file");
    std::string gq_kind = "inl", gq_out = "quantizer.csv";
    std::uint64_t gq_seed = 1;
    std::size_t gq_nlevels = 255, gq_resistors = 256;
    double gq_bound = 1.0 / 3.0, gq_mean_r = 1000.0, gq_sd_r = 150.0;
    double gq_delta = 1.0;
    cmd_genq->add_option("--kind", gq_kind, "inl or ladder")
        ->capture_default_str();
    cmd_genq->add_option("--seed", gq_seed, "generator seed")
        ->capture_default_str();
    cmd_genq->add_option("--n-levels", gq_nlevels, "levels (kind=inl)")
        ->capture_default_str();
    cmd_genq->add_option("--inl-bound", gq_bound, "uniform INL bound")
        ->capture_default_str();
    cmd_genq->add_option("--resistors", gq_resistors,
                         "resistor count (kind=ladder)")
        ->capture_default_str();
    cmd_genq->add_option("--mean-r", gq_mean_r, "mean resistance, ohm")
        ->capture_default_str();
    cmd_genq->add_option("--sd-r", gq_sd_r, "resistance spread, ohm")
        ->capture_default_str();
    cmd_genq->add_option("--delta", gq_delta, "nominal step")
        ->capture_default_str();
    cmd_genq->add_option("--out,-o", gq_out, "output CSV")
        ->capture_default_str();
    cmd_genq->callback([&]() {
        TabulatedQuantizer q =
            gq_kind == "ladder"
                ? gen_resistor_ladder(gq_seed, gq_resistors, gq_mean_r,
                                      gq_sd_r,
                                      static_cast<double>(gq_resistors) *
                                          gq_delta)
                : gen_inl_uniform(gq_seed, gq_nlevels, gq_bound, gq_delta);
        q.save_csv(gq_out);
        const auto rep = nonlinearity(q);
        std::cout << "wrote " << gq_out << " (max|INL| " << rep.max_abs_inl()
                  << ", max|DNL| " << rep.max_abs_dnl() << ")\n";
    });

    try {
        auto args = expand_config_args(argc, argv);
        // CLI11 consumes the argument vector in reverse order
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return 0;
}
