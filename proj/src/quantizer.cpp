#include "qdc/quantizer.hpp"

#include "qdc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qdc {

double quantize_uniform(double x, double delta) {
    if (!std::isfinite(x))
        throw std::invalid_argument("quantize_uniform: x must be finite");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("quantize_uniform: delta must be > 0");
    return delta * std::floor(x / delta + 0.5);
}

double UniformQuantizer::quantize(double x) const {
    return quantize_uniform(x, delta);
}

long UniformQuantizer::code_of(double x) const {
    return static_cast<long>(std::floor(x / delta + 0.5));
}

TabulatedQuantizer::TabulatedQuantizer(std::vector<double> transition_levels,
                                       double nominal_delta,
                                       long code_of_first_level)
    : levels_(std::move(transition_levels)),
      nominal_delta_(nominal_delta),
      first_level_code_(code_of_first_level) {
    if (levels_.empty())
        throw std::invalid_argument("tabulated quantizer needs >= 1 level");
    if (!(nominal_delta_ > 0.0))
        throw std::invalid_argument("nominal_delta must be > 0");
    for (std::size_t i = 0; i + 1 < levels_.size(); ++i)
        if (!(levels_[i] < levels_[i + 1]))
            throw std::invalid_argument(
                "transition levels must be strictly increasing");
}

TabulatedQuantizer::Output TabulatedQuantizer::quantize(double x) const {
    if (!std::isfinite(x))
        throw std::invalid_argument("quantize: x must be finite");
    // upper_bound gives the first level strictly above x, so x on a level
    // belongs to the upper cell: T_i <= x < T_{i+1} -> code i.
    auto it = std::upper_bound(levels_.begin(), levels_.end(), x);
    long code = first_level_code_ - 1 +
                static_cast<long>(std::distance(levels_.begin(), it));
    return {code, static_cast<double>(code) * nominal_delta_};
}

std::pair<double, double> TabulatedQuantizer::bin_edges(long code) const {
    const double inf = std::numeric_limits<double>::infinity();
    long lo_code = lowest_code();
    long hi_code = highest_code();
    if (code <= lo_code) return {-inf, levels_.front()};
    if (code >= hi_code) return {levels_.back(), inf};
    // interior: lower edge T_code, upper edge T_{code+1}
    std::size_t idx = static_cast<std::size_t>(code - first_level_code_);
    return {levels_[idx], levels_[idx + 1]};
}

TabulatedQuantizer TabulatedQuantizer::nominal(long code_of_first_level,
                                               std::size_t n_levels,
                                               double delta) {
    std::vector<double> lv(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k)
        lv[k] = (static_cast<double>(code_of_first_level + static_cast<long>(k)) - 0.5) * delta;
    return TabulatedQuantizer(std::move(lv), delta, code_of_first_level);
}

void TabulatedQuantizer::write_csv(std::ostream& os) const {
    os << "code_index,transition_level\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < levels_.size(); ++k)
        os << (first_level_code_ + static_cast<long>(k)) << ',' << levels_[k]
           << '\n';
}

void TabulatedQuantizer::save_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(os);
}

TabulatedQuantizer TabulatedQuantizer::read_csv(std::istream& is,
                                                double nominal_delta,
                                                const std::string& source) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error(source + ": empty file");
    if (line.find("code_index") == std::string::npos)
        throw std::runtime_error(source + ": missing header row");
    std::vector<double> levels;
    long first_code = 0;
    long expected = 0;
    bool have_first = false;
    long line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string code_str, level_str;
        if (!std::getline(row, code_str, ',') || !std::getline(row, level_str))
            throw std::runtime_error(source + ": malformed row at line " +
                                     std::to_string(line_no));
        std::size_t pos = 0;
        long code;
        double level;
        try {
            code = std::stol(code_str, &pos);
            level = std::stod(level_str);
        } catch (const std::exception&) {
            throw std::runtime_error(source + ": malformed row at line " +
                                     std::to_string(line_no));
        }
        if (!have_first) {
            first_code = code;
            expected = code;
            have_first = true;
        }
        if (code != expected)
            throw std::runtime_error(source +
                                     ": non-contiguous code_index at line " +
                                     std::to_string(line_no));
        ++expected;
        if (!levels.empty() && !(level > levels.back()))
            throw std::runtime_error(
                source + ": transition levels not strictly increasing at line " +
                std::to_string(line_no));
        levels.push_back(level);
    }
    if (levels.empty())
        throw std::runtime_error(source + ": no levels found");
    return TabulatedQuantizer(std::move(levels), nominal_delta, first_code);
}

TabulatedQuantizer TabulatedQuantizer::load_csv(const std::string& path,
                                                double nominal_delta) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_csv(is, nominal_delta, path);
}

double NonlinearityReport::max_abs_inl() const {
    double m = 0.0;
    for (double v : inl) m = std::max(m, std::abs(v));
    return m;
}

double NonlinearityReport::max_abs_dnl() const {
    double m = 0.0;
    for (double v : dnl) m = std::max(m, std::abs(v));
    return m;
}

NonlinearityReport nonlinearity(const TabulatedQuantizer& q) {
    NonlinearityReport rep;
    const auto& lv = q.levels();
    const double d = q.nominal_delta();
    rep.inl.reserve(lv.size());
    for (std::size_t k = 0; k < lv.size(); ++k) {
        long i = q.code_of_first_level() + static_cast<long>(k);
        rep.inl.push_back((lv[k] - q.nominal_level(i)) / d);
    }
    rep.dnl_defined = lv.size() >= 2;
    if (rep.dnl_defined) {
        rep.dnl.reserve(lv.size() - 1);
        for (std::size_t k = 1; k < lv.size(); ++k)
            rep.dnl.push_back((lv[k] - lv[k - 1] - d) / d);
    }
    return rep;
}

TabulatedQuantizer gen_inl_uniform(std::uint64_t seed, std::size_t n_levels,
                                   double bound, double delta) {
    if (n_levels == 0)
        throw std::invalid_argument("gen_inl_uniform: need n_levels >= 1");
    if (!(bound >= 0.0) || bound >= 0.5)
        throw std::invalid_argument(
            "gen_inl_uniform: bound must be in [0, 1/2) to keep the quantizer "
            "monotone");
    // Transition indices straddle code 0 so the range is bipolar.
    long first = -static_cast<long>((n_levels - 1) / 2);
    Rng rng(derive_seed(seed, 0x1171u));
    std::vector<double> lv(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) {
        double u = bound > 0.0 ? rng.next_uniform(-bound, bound) : 0.0;
        long i = first + static_cast<long>(k);
        lv[k] = (static_cast<double>(i) - 0.5 + u) * delta;
    }
    return TabulatedQuantizer(std::move(lv), delta, first);
}

TabulatedQuantizer gen_resistor_ladder(std::uint64_t seed,
                                       std::size_t n_resistors, double mean_r,
                                       double sd_r, double full_scale) {
    if (n_resistors < 2)
        throw std::invalid_argument("gen_resistor_ladder: need >= 2 resistors");
    if (!(mean_r > 0.0))
        throw std::invalid_argument("gen_resistor_ladder: mean_r must be > 0");
    if (sd_r < 0.0)
        throw std::invalid_argument("gen_resistor_ladder: sd_r must be >= 0");
    if (!(full_scale > 0.0))
        throw std::invalid_argument("gen_resistor_ladder: full_scale must be > 0");

    Rng rng(derive_seed(seed, 0x1adde7u));
    std::vector<double> r(n_resistors);
    for (auto& v : r) {
        do {
            v = mean_r + sd_r * rng.next_gaussian();
        } while (!(v > 0.0)); // redraw non-positive resistances
    }
    double total = 0.0;
    for (double v : r) total += v;

    // n resistors -> n-1 interior transitions -> n codes.
    std::vector<double> lv(n_resistors - 1);
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < n_resistors; ++k) {
        cum += r[k];
        lv[k] = full_scale * (cum / total) - full_scale / 2.0;
    }
    // Align transition indices so the bipolar range straddles code 0; exact
    // mid-tread alignment happens for odd n, even n carries an inherent
    // half-step offset.
    long first = 1 - static_cast<long>((n_resistors - 1) / 2);
    double delta = full_scale / static_cast<double>(n_resistors);
    return TabulatedQuantizer(std::move(lv), delta, first);
}

double model_delta(const QuantizerModel& q) {
    return std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>,
                                         UniformQuantizer>)
                return m.delta;
            else
                return m.nominal_delta();
        },
        q);
}

double model_quantize(const QuantizerModel& q, double x) {
    return std::visit(
        [x](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>,
                                         UniformQuantizer>)
                return m.quantize(x);
            else
                return m.quantize(x).level;
        },
        q);
}

std::pair<double, double> model_bin_edges(const QuantizerModel& q, long code) {
    return std::visit([code](const auto& m) { return m.bin_edges(code); }, q);
}

} // namespace qdc
