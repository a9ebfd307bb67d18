#ifndef QDC_QUANTIZER_HPP
#define QDC_QUANTIZER_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qdc {

/// Mid-tread rounding quantizer with step delta and unbounded code range
/// (no saturation). Output is always an integer multiple of delta.
struct UniformQuantizer {
    double delta = 1.0;

    double quantize(double x) const;
    long code_of(double x) const;

    /// Cell of code c is [c*delta - delta/2, c*delta + delta/2).
    std::pair<double, double> bin_edges(long code) const {
        return {(static_cast<double>(code) - 0.5) * delta,
                (static_cast<double>(code) + 0.5) * delta};
    }
};

double quantize_uniform(double x, double delta);

/// Quantizer described by measured transition levels. Level with index i
/// (i = code_of_first_level .. code_of_first_level + n_levels - 1) is the
/// input at which the output switches from code i-1 to code i; its nominal
/// position is (i - 1/2) * nominal_delta. Outputs are nominal reconstruction
/// levels code * nominal_delta.
class TabulatedQuantizer {
public:
    TabulatedQuantizer(std::vector<double> transition_levels,
                       double nominal_delta, long code_of_first_level);

    struct Output {
        long code;
        double level; ///< code * nominal_delta
    };

    /// Convention: code i produced when T_i <= x < T_{i+1}; inputs below the
    /// first level get the lowest code, above the last the highest.
    Output quantize(double x) const;

    long lowest_code() const { return first_level_code_ - 1; }
    long highest_code() const {
        return first_level_code_ + static_cast<long>(levels_.size()) - 1;
    }

    /// Cell boundaries for a code; the two edge cells extend to +/-infinity,
    /// and codes outside the tabulated range are folded into the edge cells.
    std::pair<double, double> bin_edges(long code) const;

    const std::vector<double>& levels() const { return levels_; }
    double nominal_delta() const { return nominal_delta_; }
    long code_of_first_level() const { return first_level_code_; }

    /// Nominal level position (i - 1/2) * delta for transition index i.
    double nominal_level(long i) const {
        return (static_cast<double>(i) - 0.5) * nominal_delta_;
    }

    /// Exact nominal instance: levels at (i - 1/2) * delta.
    static TabulatedQuantizer nominal(long code_of_first_level,
                                      std::size_t n_levels, double delta);

    void save_csv(const std::string& path) const;
    void write_csv(std::ostream& os) const;
    static TabulatedQuantizer load_csv(const std::string& path,
                                       double nominal_delta);
    static TabulatedQuantizer read_csv(std::istream& is, double nominal_delta,
                                       const std::string& source_name);

private:
    std::vector<double> levels_;
    double nominal_delta_;
    long first_level_code_;
};

/// INL_i = (T_i - T_i,nom)/delta, DNL_i = (T_i - T_{i-1} - delta)/delta.
/// dnl has one entry fewer than inl; with fewer than two levels it is empty
/// and dnl_defined is false.
struct NonlinearityReport {
    std::vector<double> inl;
    std::vector<double> dnl;
    bool dnl_defined = false;

    double max_abs_inl() const;
    double max_abs_dnl() const;
};

NonlinearityReport nonlinearity(const TabulatedQuantizer& q);

/// Levels at nominal positions plus i.i.d. uniform perturbations in
/// (-bound, bound) fractions of delta. bound < 1/2 keeps the levels strictly
/// increasing. Transition indices are centered on code 0.
TabulatedQuantizer gen_inl_uniform(std::uint64_t seed, std::size_t n_levels,
                                   double bound, double delta = 1.0);

/// Flash-style ladder: levels at cumulative resistance fractions of
/// full_scale, shifted so the range is centered on 0. Monotone by
/// construction for positive resistances; Gaussian draws that come out
/// non-positive are redrawn.
TabulatedQuantizer gen_resistor_ladder(std::uint64_t seed,
                                       std::size_t n_resistors, double mean_r,
                                       double sd_r, double full_scale);

using QuantizerModel = std::variant<UniformQuantizer, TabulatedQuantizer>;

double model_delta(const QuantizerModel& q);

/// Quantize through either model; tabulated outputs are nominal levels so the
/// result is an integer multiple of the step in both cases.
double model_quantize(const QuantizerModel& q, double x);

std::pair<double, double> model_bin_edges(const QuantizerModel& q, long code);

} // namespace qdc

#endif
