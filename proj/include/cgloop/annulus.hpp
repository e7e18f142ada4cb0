#pragma once

// Scaling-limit annulus partition function of the critical O(n) loop model
// with free boundaries, in the direct channel (series in q = e^{-pi l/L})
// and the crossed channel (series in qt = e^{-2 pi L/l}).

#include "cgloop/params.hpp"
#include "cgloop/series.hpp"

#include <functional>
#include <string>
#include <utility>

namespace cgloop {

enum class Parity { all, even, odd };

std::string to_string(Parity parity);
Parity parse_parity(const std::string& text);

double q_from_ratio(double ratio);
double q_tilde_from_ratio(double ratio);
double ratio_from_q(double q);

struct ChannelEval {
    double ratio = 0.0;
    double q = 0.0;
    double q_tilde = 0.0;
    double direct_value = 0.0;
    double crossed_value = 0.0;
    double residual = 0.0;
    std::pair<double, double> tail_bounds{0.0, 0.0};
};

/// q^{-c/24} prod(1-q^r)^{-1} sum_{p>=0} w(p) (q^{h(p)} - q^{h(p)+p+1}).
/// Each pair is a leg operator minus its null descendant at level p+1. The
/// flux sum can be restricted to even or odd p.
GenSeries flux_series(const CGParams& params, double cutoff, Backend backend, Parity parity,
                      const std::function<Rational(long)>& exact_weight,
                      const std::function<double(long)>& float_weight);

/// Loops winding the annulus carry weight n' (the wrap weight); all others n.
/// Coefficients are d_p(n'), the p = 0 (identity) coefficient is 1.
GenSeries partition_direct(const CGParams& params, const WrapWeight& wrap, double cutoff,
                           Backend backend = Backend::exact, Parity parity = Parity::all);

inline GenSeries partition_direct_parity(const CGParams& params, const WrapWeight& wrap, double cutoff,
                                         Parity parity, Backend backend = Backend::exact) {
    return partition_direct(params, wrap, cutoff, backend, parity);
}

/// Same function written as a flux sum over all p in Z with weights
/// sin((p+1) chi')/sin chi' and no explicit subtraction.
GenSeries partition_direct_integer_sum(const CGParams& params, const WrapWeight& wrap, double cutoff,
                                       Backend backend = Backend::exact, Parity parity = Parity::all);

/// Flux sum with weights cos((p - m0) chi') and no null-state subtraction.
/// Floating backend only.
GenSeries partition_naive(const CGParams& params, const WrapWeight& wrap, double cutoff);

/// (2/g)^{1/2} qt^{-1/12} prod(1-qt^{2r})^{-1}
///   sum_m [sin((chi'+2 pi m)/g)/sin chi'] qt^{(chi'+2 pi m)^2/(2 pi^2 g)}
/// as a floating series in qt; equal to partition_direct under q <-> qt.
GenSeries partition_crossed(const CGParams& params, const WrapWeight& wrap, double cutoff);

/// Weight of the m-th crossed-channel term: sin((chi'+2 pi m)/g)/sin chi',
/// with the derivative-ratio limit when both sines vanish.
double crossed_weight(const CGParams& params, const WrapWeight& wrap, long m);

/// Evaluates both channels at l/L = ratio. Requires 0.2 <= ratio <= 5 and
/// both tails below tail_tolerance.
ChannelEval duality_check(const CGParams& params, const WrapWeight& wrap, double ratio, double cutoff = 64.0,
                          double tail_tolerance = 1e-8);

/// b_0^2 = -(2/g)^{1/2} sin(pi/g)/sin(pi g); sqrt 2 at g = 1 (limit).
double boundary_g_factor(const CGParams& params);

struct LeadingAsymptote {
    double prefactor = 0.0;
    /// (chi'^2 - chi^2)/(2 pi^2 g), relative to the identity channel.
    double exponent = 0.0;
    /// exponent - c/12: the actual leading power of qt.
    double total_exponent = 0.0;
};

LeadingAsymptote leading_asymptote(const CGParams& params, const WrapWeight& wrap);

/// Chooses between the direct and crossed channels by smaller tail bound.
struct ModulusEval {
    double q = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;
    bool crossed = false;
};

ModulusEval evaluate_partition(const CGParams& params, const WrapWeight& wrap, double q, double cutoff = 64.0);

} // namespace cgloop
