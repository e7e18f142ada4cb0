#pragma once

#include "cgloop/annulus.hpp"

#include <functional>
#include <utility>

namespace cgloop {

/// prod(1-q^r)^{-1} sum_k (q^{8k^2/3 - 2k/3} - q^{8k^2/3 + 2k + 1/3}):
/// probability that a percolation cluster joins the two boundaries.
GenSeries crossing_probability(double cutoff, Backend backend = Backend::exact);

/// Percolation parameters (dense n = 1) with wrap weight n' = 0.
CGParams percolation_params();
WrapWeight crossing_wrap();

/// Z at wrap weight n'; polynomial in n' through the d_p.
GenSeries wrap_count_generating(const CGParams& params, double n_prime, double cutoff,
                                Backend backend = Backend::exact, Parity parity = Parity::all);

/// Termwise d/dn' of partition_direct at the given wrap weight.
GenSeries partition_wrap_derivative(const CGParams& params, const WrapWeight& wrap, double cutoff,
                                    Backend backend = Backend::exact);

/// prod(1-q^r)^{-1} sum_k k (-1)^{k-1} q^{3k^2/2 - k + 1/8}: one self-avoiding
/// loop wrapping the annulus, dilute branch.
GenSeries saw_loop_dilute(double cutoff, Backend backend = Backend::exact);

/// A crossed-channel series whose resummation carries a single power of ln qt:
/// value(qt) = regular(qt) + ln(qt) * log_part(qt).
struct LogSeries {
    FloatSeries regular;
    FloatSeries log_part;
};

struct LogEvaluation {
    double value = 0.0;
    double tail_bound = 0.0;
};

LogEvaluation eval_at(const LogSeries& s, double qt);

/// d/dn' of partition_crossed; needs sin chi' != 0.
LogSeries partition_crossed_wrap_derivative(const CGParams& params, const WrapWeight& wrap, double cutoff);

/// Crossed-channel form of saw_loop_dilute; ~ (1/6 pi)|ln qt| - 1/(3 sqrt 3).
LogSeries saw_loop_dilute_crossed(double cutoff);

struct DenseSawForms {
    GenSeries series;      ///< q^{1/12} prod(1-q^r)^{-1} sum_k (q^{2k^2-1/8} - q^{2k^2-2k+3/8})
    GenSeries closed_form; ///< q^{-1/24} prod_{m>=1} (1-q^{m-1/2})^2
};

/// Throws IdentityError when the two forms differ below the cutoff.
DenseSawForms saw_loop_dense(double cutoff, Backend backend = Backend::exact);

/// The ln q sector at n = 0 without the dg/dn constant:
/// 2 q^{-c/24} prod(1-q^r)^{-1} sum_k k(2k+1) (q^{a_k} - q^{b_k}) with
/// (a_k, b_k) = (6k^2+k, 6k^2+5k+1) dilute and (2k^2-k, 2k^2+3k+1) dense.
GenSeries log_partition_kernel(Phase phase, double cutoff, Backend backend = Backend::exact);

/// Same kernel from the flux sum sum_{p>=0} d_p(0) (p^2+2p)/4 (q^{h(p)} - q^{h(p)+p+1}).
GenSeries log_partition_flux(Phase phase, double cutoff, Backend backend = Backend::exact);

/// dg/dn at n = 0 times the kernel: the coefficient of ln q in dZ/dn. Floating.
GenSeries log_partition(Phase phase, double cutoff);

/// dg/dn and dc/dn at n = 0 on the given branch.
double dg_dn_at_zero(Phase phase);
double dc_dn_at_zero(Phase phase);

/// Analytic dZ/dn at n = 0 (wrap weight tied to n): wrap-derivative term,
/// -(dc/dn)/24 ln q Z and dg/dn ln q kernel.
struct LogDecomposition {
    double wrap_term = 0.0;
    double central_charge_term = 0.0;
    double coupling_term = 0.0;
    double total() const { return wrap_term + central_charge_term + coupling_term; }
};

LogDecomposition log_sector_at(Phase phase, double q, double cutoff = 64.0);

struct AsymptoteFit {
    double exponent_fit = 0.0;
    double prefactor_fit = 0.0;
    std::pair<double, double> sample_window{0.0, 0.0};
    double residual = 0.0;
};

/// Least squares of ln value against ln modulus on `points` log-spaced
/// samples. Refuses (TailBoundError) when a tail exceeds 1% of its value.
AsymptoteFit asymptote_fit(const std::function<Evaluation(double)>& evaluator, std::pair<double, double> window,
                           int points = 16);

} // namespace cgloop
