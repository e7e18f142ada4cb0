#include "cgloop/observables.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace cgloop {

using boost::math::double_constants::pi;

namespace {

template <class K>
K rat(long num, long den = 1) {
    return scalar_cast<K>(Rational(num, den));
}

// Window of k in Z for which c2 k^2 + ... can fall below the cutoff.
long k_reach(double quadratic, double cutoff) {
    return static_cast<long>(std::sqrt((std::max(cutoff, 0.0) + 4.0) / quadratic)) + 2;
}

template <class K>
Series<K> crossing_impl(const K& cutoff) {
    std::vector<Term<K>> terms;
    const long reach = k_reach(8.0 / 3.0, to_double(cutoff));
    for (long k = -reach; k <= reach; ++k) {
        terms.push_back({rat<K>(8 * k * k - 2 * k, 3), K(1)});
        terms.push_back({rat<K>(8 * k * k + 6 * k + 1, 3), K(-1)});
    }
    return divide_by_euler_product(Series<K>(std::move(terms), cutoff));
}

template <class K>
Series<K> saw_dilute_impl(const K& cutoff) {
    std::vector<Term<K>> terms;
    const long reach = k_reach(1.5, to_double(cutoff));
    for (long k = -reach; k <= reach; ++k) {
        if (k == 0)
            continue;
        const long sign = (k % 2 == 0) ? -1 : 1; // (-1)^{k-1}
        terms.push_back({rat<K>(12 * k * k - 8 * k + 1, 8), K(k * sign)});
    }
    return divide_by_euler_product(Series<K>(std::move(terms), cutoff));
}

template <class K>
DenseSawForms saw_dense_impl(const K& cutoff) {
    const K twelfth = rat<K>(1, 12);
    std::vector<Term<K>> terms;
    const long reach = k_reach(2.0, to_double(cutoff));
    for (long k = -reach; k <= reach; ++k) {
        terms.push_back({rat<K>(16 * k * k - 1, 8), K(1)});
        terms.push_back({rat<K>(16 * k * k - 16 * k + 3, 8), K(-1)});
    }
    Series<K> inner(std::move(terms), cutoff - twelfth);
    const Series<K> series = divide_by_euler_product(inner).shifted(twelfth);

    // prod (1 - t^{2m-1})^2 in t = q^{1/2}
    const K shift = rat<K>(1, 24);
    const K t_cutoff = K(2) * (cutoff + shift);
    Series<K> product = Series<K>::constant(K(1), t_cutoff);
    for (long m = 1; ScalarTraits<K>::below(K(2 * m - 1), t_cutoff); ++m) {
        const Series<K> factor({Term<K>{K(0), K(1)}, Term<K>{K(2 * m - 1), K(-1)}}, t_cutoff);
        product = product * factor * factor;
    }
    const Series<K> closed = product.substituted(rat<K>(1, 2)).shifted(-shift);

    const K common = series.cutoff() < closed.cutoff() ? series.cutoff() : closed.cutoff();
    const Series<K> a = series.truncated(common);
    const Series<K> b = closed.truncated(common);
    if (!(a - b).is_zero())
        throw IdentityError("dense self-avoiding loop: theta sum and product form disagree");
    return {GenSeries(a), GenSeries(b)};
}

template <class K>
Series<K> log_kernel_impl(Phase phase, const K& cutoff) {
    const bool dilute = phase == Phase::dilute;
    const K shift = dilute ? K(0) : rat<K>(1, 12);
    std::vector<Term<K>> terms;
    const long reach = k_reach(dilute ? 6.0 : 2.0, to_double(cutoff));
    for (long k = -reach; k <= reach; ++k) {
        const long w = 2 * k * (2 * k + 1);
        if (w == 0)
            continue;
        const long a = dilute ? 6 * k * k + k : 2 * k * k - k;
        const long b = dilute ? 6 * k * k + 5 * k + 1 : 2 * k * k + 3 * k + 1;
        terms.push_back({K(a), K(w)});
        terms.push_back({K(b), K(-w)});
    }
    Series<K> inner(std::move(terms), cutoff - shift);
    return divide_by_euler_product(inner).shifted(shift);
}

} // namespace

GenSeries crossing_probability(double cutoff, Backend backend) {
    if (!(cutoff > 0.0))
        throw DomainError("crossing_probability: cutoff must be positive");
    if (backend == Backend::exact)
        return crossing_impl<Rational>(Rational(cutoff));
    return crossing_impl<double>(cutoff);
}

CGParams percolation_params() { return params_from_n(1.0, Phase::dense); }

WrapWeight crossing_wrap() { return make_wrap(percolation_params(), 0.0); }

GenSeries wrap_count_generating(const CGParams& params, double n_prime, double cutoff, Backend backend,
                                Parity parity) {
    return partition_direct(params, make_wrap(params, n_prime), cutoff, backend, parity);
}

GenSeries partition_wrap_derivative(const CGParams& params, const WrapWeight& wrap, double cutoff,
                                    Backend backend) {
    if (backend == Backend::exact) {
        if (!wrap.exact)
            throw DomainError("exact backend needs an exact wrap weight");
        const ExactWrap ew = *wrap.exact;
        return flux_series(
            params, cutoff, backend, Parity::all, [ew](long p) { return wrap_coefficient_derivative(p, ew); },
            nullptr);
    }
    const double n_prime = wrap.n_prime;
    return flux_series(params, cutoff, backend, Parity::all, nullptr,
                       [n_prime](long p) { return wrap_coefficient_derivative(p, n_prime); });
}

GenSeries saw_loop_dilute(double cutoff, Backend backend) {
    if (!(cutoff > 0.125))
        throw DomainError("saw_loop_dilute: cutoff must exceed 1/8");
    if (backend == Backend::exact)
        return saw_dilute_impl<Rational>(Rational(cutoff));
    return saw_dilute_impl<double>(cutoff);
}

LogEvaluation eval_at(const LogSeries& s, double qt) {
    const Evaluation r = eval_at(s.regular, qt);
    const Evaluation l = eval_at(s.log_part, qt);
    const double lq = std::log(qt);
    return {r.value + lq * l.value, r.tail_bound + std::fabs(lq) * l.tail_bound};
}

LogSeries partition_crossed_wrap_derivative(const CGParams& params, const WrapWeight& wrap, double cutoff) {
    const double s = std::sin(wrap.chi_prime);
    const double co = std::cos(wrap.chi_prime);
    if (std::fabs(s) < 1e-12)
        throw DomainError("crossed wrap derivative needs sin chi' != 0 (n' != +-2)");
    const double g = params.g;
    const double norm = std::sqrt(2.0 / g) * (-0.5 / s); // d/dn' = -(1/2 sin chi') d/dchi'
    auto exponent = [&](long m) {
        const double x = wrap.chi_prime + 2.0 * pi * static_cast<double>(m);
        return -1.0 / 12.0 + x * x / (2.0 * pi * pi * g);
    };
    std::vector<Term<double>> regular;
    std::vector<Term<double>> log_part;
    auto push = [&](long m) {
        const double e = exponent(m);
        if (!ScalarTraits<double>::below(e, cutoff))
            return false;
        const double x = wrap.chi_prime + 2.0 * pi * static_cast<double>(m);
        regular.push_back({e, norm * (std::cos(x / g) / (g * s) - std::sin(x / g) * co / (s * s))});
        log_part.push_back({e, norm * (std::sin(x / g) / s) * x / (pi * pi * g)});
        return true;
    };
    for (long m = 0; push(m) || m < 1; ++m) {
    }
    for (long m = -1; push(m) || m > -2; --m) {
    }
    FloatSeries reg(std::move(regular), cutoff);
    FloatSeries lp(std::move(log_part), cutoff);
    const double lead = std::min(reg.valuation(), lp.valuation());
    if (!(lead < cutoff))
        throw DomainError("cutoff too small to hold the leading crossed-channel term");
    const FloatSeries euler = euler_inverse_series<double>((cutoff - lead) / 2.0).substituted(2.0);
    return {reg * euler, lp * euler};
}

LogSeries saw_loop_dilute_crossed(double cutoff) {
    const CGParams params = params_from_n(0.0, Phase::dilute);
    return partition_crossed_wrap_derivative(params, make_wrap(params, 0.0), cutoff);
}

DenseSawForms saw_loop_dense(double cutoff, Backend backend) {
    if (!(cutoff > 0.0))
        throw DomainError("saw_loop_dense: cutoff must be positive");
    if (backend == Backend::exact)
        return saw_dense_impl<Rational>(Rational(cutoff));
    return saw_dense_impl<double>(cutoff);
}

GenSeries log_partition_kernel(Phase phase, double cutoff, Backend backend) {
    if (!(cutoff > 0.1))
        throw DomainError("log_partition: cutoff must exceed 1/10");
    if (backend == Backend::exact)
        return log_kernel_impl<Rational>(phase, Rational(cutoff));
    return log_kernel_impl<double>(phase, cutoff);
}

GenSeries log_partition_flux(Phase phase, double cutoff, Backend backend) {
    const CGParams params = params_from_n(0.0, phase);
    const ExactWrap zero{Rational(0), Rational(0)};
    return flux_series(
        params, cutoff, backend, Parity::all,
        [zero](long p) { return wrap_coefficient(p, zero) * Rational(p * p + 2 * p, 4); },
        [](long p) { return wrap_coefficient(p, 0.0) * static_cast<double>(p * p + 2 * p) / 4.0; });
}

GenSeries log_partition(Phase phase, double cutoff) {
    return log_partition_kernel(phase, cutoff, Backend::floating).scaled(dg_dn_at_zero(phase));
}

double dg_dn_at_zero(Phase phase) { return (phase == Phase::dilute ? -1.0 : 1.0) / (2.0 * pi); }

double dc_dn_at_zero(Phase phase) {
    const double g = params_from_n(0.0, phase).g;
    return 6.0 * (1.0 - g * g) / (g * g) * dg_dn_at_zero(phase);
}

LogDecomposition log_sector_at(Phase phase, double q, double cutoff) {
    const CGParams params = params_from_n(0.0, phase);
    const WrapWeight wrap = host_wrap(params);
    const double lq = std::log(q);
    LogDecomposition out;
    out.wrap_term = eval_at(partition_wrap_derivative(params, wrap, cutoff, Backend::floating), q).value;
    const double z = eval_at(partition_direct(params, wrap, cutoff, Backend::floating), q).value;
    out.central_charge_term = -dc_dn_at_zero(phase) / 24.0 * lq * z;
    out.coupling_term = lq * eval_at(log_partition(phase, cutoff), q).value;
    return out;
}

AsymptoteFit asymptote_fit(const std::function<Evaluation(double)>& evaluator, std::pair<double, double> window,
                           int points) {
    const auto [lo, hi] = window;
    if (!(lo > 0.0 && lo < hi && hi < 1.0))
        throw DomainError("asymptote_fit: window must satisfy 0 < lo < hi < 1");
    if (points < 8)
        throw DomainError("asymptote_fit: need at least 8 sample points");
    std::vector<double> xs, ys;
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        const double x = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
        const Evaluation ev = evaluator(x);
        if (!(ev.tail_bound <= 0.01 * std::fabs(ev.value)))
            throw TailBoundError("asymptote_fit: tail bound exceeds 1% of the value in the window", ev.tail_bound);
        if (!(ev.value > 0.0))
            throw FitError("asymptote_fit: non-positive value in the window");
        xs.push_back(std::log(x));
        ys.push_back(std::log(ev.value));
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < points; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= points;
    my /= points;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < points; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    AsymptoteFit fit;
    fit.exponent_fit = sxy / sxx;
    fit.prefactor_fit = std::exp(my - fit.exponent_fit * mx);
    fit.sample_window = window;
    double ss = 0.0;
    for (int i = 0; i < points; ++i) {
        const double r = ys[i] - (my + fit.exponent_fit * (xs[i] - mx));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / points);
    return fit;
}

} // namespace cgloop
