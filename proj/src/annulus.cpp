#include "cgloop/annulus.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace cgloop {

using boost::math::double_constants::pi;

std::string to_string(Parity parity) {
    switch (parity) {
    case Parity::even:
        return "even";
    case Parity::odd:
        return "odd";
    default:
        return "all";
    }
}

Parity parse_parity(const std::string& text) {
    if (text == "all")
        return Parity::all;
    if (text == "even")
        return Parity::even;
    if (text == "odd")
        return Parity::odd;
    throw DomainError("unknown parity '" + text + "' (expected all, even or odd)");
}

double q_from_ratio(double ratio) { return std::exp(-pi * ratio); }
double q_tilde_from_ratio(double ratio) { return std::exp(-2.0 * pi / ratio); }
double ratio_from_q(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("modulus q must lie in (0, 1)");
    return -std::log(q) / pi;
}

namespace {

bool keep(Parity parity, long p) {
    const bool even = (p % 2) == 0;
    return parity == Parity::all || (parity == Parity::even) == even;
}

template <class K>
Series<K> null_subtracted(const K& g, const K& c, const std::function<K(long)>& weight, Parity parity,
                          const K& cutoff) {
    using traits = ScalarTraits<K>;
    const K shift = -c / K(24);
    if (!traits::below(shift, cutoff))
        throw DomainError("cutoff too small to hold the identity term q^{-c/24}");
    std::vector<Term<K>> terms;
    for (long p = 0;; ++p) {
        const K lead = shift + leg_exponent(g, p);
        if (!traits::below(lead, cutoff)) {
            if (p >= 2)
                break;
            continue;
        }
        if (!keep(parity, p))
            continue;
        const K w = weight(p);
        if (w == K(0))
            continue;
        terms.push_back({lead, w});
        terms.push_back({lead + K(p + 1), -w});
    }
    return divide_by_euler_product(Series<K>(std::move(terms), cutoff));
}

const ExactPoint& require_exact(const CGParams& params) {
    if (!params.exact)
        throw DomainError("exact backend needs a rational-g parameter set (n = 0, 1, 2 dilute or sqrt3, 1, 0 dense)");
    return *params.exact;
}

const ExactWrap& require_exact(const WrapWeight& wrap) {
    if (!wrap.exact)
        throw DomainError("exact backend needs an exact wrap weight");
    return *wrap.exact;
}

// Flux range [lo, hi] over Z with leading exponent below the cutoff.
template <class K>
std::pair<long, long> flux_range(const K& g, const K& shift, const K& cutoff) {
    using traits = ScalarTraits<K>;
    long hi = 0;
    while (hi < 2 || traits::below(shift + leg_exponent(g, hi + 1), cutoff))
        ++hi;
    long lo = 0;
    while (lo > -2 || traits::below(shift + leg_exponent(g, lo - 1), cutoff))
        --lo;
    return {lo, hi};
}

} // namespace

GenSeries flux_series(const CGParams& params, double cutoff, Backend backend, Parity parity,
                      const std::function<Rational(long)>& exact_weight,
                      const std::function<double(long)>& float_weight) {
    if (backend == Backend::exact) {
        const ExactPoint& pt = require_exact(params);
        return null_subtracted<Rational>(pt.g, pt.central_charge(), exact_weight, parity, Rational(cutoff));
    }
    return null_subtracted<double>(params.g, params.c, float_weight, parity, cutoff);
}

GenSeries partition_direct(const CGParams& params, const WrapWeight& wrap, double cutoff, Backend backend,
                           Parity parity) {
    if (backend == Backend::exact) {
        const ExactWrap& ew = require_exact(wrap);
        return flux_series(
            params, cutoff, backend, parity, [&](long p) { return wrap_coefficient(p, ew); }, nullptr);
    }
    const double n_prime = wrap.n_prime;
    return flux_series(params, cutoff, backend, parity, nullptr,
                       [n_prime](long p) { return wrap_coefficient(p, n_prime); });
}

GenSeries partition_direct_integer_sum(const CGParams& params, const WrapWeight& wrap, double cutoff,
                                       Backend backend, Parity parity) {
    auto build = [&](const auto& g, const auto& c, auto weight, const auto& cut) {
        using K = std::decay_t<decltype(g)>;
        const K shift = -c / K(24);
        if (!ScalarTraits<K>::below(shift, cut))
            throw DomainError("cutoff too small to hold the identity term q^{-c/24}");
        const auto [lo, hi] = flux_range<K>(g, shift, cut);
        std::vector<Term<K>> terms;
        for (long p = lo; p <= hi; ++p)
            if (keep(parity, p))
                terms.push_back({shift + leg_exponent(g, p), weight(p)});
        return GenSeries(divide_by_euler_product(Series<K>(std::move(terms), cut)));
    };
    if (backend == Backend::exact) {
        const ExactPoint& pt = require_exact(params);
        const ExactWrap& ew = require_exact(wrap);
        return build(pt.g, pt.central_charge(), [&](long p) { return wrap_coefficient(p, ew); }, Rational(cutoff));
    }
    const double chi = wrap.chi_prime;
    const double s = std::sin(chi);
    return build(
        params.g, params.c,
        [&](long p) {
            const double k = static_cast<double>(p + 1);
            if (std::fabs(s) > 1e-12)
                return std::sin(k * chi) / s;
            return k * std::cos(k * chi) / std::cos(chi);
        },
        cutoff);
}

GenSeries partition_naive(const CGParams& params, const WrapWeight& wrap, double cutoff) {
    const double shift = -params.c / 24.0;
    if (!ScalarTraits<double>::below(shift, cutoff))
        throw DomainError("cutoff too small to hold the identity term q^{-c/24}");
    const auto [lo, hi] = flux_range<double>(params.g, shift, cutoff);
    std::vector<Term<double>> terms;
    for (long p = lo; p <= hi; ++p)
        terms.push_back({shift + leg_exponent(params.g, p),
                         std::cos((static_cast<double>(p) - params.m0) * wrap.chi_prime)});
    return divide_by_euler_product(FloatSeries(std::move(terms), cutoff));
}

double crossed_weight(const CGParams& params, const WrapWeight& wrap, long m) {
    const double x = wrap.chi_prime + 2.0 * pi * static_cast<double>(m);
    const double s = std::sin(wrap.chi_prime);
    const double num = std::sin(x / params.g);
    if (std::fabs(s) > 1e-12)
        return num / s;
    if (std::fabs(num) < 1e-9)
        return std::cos(x / params.g) / (params.g * std::cos(wrap.chi_prime));
    throw DomainError("crossed channel at n' = +-2 with sin(2 pi m/g) != 0 carries ln(qt) terms");
}

GenSeries partition_crossed(const CGParams& params, const WrapWeight& wrap, double cutoff) {
    const double g = params.g;
    const double base = -1.0 / 12.0;
    auto exponent = [&](long m) {
        const double x = wrap.chi_prime + 2.0 * pi * static_cast<double>(m);
        return base + x * x / (2.0 * pi * pi * g);
    };
    if (!ScalarTraits<double>::below(exponent(0), cutoff) && !ScalarTraits<double>::below(exponent(-1), cutoff))
        throw DomainError("cutoff too small to hold the leading crossed-channel term");
    const double prefactor = std::sqrt(2.0 / g);
    std::vector<Term<double>> terms;
    for (long m = 0; ScalarTraits<double>::below(exponent(m), cutoff) || m < 1; ++m)
        if (ScalarTraits<double>::below(exponent(m), cutoff))
            terms.push_back({exponent(m), prefactor * crossed_weight(params, wrap, m)});
    for (long m = -1; ScalarTraits<double>::below(exponent(m), cutoff) || m > -2; --m)
        if (ScalarTraits<double>::below(exponent(m), cutoff))
            terms.push_back({exponent(m), prefactor * crossed_weight(params, wrap, m)});
    FloatSeries theta(std::move(terms), cutoff);
    if (theta.is_zero())
        return theta;
    // prod(1 - qt^{2r})^{-1}
    const FloatSeries euler = euler_inverse_series<double>((cutoff - theta.valuation()) / 2.0).substituted(2.0);
    return theta * euler;
}

ChannelEval duality_check(const CGParams& params, const WrapWeight& wrap, double ratio, double cutoff,
                          double tail_tolerance) {
    if (!(ratio >= 0.2 && ratio <= 5.0))
        throw DomainError("duality_check needs 0.2 <= l/L <= 5 so that both channels converge");
    ChannelEval out;
    out.ratio = ratio;
    out.q = q_from_ratio(ratio);
    out.q_tilde = q_tilde_from_ratio(ratio);
    const Evaluation direct = eval_at(partition_direct(params, wrap, cutoff, Backend::floating), out.q);
    const Evaluation crossed = eval_at(partition_crossed(params, wrap, cutoff), out.q_tilde);
    out.direct_value = direct.value;
    out.crossed_value = crossed.value;
    out.residual = std::fabs(direct.value - crossed.value);
    out.tail_bounds = {direct.tail_bound, crossed.tail_bound};
    const double worst = std::max(direct.tail_bound, crossed.tail_bound);
    if (!(worst < tail_tolerance))
        throw TailBoundError("duality_check: truncation tail exceeds tolerance; raise the cutoff", worst);
    return out;
}

double boundary_g_factor(const CGParams& params) {
    const double g = params.g;
    if (std::fabs(g - 1.0) < 1e-12)
        return std::sqrt(2.0);
    return -std::sqrt(2.0 / g) * std::sin(pi / g) / std::sin(pi * g);
}

LeadingAsymptote leading_asymptote(const CGParams& params, const WrapWeight& wrap) {
    LeadingAsymptote out;
    out.prefactor = std::sqrt(2.0 / params.g) * crossed_weight(params, wrap, 0);
    out.exponent =
        (wrap.chi_prime * wrap.chi_prime - params.chi * params.chi) / (2.0 * pi * pi * params.g);
    out.total_exponent = out.exponent - params.c / 12.0;
    return out;
}

ModulusEval evaluate_partition(const CGParams& params, const WrapWeight& wrap, double q, double cutoff) {
    const double ratio = ratio_from_q(q);
    const Evaluation direct = eval_at(partition_direct(params, wrap, cutoff, Backend::floating), q);
    ModulusEval out{q, direct.value, direct.tail_bound, false};
    if (direct.tail_bound == 0.0)
        return out;
    try {
        const Evaluation crossed = eval_at(partition_crossed(params, wrap, cutoff), q_tilde_from_ratio(ratio));
        if (crossed.tail_bound < direct.tail_bound)
            out = {q, crossed.value, crossed.tail_bound, true};
    } catch (const DomainError&) {
        // n' = +-2 at generic g: only the direct channel is available.
    }
    return out;
}

} // namespace cgloop
