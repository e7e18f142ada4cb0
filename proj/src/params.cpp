#include "cgloop/params.hpp"

#include "cgloop/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace cgloop {

using boost::math::double_constants::pi;

std::string to_string(Phase phase) { return phase == Phase::dilute ? "dilute" : "dense"; }

Phase parse_phase(const std::string& text) {
    if (text == "dilute")
        return Phase::dilute;
    if (text == "dense")
        return Phase::dense;
    throw DomainError("unknown phase '" + text + "' (expected dilute or dense)");
}

Rational ExactPoint::central_charge() const {
    const Rational one(1);
    return one - Rational(6) * (one - g) * (one - g) / g;
}

Rational ExactPoint::background_flux() const { return (Rational(1) - g) / g; }

namespace {

const std::vector<ExactPoint>& registry() {
    static const std::vector<ExactPoint> points = {
        {"dilute n=0 (self-avoiding loops)", make_rational(3, 2), make_rational(0), make_rational(0)},
        {"dilute n=1 (Ising)", make_rational(4, 3), make_rational(1), make_rational(1)},
        {"n=2 (Kosterlitz-Thouless)", make_rational(1), make_rational(4), make_rational(2)},
        {"dense n=sqrt3 (3-state Potts)", make_rational(5, 6), make_rational(3), std::nullopt},
        {"dense n=1 (percolation)", make_rational(2, 3), make_rational(1), make_rational(1)},
        {"dense n=0 (spanning trees)", make_rational(1, 2), make_rational(0), make_rational(0)},
    };
    return points;
}

} // namespace

std::optional<ExactPoint> find_exact_point(double n, Phase phase) {
    constexpr double tol = 1e-12;
    for (const auto& pt : registry()) {
        const double gp = to_double(pt.g);
        const bool dilute_branch = gp >= 1.0;
        const bool phase_matches = dilute_branch ? (phase == Phase::dilute || gp == 1.0) : phase == Phase::dense;
        if (!phase_matches)
            continue;
        const double np = pt.n ? to_double(*pt.n) : std::sqrt(to_double(pt.n_squared));
        if (std::fabs(n - np) < tol)
            return pt;
    }
    return std::nullopt;
}

CGParams params_from_n(double n, Phase phase) {
    if (!(n > -2.0 && n <= 2.0))
        throw DomainError("loop weight n must lie in (-2, 2]");
    CGParams p;
    p.n = n;
    p.phase = phase;
    const double angle = std::acos(std::clamp(n / 2.0, -1.0, 1.0));
    p.chi = phase == Phase::dilute ? -angle : angle;
    p.g = 1.0 - p.chi / pi;
    p.c = 1.0 - 6.0 * (p.chi / pi) * (p.chi / pi) / p.g;
    p.m0 = (1.0 - p.g) / p.g;
    p.exact = find_exact_point(n, phase);
    return p;
}

const std::vector<CGParams>& exact_points() {
    static const std::vector<CGParams> points = [] {
        std::vector<CGParams> out;
        for (const auto& pt : registry()) {
            const double n = pt.n ? to_double(*pt.n) : std::sqrt(to_double(pt.n_squared));
            out.push_back(params_from_n(n, pt.g >= 1 ? Phase::dilute : Phase::dense));
        }
        return out;
    }();
    return points;
}

WrapWeight host_wrap(const CGParams& params) {
    WrapWeight w;
    w.n_prime = params.n;
    w.chi_prime = params.chi;
    if (params.exact)
        w.exact = ExactWrap{params.exact->n_squared, params.exact->n};
    return w;
}

WrapWeight make_wrap(const CGParams& params, double n_prime) {
    if (!(n_prime >= -2.0 && n_prime <= 2.0))
        throw DomainError("wrap weight n' must lie in [-2, 2]");
    WrapWeight w;
    w.n_prime = n_prime;
    const double angle = std::acos(std::clamp(n_prime / 2.0, -1.0, 1.0));
    w.chi_prime = params.phase == Phase::dilute ? -angle : angle;
    if (n_prime == std::round(n_prime)) {
        const Rational r(static_cast<long long>(n_prime));
        w.exact = ExactWrap{r * r, r};
    }
    return w;
}

WrapWeight make_wrap(const CGParams& params, const ExactWrap& exact) {
    const double n = exact.n ? to_double(*exact.n) : std::sqrt(to_double(exact.n_squared));
    WrapWeight w = make_wrap(params, n);
    w.exact = exact;
    return w;
}

double electric_dimension(const CGParams& params, double e) {
    const double a = params.chi / pi;
    return ((e + a) * (e + a) - a * a) / (2.0 * params.g);
}

double leg_exponent(double g, long p) {
    const double pd = static_cast<double>(p);
    return g * pd * pd / 4.0 - (1.0 - g) * pd / 2.0;
}

double leg_exponent(const CGParams& params, long p) { return leg_exponent(params.g, p); }

Rational leg_exponent(const Rational& g, long p) {
    const Rational pr(p);
    return g * pr * pr / 4 - (Rational(1) - g) * pr / 2;
}

namespace {

// Runs the three-term recurrence in any ring; backwards for p < 0.
template <class T, class Mul>
T chebyshev_value(long p, const T& zero, const T& one, Mul times_n) {
    if (p >= 0) {
        T prev = zero; // d_{-1}
        T cur = one;   // d_0
        for (long k = 0; k < p; ++k) {
            T next = times_n(cur) - prev;
            prev = std::move(cur);
            cur = std::move(next);
        }
        return cur;
    }
    // d_{p-1} = n d_p - d_{p+1}
    T next = one; // d_0
    T cur = zero; // d_{-1}
    for (long k = -1; k > p; --k) {
        T prev = times_n(cur) - next;
        next = std::move(cur);
        cur = std::move(prev);
    }
    return cur;
}

std::vector<std::int64_t> poly_times_n(const std::vector<std::int64_t>& a) {
    std::vector<std::int64_t> out(a.size() + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i + 1] = a[i];
    return out;
}

std::vector<std::int64_t> poly_sub(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
    if (a.size() < b.size())
        a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] -= b[i];
    while (a.size() > 1 && a.back() == 0)
        a.pop_back();
    return a;
}

} // namespace

double wrap_coefficient(long p, double n_prime) {
    return chebyshev_value(p, 0.0, 1.0, [&](double v) { return n_prime * v; });
}

std::vector<std::int64_t> chebyshev_polynomial(long p) {
    if (p < 0)
        throw DomainError("chebyshev_polynomial requires p >= 0");
    if (p > 60)
        throw DomainError("chebyshev_polynomial: p > 60 overflows 64-bit coefficients");
    std::vector<std::int64_t> prev{0};
    std::vector<std::int64_t> cur{1};
    for (long k = 0; k < p; ++k) {
        auto next = poly_sub(poly_times_n(cur), prev);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

namespace {

// Negative indices reduce to d_p = -d_{-p-2}.
template <class Eval>
auto signed_index(long p, Eval eval) -> decltype(eval(0L)) {
    if (p >= 0)
        return eval(p);
    if (p == -1)
        return decltype(eval(0L))(0);
    return -eval(-p - 2);
}

Rational eval_even_or_odd(const std::vector<std::int64_t>& poly, const ExactWrap& wrap, bool derivative) {
    // Entries for n'^k; only same-parity powers are nonzero.
    Rational sum(0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
        if (poly[k] == 0)
            continue;
        std::size_t power = k;
        Rational coeff(poly[k]);
        if (derivative) {
            if (k == 0)
                continue;
            coeff *= Rational(static_cast<long long>(k));
            power = k - 1;
        }
        if (wrap.n) {
            Rational term = coeff;
            for (std::size_t i = 0; i < power; ++i)
                term *= *wrap.n;
            sum += term;
        } else {
            if (power % 2 != 0)
                throw DomainError("wrap coefficient is irrational for this n' (odd power of an irrational n')");
            Rational term = coeff;
            for (std::size_t i = 0; i < power / 2; ++i)
                term *= wrap.n_squared;
            sum += term;
        }
    }
    return sum;
}

} // namespace

Rational wrap_coefficient(long p, const ExactWrap& wrap) {
    return signed_index(p, [&](long k) -> Rational {
        if (wrap.n)
            return chebyshev_value(k, Rational(0), Rational(1), [&](const Rational& v) { return *wrap.n * v; });
        return eval_even_or_odd(chebyshev_polynomial(k), wrap, false);
    });
}

double wrap_coefficient_derivative(long p, double n_prime) {
    return signed_index(p, [&](long k) -> double {
        // d'_{k+1} = d_k + n' d'_k - d'_{k-1}
        double d_prev = 0.0, d_cur = 1.0;
        double dd_prev = 0.0, dd_cur = 0.0;
        for (long i = 0; i < k; ++i) {
            const double d_next = n_prime * d_cur - d_prev;
            const double dd_next = d_cur + n_prime * dd_cur - dd_prev;
            d_prev = d_cur;
            d_cur = d_next;
            dd_prev = dd_cur;
            dd_cur = dd_next;
        }
        return dd_cur;
    });
}

Rational wrap_coefficient_derivative(long p, const ExactWrap& wrap) {
    return signed_index(p, [&](long k) -> Rational { return eval_even_or_odd(chebyshev_polynomial(k), wrap, true); });
}

double vortex_marginality_check(const CGParams& params) {
    const double m = params.m0;
    return (params.g / 4.0) * ((m + 2.0) * (m + 2.0) - m * m);
}

} // namespace cgloop
