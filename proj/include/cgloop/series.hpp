#pragma once

// Truncated generalized power series in q with exponents of arbitrary sign
// and fractional part. Two backends share one template: exact rationals for
// identity checking, doubles for evaluation at irrational couplings.

#include "cgloop/errors.hpp"
#include "cgloop/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cgloop {

enum class Backend { exact, floating };

std::string to_string(Backend backend);
Backend parse_backend(const std::string& text);

template <class K>
struct Term {
    K exponent;
    K coefficient;

    friend bool operator==(const Term&, const Term&) = default;
};

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr Backend backend = Backend::exact;
    static bool same_exponent(const Rational& a, const Rational& b) { return a == b; }
    static bool below(const Rational& e, const Rational& cutoff) { return e < cutoff; }
    static bool negligible(const Rational& sum, const Rational&) { return sum == 0; }
    static Rational magnitude(const Rational& x) { return abs(x); }
};

template <>
struct ScalarTraits<double> {
    static constexpr Backend backend = Backend::floating;
    // Distinct flux sectors can land on the same exponent at rational g.
    static constexpr double merge_tolerance = 1e-9;
    static constexpr double cancellation = 1e-13;
    static bool same_exponent(double a, double b) { return std::fabs(a - b) < merge_tolerance; }
    static bool below(double e, double cutoff) { return e < cutoff - merge_tolerance; }
    static bool negligible(double sum, double magnitude) {
        return std::fabs(sum) <= cancellation * magnitude;
    }
    static double magnitude(double x) { return std::fabs(x); }
};

template <class K>
K scalar_cast(const Rational& r) {
    if constexpr (std::is_same_v<K, Rational>)
        return r;
    else
        return to_double(r);
}

template <class K>
K scalar_cast(double x) {
    if constexpr (std::is_same_v<K, Rational>)
        return Rational(x);
    else
        return x;
}

/// Invariants: exponents strictly increasing, no zero coefficients, every
/// exponent below the cutoff. Every term with exponent below the cutoff is
/// exact, so the series is a faithful representation up to q^cutoff.
template <class K>
class Series {
  public:
    using scalar_type = K;
    using traits = ScalarTraits<K>;

    Series() : cutoff_(0) {}
    explicit Series(K cutoff) : cutoff_(std::move(cutoff)) {}
    Series(std::vector<Term<K>> terms, K cutoff)
        : terms_(normalize(std::move(terms), cutoff)), cutoff_(std::move(cutoff)) {}

    static Series constant(K value, K cutoff) { return monomial(std::move(value), K(0), std::move(cutoff)); }
    static Series monomial(K coefficient, K exponent, K cutoff) {
        return Series({Term<K>{std::move(exponent), std::move(coefficient)}}, std::move(cutoff));
    }

    const std::vector<Term<K>>& terms() const noexcept { return terms_; }
    const K& cutoff() const noexcept { return cutoff_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    auto begin() const noexcept { return terms_.begin(); }
    auto end() const noexcept { return terms_.end(); }

    /// Smallest exponent present; the cutoff for the zero series.
    const K& valuation() const noexcept { return terms_.empty() ? cutoff_ : terms_.front().exponent; }

    K coefficient_at(const K& exponent) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent, [](const Term<K>& t, const K& e) {
            return t.exponent < e && !traits::same_exponent(t.exponent, e);
        });
        if (it != terms_.end() && traits::same_exponent(it->exponent, exponent))
            return it->coefficient;
        return K(0);
    }

    /// Multiply by q^by.
    Series shifted(const K& by) const {
        Series out(cutoff_ + by);
        out.terms_ = terms_;
        for (auto& t : out.terms_)
            t.exponent += by;
        return out;
    }

    Series scaled(const K& factor) const {
        Series out(cutoff_);
        if (factor == K(0))
            return out;
        out.terms_ = terms_;
        for (auto& t : out.terms_)
            t.coefficient *= factor;
        if constexpr (!std::is_same_v<K, Rational>)
            out.terms_ = normalize(std::move(out.terms_), cutoff_);
        return out;
    }

    /// Substitute q -> q^power.
    Series substituted(const K& power) const {
        if (!(power > K(0)))
            throw DomainError("series substitution requires a positive power");
        Series out(cutoff_ * power);
        out.terms_ = terms_;
        for (auto& t : out.terms_)
            t.exponent *= power;
        return out;
    }

    Series truncated(const K& new_cutoff) const {
        K c = new_cutoff < cutoff_ ? new_cutoff : cutoff_;
        return Series(terms_, c);
    }

    Series operator-() const {
        Series out(cutoff_);
        out.terms_ = terms_;
        for (auto& t : out.terms_)
            t.coefficient = -t.coefficient;
        return out;
    }

    friend Series operator+(const Series& a, const Series& b) {
        K c = a.cutoff_ < b.cutoff_ ? a.cutoff_ : b.cutoff_;
        std::vector<Term<K>> raw;
        raw.reserve(a.size() + b.size());
        raw.insert(raw.end(), a.terms_.begin(), a.terms_.end());
        raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
        return Series(std::move(raw), std::move(c));
    }

    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    /// Cauchy product. The result is exact below
    /// min(a.cutoff + b.valuation, b.cutoff + a.valuation).
    friend Series operator*(const Series& a, const Series& b) {
        K c1 = a.cutoff_ + b.valuation();
        K c2 = b.cutoff_ + a.valuation();
        K c = c1 < c2 ? c1 : c2;
        std::vector<Term<K>> raw;
        for (const auto& ta : a.terms_) {
            if (!traits::below(ta.exponent + b.valuation(), c))
                break;
            for (const auto& tb : b.terms_) {
                K e = ta.exponent + tb.exponent;
                if (!traits::below(e, c))
                    break;
                raw.push_back(Term<K>{std::move(e), ta.coefficient * tb.coefficient});
            }
        }
        return Series(std::move(raw), std::move(c));
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
    }

  private:
    static std::vector<Term<K>> normalize(std::vector<Term<K>> raw, const K& cutoff) {
        std::stable_sort(raw.begin(), raw.end(),
                         [](const Term<K>& x, const Term<K>& y) { return x.exponent < y.exponent; });
        std::vector<Term<K>> out;
        out.reserve(raw.size());
        std::size_t i = 0;
        while (i < raw.size()) {
            K exponent = raw[i].exponent;
            K sum(0);
            K magnitude(0);
            std::size_t j = i;
            for (; j < raw.size() && traits::same_exponent(raw[j].exponent, exponent); ++j) {
                sum += raw[j].coefficient;
                magnitude += traits::magnitude(raw[j].coefficient);
            }
            i = j;
            if (!traits::below(exponent, cutoff))
                break;
            if (traits::negligible(sum, magnitude))
                continue;
            out.push_back(Term<K>{std::move(exponent), std::move(sum)});
        }
        return out;
    }

    std::vector<Term<K>> terms_;
    K cutoff_;
};

using ExactSeries = Series<Rational>;
using FloatSeries = Series<double>;

FloatSeries to_floating(const ExactSeries& s);

/// Backend-tagged series; the value type of every partition function and
/// character in the library.
class GenSeries {
  public:
    GenSeries() : series_(ExactSeries()) {}
    GenSeries(ExactSeries s) : series_(std::move(s)) {}
    GenSeries(FloatSeries s) : series_(std::move(s)) {}

    Backend backend() const noexcept {
        return std::holds_alternative<ExactSeries>(series_) ? Backend::exact : Backend::floating;
    }
    const ExactSeries& exact() const;
    const FloatSeries& floating() const;
    FloatSeries as_floating() const;

    double cutoff() const;
    double leading_exponent() const;
    std::size_t size() const;
    bool is_zero() const;

    template <class F>
    decltype(auto) visit(F&& f) const {
        return std::visit(std::forward<F>(f), series_);
    }

    GenSeries shifted(double by) const;
    /// Exact shift; converted to double for the floating backend.
    GenSeries shifted(const Rational& by) const;
    GenSeries scaled(double factor) const;
    GenSeries operator-() const;

    friend GenSeries operator+(const GenSeries& a, const GenSeries& b);
    friend GenSeries operator-(const GenSeries& a, const GenSeries& b);
    friend GenSeries operator*(const GenSeries& a, const GenSeries& b);
    friend bool operator==(const GenSeries& a, const GenSeries& b) { return a.series_ == b.series_; }

  private:
    std::variant<ExactSeries, FloatSeries> series_;
};

inline GenSeries add(const GenSeries& a, const GenSeries& b) { return a + b; }
inline GenSeries mul(const GenSeries& a, const GenSeries& b) { return a * b; }

struct Evaluation {
    double value = 0.0;
    double tail_bound = 0.0;
};

/// Sum of the retained terms plus a heuristic geometric tail estimate
/// 2 W rho q^E / (1 - rho q). E is the cutoff, W the coefficient magnitude in
/// the last unit window below E (the last coefficient if that window is
/// empty) and rho >= 1 the largest growth ratio between consecutive unit
/// windows among the last eight. Only meaningful when tail_bound is small;
/// q >= 1 throws.
template <class K>
Evaluation eval_at(const Series<K>& s, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("series evaluation requires 0 < q < 1; use the crossed channel near q = 1");
    constexpr int windows = 8;
    long double sum = 0.0L;
    const double cutoff = to_double(s.cutoff());
    double w[windows + 1] = {};
    for (const auto& t : s) {
        const double e = to_double(t.exponent);
        const double c = to_double(t.coefficient);
        sum += static_cast<long double>(c) * std::pow(static_cast<long double>(q), static_cast<long double>(e));
        const double back = cutoff - e;
        if (back > 0.0 && back <= windows + 1)
            w[static_cast<int>(std::ceil(back)) - 1] += std::fabs(c);
    }
    Evaluation out{static_cast<double>(sum), 0.0};
    if (s.is_zero())
        return out;
    double rho = 1.0;
    for (int j = 0; j < windows; ++j)
        if (w[j] > 0.0 && w[j + 1] > 0.0)
            rho = std::max(rho, w[j] / w[j + 1]);
    const double last = w[0] > 0.0 ? w[0] : std::fabs(to_double(s.terms().back().coefficient));
    if (rho * q >= 1.0) {
        out.tail_bound = HUGE_VAL;
        return out;
    }
    out.tail_bound = 2.0 * last * rho * std::pow(q, cutoff) / (1.0 - rho * q);
    return out;
}

Evaluation eval_at(const GenSeries& s, double q);

// Classical q-products. Cutoffs are exponent bounds.

/// prod_{r>=1} (1 - q^r)^{-1} = sum_k p(k) q^k (partition numbers).
template <class K>
Series<K> euler_inverse_series(const K& cutoff);
/// sum_k (-1)^k q^{k(3k-1)/2}, Euler's pentagonal sum.
template <class K>
Series<K> pentagonal_sum_series(const K& cutoff);
/// prod_{r>=1} (1 - q^r) expanded factor by factor.
template <class K>
Series<K> pentagonal_product_series(const K& cutoff);
/// s * prod (1 - q^r)^{-1}, with the Euler factor generated deep enough
/// that the product keeps s's cutoff.
template <class K>
Series<K> divide_by_euler_product(const Series<K>& s);

GenSeries euler_inverse(double cutoff, Backend backend = Backend::exact);
GenSeries pentagonal_series(double cutoff, Backend backend = Backend::exact);
GenSeries pentagonal_product(double cutoff, Backend backend = Backend::exact);
/// q^{1/24} prod (1 - q^r).
GenSeries dedekind_eta_series(double cutoff, Backend backend = Backend::exact);

/// Relative residual of Z0(q) = (delta/2pi)^{1/2} qt^{-1/12} prod (1 - qt^{2r})^{-1}
/// with Z0 = q^{-1/24} prod (1 - q^r)^{-1}, q = e^{-delta}, delta = 2 pi tau_imag,
/// qt = e^{-2 pi^2 / delta}.
double eta_modular_check(double tau_imag, double cutoff = 64.0, double tolerance = 1e-12);

} // namespace cgloop
