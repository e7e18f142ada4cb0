#include "cgloop/series.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace cgloop {

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1)
        os << '/' << denominator(r);
    return os.str();
}

Rational parse_rational(const std::string& text) {
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw DomainError("not a rational number: '" + text + "'");
    }
}

std::string to_string(Backend backend) { return backend == Backend::exact ? "exact" : "floating"; }

Backend parse_backend(const std::string& text) {
    if (text == "exact" || text == "exact-rational")
        return Backend::exact;
    if (text == "floating" || text == "float")
        return Backend::floating;
    throw DomainError("unknown backend '" + text + "'");
}

FloatSeries to_floating(const ExactSeries& s) {
    std::vector<Term<double>> terms;
    terms.reserve(s.size());
    for (const auto& t : s)
        terms.push_back({to_double(t.exponent), to_double(t.coefficient)});
    return FloatSeries(std::move(terms), to_double(s.cutoff()));
}

const ExactSeries& GenSeries::exact() const {
    if (auto p = std::get_if<ExactSeries>(&series_))
        return *p;
    throw BackendMismatch("series has floating backend, exact requested");
}

const FloatSeries& GenSeries::floating() const {
    if (auto p = std::get_if<FloatSeries>(&series_))
        return *p;
    throw BackendMismatch("series has exact backend, floating requested");
}

FloatSeries GenSeries::as_floating() const {
    if (auto p = std::get_if<ExactSeries>(&series_))
        return to_floating(*p);
    return std::get<FloatSeries>(series_);
}

double GenSeries::cutoff() const {
    return visit([](const auto& s) { return to_double(s.cutoff()); });
}

double GenSeries::leading_exponent() const {
    return visit([](const auto& s) { return to_double(s.valuation()); });
}

std::size_t GenSeries::size() const {
    return visit([](const auto& s) { return s.size(); });
}

bool GenSeries::is_zero() const {
    return visit([](const auto& s) { return s.is_zero(); });
}

GenSeries GenSeries::shifted(double by) const {
    return visit([&](const auto& s) -> GenSeries {
        using K = typename std::decay_t<decltype(s)>::scalar_type;
        return s.shifted(scalar_cast<K>(by));
    });
}

GenSeries GenSeries::shifted(const Rational& by) const {
    return visit([&](const auto& s) -> GenSeries {
        using K = typename std::decay_t<decltype(s)>::scalar_type;
        return s.shifted(scalar_cast<K>(by));
    });
}

GenSeries GenSeries::scaled(double factor) const {
    return visit([&](const auto& s) -> GenSeries {
        using K = typename std::decay_t<decltype(s)>::scalar_type;
        return s.scaled(scalar_cast<K>(factor));
    });
}

GenSeries GenSeries::operator-() const {
    return visit([](const auto& s) -> GenSeries { return -s; });
}

namespace {

template <class Op>
GenSeries binary(const GenSeries& a, const GenSeries& b, Op op, const char* name) {
    if (a.backend() != b.backend())
        throw BackendMismatch(std::string("series ") + name + ": backend mismatch (" + to_string(a.backend()) +
                              " vs " + to_string(b.backend()) + ")");
    if (a.backend() == Backend::exact)
        return op(a.exact(), b.exact());
    return op(a.floating(), b.floating());
}

} // namespace

GenSeries operator+(const GenSeries& a, const GenSeries& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x + y; }, "add");
}

GenSeries operator-(const GenSeries& a, const GenSeries& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x - y; }, "subtract");
}

GenSeries operator*(const GenSeries& a, const GenSeries& b) {
    return binary(a, b, [](const auto& x, const auto& y) { return x * y; }, "mul");
}

Evaluation eval_at(const GenSeries& s, double q) {
    return s.visit([&](const auto& x) { return eval_at(x, q); });
}

namespace {

// Number of integer exponents k >= 0 with k < cutoff.
template <class K>
long integer_span(const K& cutoff) {
    const double c = to_double(cutoff);
    if (c <= 0.0)
        return 0;
    long n = static_cast<long>(std::ceil(c));
    while (n > 0 && !ScalarTraits<K>::below(K(n - 1), cutoff))
        --n;
    return n;
}

} // namespace

template <class K>
Series<K> euler_inverse_series(const K& cutoff) {
    // Coin-change count over parts 1..N; independent of the pentagonal route.
    const long n = integer_span(cutoff);
    std::vector<boost::multiprecision::cpp_int> count(static_cast<std::size_t>(std::max(n, 1L)), 0);
    if (n > 0)
        count[0] = 1;
    for (long part = 1; part < n; ++part)
        for (long k = part; k < n; ++k)
            count[k] += count[k - part];
    std::vector<Term<K>> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        if constexpr (std::is_same_v<K, Rational>)
            terms.push_back({K(k), Rational(count[k])});
        else
            terms.push_back({K(k), count[k].template convert_to<double>()});
    }
    return Series<K>(std::move(terms), cutoff);
}

template <class K>
Series<K> pentagonal_sum_series(const K& cutoff) {
    std::vector<Term<K>> terms;
    for (long k = 0; ScalarTraits<K>::below(K(k * (3 * k - 1) / 2), cutoff); ++k) {
        const K sign((k % 2 == 0) ? 1 : -1);
        terms.push_back({K(k * (3 * k - 1) / 2), sign});
        if (k > 0)
            terms.push_back({K(k * (3 * k + 1) / 2), sign});
    }
    return Series<K>(std::move(terms), cutoff);
}

template <class K>
Series<K> pentagonal_product_series(const K& cutoff) {
    const long n = integer_span(cutoff);
    Series<K> product = Series<K>::constant(K(1), cutoff);
    for (long r = 1; r < n; ++r) {
        Series<K> factor({Term<K>{K(0), K(1)}, Term<K>{K(r), K(-1)}}, cutoff);
        product = product * factor;
    }
    return product;
}

template <class K>
Series<K> divide_by_euler_product(const Series<K>& s) {
    if (s.is_zero())
        return s;
    Series<K> euler = euler_inverse_series<K>(s.cutoff() - s.valuation());
    return s * euler;
}

template Series<Rational> euler_inverse_series(const Rational&);
template Series<double> euler_inverse_series(const double&);
template Series<Rational> pentagonal_sum_series(const Rational&);
template Series<double> pentagonal_sum_series(const double&);
template Series<Rational> pentagonal_product_series(const Rational&);
template Series<double> pentagonal_product_series(const double&);
template Series<Rational> divide_by_euler_product(const Series<Rational>&);
template Series<double> divide_by_euler_product(const Series<double>&);

namespace {

void require_positive_cutoff(double cutoff) {
    if (!(cutoff > 0.0))
        throw DomainError("series cutoff must be positive");
}

} // namespace

GenSeries euler_inverse(double cutoff, Backend backend) {
    require_positive_cutoff(cutoff);
    if (backend == Backend::exact)
        return euler_inverse_series<Rational>(Rational(cutoff));
    return euler_inverse_series<double>(cutoff);
}

GenSeries pentagonal_series(double cutoff, Backend backend) {
    require_positive_cutoff(cutoff);
    if (backend == Backend::exact)
        return pentagonal_sum_series<Rational>(Rational(cutoff));
    return pentagonal_sum_series<double>(cutoff);
}

GenSeries pentagonal_product(double cutoff, Backend backend) {
    require_positive_cutoff(cutoff);
    if (backend == Backend::exact)
        return pentagonal_product_series<Rational>(Rational(cutoff));
    return pentagonal_product_series<double>(cutoff);
}

GenSeries dedekind_eta_series(double cutoff, Backend backend) {
    if (backend == Backend::exact) {
        const Rational shift(1, 24);
        const Rational c(cutoff);
        if (!(c > shift))
            throw DomainError("eta series cutoff must exceed 1/24");
        return pentagonal_sum_series<Rational>(c - shift).shifted(shift);
    }
    if (!(cutoff > 1.0 / 24.0))
        throw DomainError("eta series cutoff must exceed 1/24");
    return pentagonal_sum_series<double>(cutoff - 1.0 / 24.0).shifted(1.0 / 24.0);
}

double eta_modular_check(double tau_imag, double cutoff, double tolerance) {
    using boost::math::double_constants::pi;
    if (!(tau_imag > 0.0))
        throw DomainError("eta_modular_check requires tau = i*t with t > 0");
    const double delta = 2.0 * pi * tau_imag;
    const double q = std::exp(-delta);
    const double qt = std::exp(-2.0 * pi * pi / delta);

    const FloatSeries euler = euler_inverse_series<double>(cutoff);
    const Evaluation lhs_raw = eval_at(euler, q);
    const double lhs = std::pow(q, -1.0 / 24.0) * lhs_raw.value;

    const FloatSeries crossed = euler.substituted(2.0);
    const Evaluation rhs_raw = eval_at(crossed, qt);
    const double rhs = std::sqrt(delta / (2.0 * pi)) * std::pow(qt, -1.0 / 12.0) * rhs_raw.value;

    const double tail = std::max(lhs_raw.tail_bound / std::fabs(lhs_raw.value),
                                 rhs_raw.tail_bound / std::fabs(rhs_raw.value));
    if (tail > tolerance)
        throw TailBoundError("eta modular check: truncation tail exceeds tolerance", tail);
    return std::fabs(lhs - rhs) / std::fabs(lhs);
}

} // namespace cgloop
