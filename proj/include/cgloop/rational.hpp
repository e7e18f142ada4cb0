#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cgloop {

/// Exact rational scalar. Expression templates are off so that `auto`
/// in generic series code always yields a value.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& r);

/// Accepts "p", "p/q" and "-p/q".
Rational parse_rational(const std::string& text);

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

} // namespace cgloop
