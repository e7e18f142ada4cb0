#pragma once

#include "cgloop/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cgloop {

enum class Phase { dilute, dense };

std::string to_string(Phase phase);
Phase parse_phase(const std::string& text);

/// Exact data for the critical points where g is rational. n itself may be
/// irrational (Q = 3 has n = sqrt 3); n^2 is always rational here.
struct ExactPoint {
    std::string label;
    Rational g;
    Rational n_squared;
    std::optional<Rational> n;

    Rational central_charge() const; ///< 1 - 6 (1-g)^2 / g
    Rational background_flux() const; ///< (1-g)/g
};

/// Coulomb-gas data for one critical point. chi < 0 on the dilute branch and
/// chi > 0 on the dense one, so g = 1 - chi/pi always.
struct CGParams {
    double n = 0.0;
    Phase phase = Phase::dilute;
    double chi = 0.0;
    double g = 1.0;
    double c = 1.0;
    double m0 = 0.0;
    std::optional<ExactPoint> exact;
};

CGParams params_from_n(double n, Phase phase);

/// The six rational-g points: dilute n = 0, 1, 2 and dense sqrt 3, 1, 0.
const std::vector<CGParams>& exact_points();
std::optional<ExactPoint> find_exact_point(double n, Phase phase);

/// Wrap-weight data for loops encircling the annulus: n' = 2 cos chi', with
/// chi' carrying the sign convention of the host phase.
struct ExactWrap {
    Rational n_squared;
    std::optional<Rational> n;
};

struct WrapWeight {
    double n_prime = 0.0;
    double chi_prime = 0.0;
    std::optional<ExactWrap> exact;
};

/// n' = n, the unmodified partition function.
WrapWeight host_wrap(const CGParams& params);
/// Exact data is attached when n' is an integer.
WrapWeight make_wrap(const CGParams& params, double n_prime);
WrapWeight make_wrap(const CGParams& params, const ExactWrap& exact);

/// x_e = ((e + chi/pi)^2 - (chi/pi)^2) / 2g
double electric_dimension(const CGParams& params, double e);

/// h(p) = g p^2/4 - (1-g) p/2
double leg_exponent(double g, long p);
double leg_exponent(const CGParams& params, long p);
Rational leg_exponent(const Rational& g, long p);

/// d_p = sin((p+1) chi')/sin chi' through d_0 = 1, d_1 = n', d_{p+1} = n' d_p - d_{p-1}.
/// Negative p follow the same recurrence run backwards: d_{-1} = 0, d_{-p-2} = -d_p.
double wrap_coefficient(long p, double n_prime);
/// Exact d_p. Throws DomainError when the value is irrational (odd p with n' irrational).
Rational wrap_coefficient(long p, const ExactWrap& wrap);
/// d/dn' of d_p at the given n'.
double wrap_coefficient_derivative(long p, double n_prime);
Rational wrap_coefficient_derivative(long p, const ExactWrap& wrap);

/// Integer coefficients of d_p as a polynomial in n', lowest power first.
std::vector<std::int64_t> chebyshev_polynomial(long p);

/// (g/4)((m0+2)^2 - m0^2); equals 1 on every valid parameter set.
double vortex_marginality_check(const CGParams& params);

} // namespace cgloop
