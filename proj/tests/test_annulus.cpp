#include "cgloop/annulus.hpp"

#include "cgloop/characters.hpp"
#include "cgloop/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cgloop;

namespace {

constexpr double pi = 3.14159265358979323846;

ExactSeries constant(long v, double cut) { return ExactSeries::constant(Rational(v), Rational(cut)); }

const CGParams& point(double n, Phase ph) {
    static std::vector<CGParams> cache;
    for (const auto& p : cache)
        if (p.n == n && p.phase == ph)
            return p;
    cache.push_back(params_from_n(n, ph));
    return cache.back();
}

} // namespace

TEST_CASE("exact special cases") {
    const auto& saw = point(0.0, Phase::dilute);
    CHECK(partition_direct(saw, host_wrap(saw), 40).exact() == constant(1, 40));

    const auto& perc = point(1.0, Phase::dense);
    CHECK(partition_direct(perc, host_wrap(perc), 40).exact() == constant(2, 40));
    CHECK(partition_direct(perc, host_wrap(perc), 40, Backend::exact, Parity::even).exact() == constant(1, 40));
    CHECK(partition_direct(perc, host_wrap(perc), 40, Backend::exact, Parity::odd).exact() == constant(1, 40));

    const auto& trees = point(0.0, Phase::dense);
    CHECK(partition_direct(trees, host_wrap(trees), 40).is_zero());
}

TEST_CASE("floating backend reproduces the exact special cases") {
    const auto& saw = point(0.0, Phase::dilute);
    const GenSeries z = partition_direct(saw, host_wrap(saw), 30, Backend::floating);
    REQUIRE(z.size() == 1);
    CHECK(z.floating().terms()[0].coefficient == doctest::Approx(1.0));
    CHECK(std::fabs(eval_at(z, 0.3).value - 1.0) <= eval_at(z, 0.3).tail_bound + 1e-14);
}

TEST_CASE("identity normalization and backend agreement") {
    for (const auto& p : exact_points()) {
        const WrapWeight w = host_wrap(p);
        const bool odd_ok = p.exact->n.has_value();
        const Parity parity = odd_ok ? Parity::all : Parity::even;
        const GenSeries ex = partition_direct(p, w, 30, Backend::exact, parity);
        const GenSeries fl = partition_direct(p, w, 30, Backend::floating, parity);
        const Rational lead = -p.exact->central_charge() / 24;
        if (!ex.is_zero())
            CHECK(ex.exact().coefficient_at(lead) != 0);
        const FloatSeries conv = ex.as_floating();
        CHECK(conv.size() == fl.floating().size());
        for (double q : {0.05, 0.2, 0.4})
            CHECK(eval_at(conv, q).value == doctest::Approx(eval_at(fl, q).value).epsilon(1e-12));
    }
    // The p = 0 coefficient is 1 before any cancellation.
    const auto nz = params_from_n(0.37, Phase::dilute);
    const GenSeries z = partition_direct(nz, host_wrap(nz), 10, Backend::floating);
    CHECK(z.floating().terms()[0].exponent == doctest::Approx(-nz.c / 24));
    CHECK(z.floating().terms()[0].coefficient == doctest::Approx(1.0));
}

TEST_CASE("integer coefficients at integer n") {
    for (const auto& p : exact_points()) {
        if (!p.exact->n)
            continue;
        const GenSeries z = partition_direct(p, host_wrap(p), 30);
        for (const auto& t : z.exact())
            CHECK(is_integer(t.coefficient));
    }
}

TEST_CASE("flux sum over Z equals the null-subtracted p >= 0 form") {
    for (const auto& p : exact_points()) {
        for (long np : {-1L, 0L, 1L, 2L}) {
            const WrapWeight w = make_wrap(p, static_cast<double>(np));
            CHECK(partition_direct_integer_sum(p, w, 30).exact() == partition_direct(p, w, 30).exact());
        }
    }
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.9, 1.999);
    for (int i = 0; i < 10; ++i) {
        const auto p = params_from_n(dist(rng), i % 2 ? Phase::dense : Phase::dilute);
        const auto w = make_wrap(p, dist(rng));
        const auto a = eval_at(partition_direct_integer_sum(p, w, 40, Backend::floating), 0.3);
        const auto b = eval_at(partition_direct(p, w, 40, Backend::floating), 0.3);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-11));
    }
    // n' = 2 goes through the Chebyshev limit d_p = p + 1.
    const auto p = params_from_n(1.2, Phase::dense);
    const auto w = make_wrap(p, 2.0);
    CHECK(eval_at(partition_direct_integer_sum(p, w, 40, Backend::floating), 0.2).value ==
          doctest::Approx(eval_at(partition_direct(p, w, 40, Backend::floating), 0.2).value).epsilon(1e-12));
}

TEST_CASE("null subtraction pairs before the Euler factor") {
    const auto& ising = point(1.0, Phase::dilute);
    const Rational g = ising.exact->g;
    const Rational shift = -ising.exact->central_charge() / 24;
    const ExactWrap one = *host_wrap(ising).exact;
    const GenSeries pairs = flux_series(
        ising, 30, Backend::exact, Parity::all, [&](long p) { return wrap_coefficient(p, one); }, nullptr);
    // Undo the Euler factor and compare to the explicit pair list.
    const ExactSeries raw = pairs.exact() * pentagonal_sum_series<Rational>(Rational(40));
    std::vector<Term<Rational>> expect;
    for (long p = 0; p < 12; ++p) {
        const Rational h = shift + leg_exponent(g, p);
        expect.push_back({h, wrap_coefficient(p, one)});
        expect.push_back({h + Rational(p + 1), -wrap_coefficient(p, one)});
    }
    CHECK(raw == ExactSeries(std::move(expect), raw.cutoff()));
}

TEST_CASE("chi' = chi reproduces the unmodified partition function") {
    for (const auto& p : exact_points()) {
        if (!p.exact->n)
            continue;
        const WrapWeight a = host_wrap(p);
        const WrapWeight b = make_wrap(p, p.n);
        CHECK(a.chi_prime == doctest::Approx(b.chi_prime).epsilon(1e-14));
        CHECK(partition_direct(p, a, 25) == partition_direct(p, b, 25));
    }
}

TEST_CASE("three-state Potts sectors") {
    const auto& potts = point(std::sqrt(3.0), Phase::dense);
    REQUIRE(potts.exact);
    const GenSeries even = partition_direct_parity(potts, host_wrap(potts), 40, Parity::even);
    const CharacterSpec c11{5, 6, 1, 1}, c13{5, 6, 1, 3}, c15{5, 6, 1, 5};
    const GenSeries expect = rocha_caridi(c11, 40) + (rocha_caridi(c13, 40) + rocha_caridi(c13, 40)) +
                             rocha_caridi(c15, 40);
    CHECK(even == expect);

    CHECK_THROWS_AS(partition_direct_parity(potts, host_wrap(potts), 40, Parity::odd), DomainError);
    const GenSeries odd = partition_direct_parity(potts, host_wrap(potts), 40, Parity::odd, Backend::floating);
    const auto& lead = odd.floating().terms().front();
    CHECK(lead.exponent == doctest::Approx(1.0 / 8 - potts.c / 24));
    CHECK(lead.coefficient == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("naive partition function") {
    const auto& ising = point(1.0, Phase::dilute);
    const GenSeries z = partition_naive(ising, host_wrap(ising), 10);
    REQUIRE(z.size() >= 3);
    // Second exponent comes from p = -1 in the dilute phase.
    const double second = z.floating().terms()[1].exponent + ising.c / 24;
    CHECK(second == doctest::Approx(leg_exponent(ising, -1)));
    CHECK(leg_exponent(ising, -1) < leg_exponent(ising, 1));

    const auto& xy = point(2.0, Phase::dilute);
    CHECK(xy.m0 == 0.0);
    const GenSeries zx = partition_naive(xy, host_wrap(xy), 6);
    const GenSeries zi = partition_direct_integer_sum(xy, host_wrap(xy), 6, Backend::floating);
    // All naive weights are cos 0 = 1.
    const FloatSeries flux = zx.floating() * pentagonal_sum_series<double>(6.0 + 1.0 / 24);
    for (const auto& t : flux)
        CHECK(t.coefficient == doctest::Approx(std::round(t.coefficient)));
    CHECK(zx.size() > 0);
    CHECK(zi.size() > 0);
}

TEST_CASE("crossed channel structure") {
    for (const auto& p : exact_points()) {
        if (std::fabs(p.g - 1.0) < 1e-12)
            continue;
        const WrapWeight w = host_wrap(p);
        CHECK(crossed_weight(p, w, 0) == doctest::Approx(std::sin(p.chi / p.g) / std::sin(p.chi)));
        // Exponents relative to the identity are the even electric dimensions.
        for (long m = -2; m <= 2; ++m) {
            const double x = p.chi + 2 * pi * m;
            const double e = (x * x - p.chi * p.chi) / (2 * pi * pi * p.g);
            CHECK(e == doctest::Approx(electric_dimension(p, 2.0 * m)).epsilon(1e-12));
        }
        const LeadingAsymptote a = leading_asymptote(p, w);
        CHECK(a.exponent == doctest::Approx(0.0));
        CHECK(a.total_exponent == doctest::Approx(-p.c / 12));
    }
    const auto& ising = point(1.0, Phase::dilute);
    const GenSeries zc = partition_crossed(ising, host_wrap(ising), 10);
    CHECK(zc.floating().terms()[0].exponent == doctest::Approx(-ising.c / 12));
    CHECK(zc.floating().terms()[0].coefficient == doctest::Approx(boundary_g_factor(ising)));
}

TEST_CASE("boundary g-factor") {
    CHECK(std::fabs(boundary_g_factor(point(1.0, Phase::dilute)) - 1.0) < 1e-12);
    CHECK(boundary_g_factor(point(1.0, Phase::dense)) == doctest::Approx(2.0).epsilon(1e-13));
    // g = 3/2: -(4/3)^{1/2} sin(2 pi/3)/sin(3 pi/2) = 1
    CHECK(boundary_g_factor(point(0.0, Phase::dilute)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(boundary_g_factor(point(0.0, Phase::dense)) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(boundary_g_factor(point(2.0, Phase::dilute)) == doctest::Approx(std::sqrt(2.0)));
    const double g9 = boundary_g_factor(params_from_n(2.0 * std::cos(1e-4), Phase::dilute));
    // Continuous through g = 1; the deviation is linear in g - 1.
    CHECK(g9 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("percolation leading asymptote") {
    const auto& perc = point(1.0, Phase::dense);
    const WrapWeight w = make_wrap(perc, 0.0);
    const LeadingAsymptote a = leading_asymptote(perc, w);
    CHECK(a.exponent == doctest::Approx(5.0 / 48).epsilon(1e-13));
    CHECK(a.prefactor == doctest::Approx(std::sqrt(1.5)).epsilon(1e-13));
    CHECK(a.total_exponent == doctest::Approx(5.0 / 48));
}

TEST_CASE("duality across exact points and ratios") {
    for (const auto& p : exact_points()) {
        for (double r : {0.5, 1.0, 2.0}) {
            const ChannelEval ev = duality_check(p, host_wrap(p), r);
            CHECK(ev.residual < 1e-8);
            CHECK(ev.q == doctest::Approx(std::exp(-pi * r)));
            CHECK(ev.q_tilde == doctest::Approx(std::exp(-2 * pi / r)));
        }
    }
    const auto irr = params_from_n(1.5, Phase::dilute);
    CHECK(duality_check(irr, make_wrap(irr, 0.6), 0.7).residual < 1e-6);
    CHECK(duality_check(irr, make_wrap(irr, -1.2), 1.6).residual < 1e-6);
}

TEST_CASE("duality on random parameters and wrap weights") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> nd(-1.9, 1.95);
    std::uniform_real_distribution<double> rd(0.4, 2.5);
    for (int i = 0; i < 25; ++i) {
        const auto p = params_from_n(nd(rng), i % 2 ? Phase::dense : Phase::dilute);
        const auto w = make_wrap(p, nd(rng));
        CHECK(duality_check(p, w, rd(rng)).residual < 1e-8);
    }
}

TEST_CASE("duality at n' = 2 through the limiting weights") {
    const auto& xy = point(2.0, Phase::dilute);
    CHECK(duality_check(xy, host_wrap(xy), 1.0).residual < 1e-8);
    const auto p = params_from_n(1.0, Phase::dilute);
    CHECK_THROWS_AS(partition_crossed(p, make_wrap(p, 2.0), 20), DomainError);
}

TEST_CASE("duality preconditions") {
    const auto& ising = point(1.0, Phase::dilute);
    CHECK_THROWS_AS(duality_check(ising, host_wrap(ising), 0.1), DomainError);
    CHECK_THROWS_AS(duality_check(ising, host_wrap(ising), 6.0), DomainError);
    CHECK_THROWS_AS(duality_check(ising, host_wrap(ising), 5.0, 8.0), TailBoundError);
}

TEST_CASE("cutoff too small") {
    const auto& trees = point(0.0, Phase::dense);
    CHECK_THROWS_AS(partition_direct(trees, host_wrap(trees), 1.0 / 24), DomainError);
}

TEST_CASE("evaluate_partition picks the converging channel") {
    const auto& perc = point(1.0, Phase::dense);
    const WrapWeight w = make_wrap(perc, 0.0);
    const ModulusEval near_one = evaluate_partition(perc, w, 0.95);
    CHECK(near_one.crossed);
    const ModulusEval small = evaluate_partition(perc, w, 0.01);
    CHECK_FALSE(small.crossed);
    const ModulusEval mid = evaluate_partition(perc, w, 0.2);
    CHECK(mid.value == doctest::Approx(eval_at(partition_direct(perc, w, 64, Backend::floating), 0.2).value));
}

TEST_CASE("moduli and parity strings") {
    CHECK(ratio_from_q(q_from_ratio(1.7)) == doctest::Approx(1.7));
    CHECK(q_tilde_from_ratio(2.0) == doctest::Approx(std::exp(-pi)));
    CHECK_THROWS_AS(ratio_from_q(1.0), DomainError);
    CHECK(parse_parity("even") == Parity::even);
    CHECK(to_string(Parity::odd) == "odd");
    CHECK_THROWS_AS(parse_parity("both"), DomainError);
}
