#include "cgloop/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cgloop {

void CharacterSpec::validate() const {
    if (p_minor < 2 || p_major <= p_minor)
        throw DomainError("minimal model needs 2 <= p_minor < p_major");
    if (std::gcd(p_minor, p_major) != 1)
        throw DomainError("minimal model labels p_minor, p_major must be coprime");
    if (r < 1 || r >= p_minor || s < 1 || s >= p_major)
        throw DomainError("Kac labels out of range: need 1 <= r < p_minor and 1 <= s < p_major");
}

Rational CharacterSpec::central_charge() const {
    const Rational d(p_major - p_minor);
    return Rational(1) - Rational(6) * d * d / Rational(p_minor * p_major);
}

Rational CharacterSpec::conformal_weight() const {
    const long a = static_cast<long>(p_major) * r - static_cast<long>(p_minor) * s;
    const long b = p_major - p_minor;
    return Rational(a * a - b * b, 4L * p_minor * p_major);
}

Rational CharacterSpec::leading_exponent() const { return conformal_weight() - central_charge() / 24; }

namespace {

template <class K>
Series<K> character(const CharacterSpec& spec, const K& cutoff) {
    const long p = spec.p_minor;
    const long pp = spec.p_major;
    const long period = 2 * p * pp;
    const Rational denom(4 * p * pp);
    auto exponent = [&](long k, long s) {
        const long a = period * k + pp * spec.r - p * s;
        return scalar_cast<K>(Rational(a * a) / denom - Rational(1, 24));
    };
    // Exponents grow like (period k)^2/denom; this bound covers the cutoff.
    const double reach = std::sqrt(to_double(denom) * (std::max(0.0, to_double(cutoff)) + 1.0));
    const long kmax = static_cast<long>(reach / static_cast<double>(period)) + 2;
    std::vector<Term<K>> terms;
    for (long k = -kmax; k <= kmax; ++k) {
        const K plus = exponent(k, spec.s);
        const K minus = exponent(k, -spec.s);
        if (ScalarTraits<K>::below(plus, cutoff))
            terms.push_back({plus, K(1)});
        if (ScalarTraits<K>::below(minus, cutoff))
            terms.push_back({minus, K(-1)});
    }
    return divide_by_euler_product(Series<K>(std::move(terms), cutoff));
}

} // namespace

GenSeries rocha_caridi(const CharacterSpec& spec, double cutoff, Backend backend) {
    spec.validate();
    if (backend == Backend::exact)
        return character<Rational>(spec, Rational(cutoff));
    return character<double>(spec, cutoff);
}

std::optional<std::pair<int, int>> minimal_model_for(const CGParams& params) {
    Rational g;
    if (params.exact) {
        g = params.exact->g;
    } else {
        // Accept small denominators only.
        bool found = false;
        for (int den = 1; den <= 64 && !found; ++den) {
            const double num = params.g * den;
            if (std::fabs(num - std::round(num)) < 1e-10) {
                g = Rational(static_cast<long long>(std::round(num)), den);
                found = true;
            }
        }
        if (!found)
            return std::nullopt;
    }
    long a = static_cast<long>(numerator(g));
    long b = static_cast<long>(denominator(g));
    if (a > b)
        std::swap(a, b);
    if (a < 2 || a == b)
        return std::nullopt;
    return std::make_pair(static_cast<int>(a), static_cast<int>(b));
}

std::vector<CharacterSpec> kac_table(int p_minor, int p_major) {
    CharacterSpec probe{p_minor, p_major, 1, 1};
    probe.validate();
    std::vector<CharacterSpec> out;
    for (int r = 1; r < p_minor; ++r)
        for (int s = 1; s < p_major; ++s) {
            const int rr = p_minor - r;
            const int ss = p_major - s;
            if (std::make_pair(r, s) <= std::make_pair(rr, ss))
                out.push_back({p_minor, p_major, r, s});
        }
    return out;
}

Decomposition decompose(const GenSeries& z, const std::vector<CharacterSpec>& basis, double cutoff) {
    if (basis.empty())
        throw DomainError("decompose: empty character basis");
    for (const auto& b : basis) {
        b.validate();
        if (b.p_minor != basis.front().p_minor || b.p_major != basis.front().p_major)
            throw DomainError("decompose: basis mixes minimal models");
    }
    std::vector<CharacterSpec> order = basis;
    std::stable_sort(order.begin(), order.end(), [](const CharacterSpec& a, const CharacterSpec& b) {
        return a.leading_exponent() < b.leading_exponent();
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (order[i].leading_exponent() == order[i - 1].leading_exponent())
            throw DomainError("decompose: basis characters share a leading exponent");

    const double cut = std::min(cutoff, z.cutoff());
    Decomposition out{order.front().p_minor, order.front().p_major, {}};
    GenSeries remainder = z;
    for (const auto& spec : order) {
        const GenSeries chi = rocha_caridi(spec, cut, z.backend());
        CharacterTerm term{spec, 0.0, std::nullopt};
        if (z.backend() == Backend::exact) {
            const Rational c = remainder.exact().coefficient_at(spec.leading_exponent());
            if (c == 0)
                continue;
            term.exact = c;
            term.coefficient = to_double(c);
            remainder = remainder.exact() - chi.exact().scaled(c);
        } else {
            const double c = remainder.floating().coefficient_at(to_double(spec.leading_exponent()));
            if (c == 0.0)
                continue;
            term.coefficient = c;
            remainder = remainder.floating() - chi.floating().scaled(c);
        }
        out.terms.push_back(term);
    }
    if (!remainder.is_zero())
        throw DecompositionError("decompose: nonzero remainder after peeling off the basis", remainder);
    return out;
}

nlohmann::json to_json(const Decomposition& d) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : d.terms) {
        nlohmann::json coeff;
        if (t.exact && is_integer(*t.exact))
            coeff = static_cast<long long>(numerator(*t.exact));
        else if (t.exact)
            coeff = to_string(*t.exact);
        else
            coeff = t.coefficient;
        terms.push_back({{"r", t.spec.r}, {"s", t.spec.s}, {"coefficient", coeff}});
    }
    return {{"model", {{"p", d.p_minor}, {"q", d.p_major}}}, {"terms", terms}};
}

} // namespace cgloop
