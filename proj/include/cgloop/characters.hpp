#pragma once

// Virasoro minimal-model characters M(p, p') and a greedy decomposition of
// annulus partition functions into them.

#include "cgloop/errors.hpp"
#include "cgloop/params.hpp"
#include "cgloop/series.hpp"

#include <json.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace cgloop {

/// Kac labels 1 <= r < p_minor, 1 <= s < p_major with gcd(p_minor, p_major) = 1.
struct CharacterSpec {
    int p_minor = 3;
    int p_major = 4;
    int r = 1;
    int s = 1;

    void validate() const;
    /// 1 - 6 (p_major - p_minor)^2 / (p_minor p_major)
    Rational central_charge() const;
    /// h_{r,s} = ((p_major r - p_minor s)^2 - (p_major - p_minor)^2) / (4 p_minor p_major)
    Rational conformal_weight() const;
    /// h_{r,s} - c/24
    Rational leading_exponent() const;

    bool operator==(const CharacterSpec& other) const = default;
};

/// prod(1-q^n)^{-1} sum_k (q^{a_k} - q^{b_k}) with
/// a_k = (2 p p' k + p' r - p s)^2/(4 p p') - 1/24, b_k the same with s -> -s.
GenSeries rocha_caridi(const CharacterSpec& spec, double cutoff, Backend backend = Backend::exact);

/// Minimal model whose central charge matches g: g or 1/g = p_major/p_minor.
/// Empty when g is irrational-looking or p_minor < 2.
std::optional<std::pair<int, int>> minimal_model_for(const CGParams& params);

/// One representative per (r,s) ~ (p-r, p'-s) pair.
std::vector<CharacterSpec> kac_table(int p_minor, int p_major);

struct CharacterTerm {
    CharacterSpec spec;
    double coefficient = 0.0;
    std::optional<Rational> exact; ///< set in the exact backend
};

struct Decomposition {
    int p_minor = 0;
    int p_major = 0;
    std::vector<CharacterTerm> terms; ///< in ascending leading exponent, zero coefficients omitted
};

/// Remainder after peeling off every basis character was not zero.
class DecompositionError : public IdentityError {
  public:
    DecompositionError(const std::string& what, GenSeries residual)
        : IdentityError(what), residual_(std::move(residual)) {}
    const GenSeries& residual() const noexcept { return residual_; }

  private:
    GenSeries residual_;
};

/// Greedy peel-off in ascending leading exponent. Basis entries must share
/// one minimal model and have distinct leading exponents.
Decomposition decompose(const GenSeries& z, const std::vector<CharacterSpec>& basis, double cutoff);

nlohmann::json to_json(const Decomposition& d);

} // namespace cgloop
