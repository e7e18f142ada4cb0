#pragma once

// Ground-state energy of a free boson on a strip of width L with boundary
// terms alpha_1, alpha_2 coupling to the normal derivative of the field.

#include <vector>

namespace cgloop {

struct BoundaryCoupling {
    double g = 1.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double L = 1.0;

    void validate() const; ///< g > 0, L > 0
};

/// (pi/2L) zeta(-1) = -pi/(24 L)
double e0_zeta(double L);

/// pi (alpha1 + alpha2)^2 / (g L)
double e1_zeta(const BoundaryCoupling& b);

/// -(2 pi/g L) [(a1-a2)^2 sum_odd e^{-eps n} + (a1+a2)^2 sum_even e^{-eps n}], n >= 1.
double e1_regulated(const BoundaryCoupling& b, double epsilon);

struct E1Fit {
    double finite_part = 0.0;          ///< B in A/eps + B + C eps
    double divergent_coefficient = 0.0; ///< A
    double linear_coefficient = 0.0;   ///< C
    double residual = 0.0;             ///< max misfit over the samples
};

/// Fits e1_regulated over the samples. Needs >= 3 distinct eps in (0, 0.1];
/// throws FitError when the misfit exceeds 1e-5 relative (plus 1e-12).
E1Fit e1_cutoff(const BoundaryCoupling& b, const std::vector<double>& epsilon_list);

/// 1 - 24 (alpha1 + alpha2)^2 / g
double c_effective(const BoundaryCoupling& b);

} // namespace cgloop
