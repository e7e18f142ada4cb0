#include "cgloop/boundary.hpp"

#include "cgloop/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>

namespace cgloop {

using boost::math::double_constants::pi;

void BoundaryCoupling::validate() const {
    if (!(g > 0.0))
        throw DomainError("boundary coupling needs g > 0");
    if (!(L > 0.0))
        throw DomainError("strip width L must be positive");
}

double e0_zeta(double L) {
    if (!(L > 0.0))
        throw DomainError("strip width L must be positive");
    return -pi / (24.0 * L);
}

double e1_zeta(const BoundaryCoupling& b) {
    b.validate();
    const double s = b.alpha1 + b.alpha2;
    return pi * s * s / (b.g * b.L);
}

double e1_regulated(const BoundaryCoupling& b, double epsilon) {
    b.validate();
    if (!(epsilon > 0.0))
        throw DomainError("regulator epsilon must be positive");
    const double sum_even = 1.0 / std::expm1(2.0 * epsilon);
    const double sum_odd = 0.5 / std::sinh(epsilon);
    const double d = b.alpha1 - b.alpha2;
    const double s = b.alpha1 + b.alpha2;
    return -(2.0 * pi / (b.g * b.L)) * (d * d * sum_odd + s * s * sum_even);
}

E1Fit e1_cutoff(const BoundaryCoupling& b, const std::vector<double>& epsilon_list) {
    b.validate();
    std::vector<double> eps = epsilon_list;
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    if (eps.size() < 3 || eps.size() != epsilon_list.size())
        throw DomainError("e1_cutoff needs at least three distinct regulator values");
    for (double e : eps)
        if (!(e > 0.0 && e <= 0.1))
            throw DomainError("regulator values must lie in (0, 0.1]");

    const Eigen::Index rows = static_cast<Eigen::Index>(eps.size());
    Eigen::MatrixXd design(rows, 3);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double e = eps[static_cast<std::size_t>(i)];
        design(i, 0) = 1.0 / e;
        design(i, 1) = 1.0;
        design(i, 2) = e;
        rhs(i) = e1_regulated(b, e);
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd misfit = design * coef - rhs;

    E1Fit fit;
    fit.divergent_coefficient = coef(0);
    fit.finite_part = coef(1);
    fit.linear_coefficient = coef(2);
    fit.residual = misfit.cwiseAbs().maxCoeff();
    const double scale = rhs.cwiseAbs().maxCoeff();
    if (!(fit.residual <= 1e-5 * scale + 1e-12))
        throw FitError("e1_cutoff: regulated energies do not follow A/eps + B + C eps");
    return fit;
}

double c_effective(const BoundaryCoupling& b) {
    b.validate();
    const double s = b.alpha1 + b.alpha2;
    return 1.0 - 24.0 * s * s / b.g;
}

} // namespace cgloop
