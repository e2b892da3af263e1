#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ttm/prng.hpp"
#include "ttm/quaternion.hpp"
#include "ttm/rotation_set.hpp"
#include "ttm/symtensor.hpp"

namespace ttm {

/// Brute-force maximizer of phi(q) = C . q^(.n) on the unit sphere: best of
/// grid_n Haar samples plus projected-gradient refinement. Independent oracle
/// for sshopm (shares only the contract primitive, as gradient driver).
inline std::pair<double, Quat> brute_force_phi_max(const SymTensor& c, std::size_t grid_n,
                                                   std::uint64_t seed, int refine_steps = 20) {
    require(grid_n >= 10000, errc::validation, "brute_force_phi_max: grid_n must be >= 1e4");
    RotationSet grid = sample_haar(grid_n, seed);
    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 4> x{1.0, 0.0, 0.0, 0.0};
    for (const auto& q : grid.quats) {
        const double v = tensor_apply(c, q.components());
        if (v > best) {
            best = v;
            x = q.components();
        }
    }

    const int n = c.order();
    const double frob = frobenius(c);
    double step = frob > 0.0 ? 0.5 / (n * frob) : 0.0;
    double fx = best;
    for (int s = 0; s < refine_steps && step > 0.0; ++s) {
        const std::array<double, 4> g = contract(c, x); // grad phi = n A x^{n-1}
        // backtracking line search along the (projected) gradient
        for (int bt = 0; bt < 30; ++bt) {
            std::array<double, 4> y;
            double nsq = 0.0;
            for (int i = 0; i < 4; ++i) {
                y[i] = x[i] + step * n * g[i];
                nsq += y[i] * y[i];
            }
            const double inv = 1.0 / std::sqrt(nsq);
            for (auto& yi : y) yi *= inv;
            const double fy = tensor_apply(c, y);
            if (fy >= fx) {
                x = y;
                fx = fy;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
    }
    return {fx, Quat{x[0], x[1], x[2], x[3]}.canonical()};
}

/// The theta-integral of the K-hat(ell, (0,0)) hyperspherical coefficient of
/// K(Q) = Re(Q)^n, with its positive constant prefactor dropped:
///   integral_0^pi cos^n(theta) sin((ell+1) theta) sin(theta) dtheta.
/// Nonnegativity of this value for all ell makes convolution with K positive
/// semidefinite on the rotation group; it vanishes for odd ell.
inline double lemma_k_coefficient(int ell, int n) {
    require(ell >= 0, errc::validation, "lemma_k_coefficient: ell must be >= 0");
    require(n >= 2 && n % 2 == 0, errc::validation, "lemma_k_coefficient: n must be even and >= 2");
    auto integrand = [ell, n](double theta) {
        return std::pow(std::cos(theta), n) * std::sin((ell + 1) * theta) * std::sin(theta);
    };
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, M_PI, 12, 1e-13, &err);
    return v;
}

} // namespace ttm
