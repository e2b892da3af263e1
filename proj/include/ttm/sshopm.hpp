#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ttm/prng.hpp"
#include "ttm/quaternion.hpp"
#include "ttm/symtensor.hpp"

namespace ttm {

/// Dominant Z-eigenpair candidate: A q^(n-1) = lambda q on the unit sphere,
/// lambda = A . q^(.n). The quaternion is canonicalized to a >= 0.
struct ZEigenpair {
    double lambda = 0.0;
    Quat q = Quat::identity();
    int iterations = 0;
    bool converged = false;
    bool lambda_monotone = true; // nondecreasing lambda in every restart run
};

struct SshopmOptions {
    int restarts = 16;
    double alpha = -1.0;     // < 0 selects "auto" = n * frobenius(A)
    double tol = 1e-10;      // on ||x_{k+1} - x_k|| and on the eigen residual
    int max_iter = 50000;    // per restart
    std::uint64_t seed = 0xC0FFEE;
};

/// Shifted symmetric higher-order power method for the dominant (maximal
/// lambda) Z-eigenpair: x <- normalize(A x^(n-1) + alpha x). The auto shift
/// alpha = n ||A||_F makes the shifted map convex on the sphere, so lambda is
/// nondecreasing within each run. Restart 0 starts at the identity
/// quaternion, the rest at seeded Haar-random points; the best lambda wins,
/// ties by lowest restart index.
inline ZEigenpair sshopm(const SymTensor& a, const SshopmOptions& opt = {}) {
    const int n = a.order();
    const double frob = frobenius(a);
    const double alpha = opt.alpha >= 0.0 ? opt.alpha : static_cast<double>(n) * frob;

    ZEigenpair best;
    bool have_best = false;
    Prng rng(opt.seed);

    for (int run = 0; run < std::max(1, opt.restarts); ++run) {
        std::array<double, 4> x{1.0, 0.0, 0.0, 0.0};
        if (run > 0) {
            double nsq = 0.0;
            do {
                for (auto& xi : x) xi = rng.normal();
                nsq = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
            } while (nsq < 1e-12);
            double inv = 1.0 / std::sqrt(nsq);
            for (auto& xi : x) xi *= inv;
        }

        double lambda = tensor_apply(a, x);
        double lambda_prev = lambda;
        bool monotone = true;
        bool converged = false;
        int it = 0;
        for (; it < opt.max_iter; ++it) {
            const std::array<double, 4> g = contract(a, x); // A x^(n-1)
            lambda = g[0] * x[0] + g[1] * x[1] + g[2] * x[2] + g[3] * x[3];
            double resid = 0.0;
            for (int i = 0; i < 4; ++i) {
                double r = g[i] - lambda * x[i];
                resid += r * r;
            }
            resid = std::sqrt(resid);
            // At the convergence plateau the computed lambda wobbles at the
            // rounding noise of the evaluation itself (~1e-15 relative);
            // only drops above that scale count as monotonicity violations.
            if (it > 0 && lambda < lambda_prev - 1e-12 * std::max(1.0, std::abs(lambda_prev)))
                monotone = false;
            lambda_prev = lambda;

            std::array<double, 4> y;
            double ynsq = 0.0;
            for (int i = 0; i < 4; ++i) {
                y[i] = g[i] + alpha * x[i];
                ynsq += y[i] * y[i];
            }
            if (ynsq <= 0.0) break; // zero tensor with alpha == 0
            double inv = 1.0 / std::sqrt(ynsq);
            double dx = 0.0;
            for (int i = 0; i < 4; ++i) {
                y[i] *= inv;
                dx = std::max(dx, std::abs(y[i] - x[i]));
            }
            if (resid <= opt.tol && dx <= opt.tol) {
                converged = true; // keep the iterate whose residual passed
                ++it;
                break;
            }
            x = y;
        }
        lambda = tensor_apply(a, x);

        if (!have_best || lambda > best.lambda) {
            have_best = true;
            best.lambda = lambda;
            best.q = Quat{x[0], x[1], x[2], x[3]}.canonical();
            best.iterations = it;
            best.converged = converged;
        }
        best.lambda_monotone = best.lambda_monotone && monotone;
    }
    return best;
}

} // namespace ttm
