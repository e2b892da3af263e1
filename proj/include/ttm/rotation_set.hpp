#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttm/errors.hpp"
#include "ttm/prng.hpp"
#include "ttm/quaternion.hpp"

namespace ttm {

/// Quadrature nodes over SO(3): unit quaternions plus positive weights
/// summing to 1. Used both for the tensor-template integral and as the
/// classical search grid.
struct RotationSet {
    enum class Kind { haar_random, grid };

    std::vector<Quat> quats;
    std::vector<double> weights;
    std::uint64_t seed = 0;
    Kind kind = Kind::haar_random;

    std::size_t size() const noexcept { return quats.size(); }

    void validate() const {
        require(!quats.empty(), errc::validation, "RotationSet: empty");
        require(weights.size() == quats.size(), errc::validation, "RotationSet: weights size mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < quats.size(); ++i) {
            require(std::abs(quats[i].norm2() - 1.0) <= 1e-9, errc::validation,
                    "RotationSet: non-unit quaternion");
            require(weights[i] > 0.0, errc::validation, "RotationSet: non-positive weight");
            s += weights[i];
        }
        require(std::abs(s - 1.0) <= 1e-9, errc::validation, "RotationSet: weights must sum to 1");
    }
};

/// n i.i.d. Haar-uniform rotations (normalized 4-D Gaussians), deterministic
/// in the seed; uniform weights 1/n.
inline RotationSet sample_haar(std::size_t n, std::uint64_t seed) {
    require(n >= 1, errc::validation, "sample_haar: n must be >= 1");
    RotationSet rs;
    rs.seed = seed;
    rs.kind = RotationSet::Kind::haar_random;
    rs.quats.reserve(n);
    rs.weights.assign(n, 1.0 / static_cast<double>(n));
    Prng rng(seed);
    while (rs.quats.size() < n) {
        Quat q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        double nsq = q.norm2();
        if (nsq < 1e-12) continue; // vanishingly rare; resample
        rs.quats.push_back(q.normalized());
    }
    return rs;
}

} // namespace ttm
