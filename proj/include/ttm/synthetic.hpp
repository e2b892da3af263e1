#pragma once

#include <cstdint>
#include <vector>

#include "ttm/errors.hpp"
#include "ttm/prng.hpp"
#include "ttm/quaternion.hpp"
#include "ttm/resample.hpp"
#include "ttm/volume.hpp"

namespace ttm {

struct Placement {
    std::array<int, 3> pos{};
    Quat quat = Quat::identity();
};

/// Scene with known ground truth: rotated template instances inserted
/// additively plus seeded Gaussian noise. Reproducible from the seed.
struct SyntheticScene {
    VolumeGrid volume;
    std::vector<Placement> truth;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Builds a scene of the given dims. Placements must keep the template box
/// fully inside the volume and be mutually separated by at least min_sep
/// (callers use 2*r1).
inline SyntheticScene make_scene(const VolumeGrid& t, int nx, int ny, int nz,
                                 const std::vector<Placement>& placements, double noise_sigma,
                                 std::uint64_t seed, double min_sep = 0.0) {
    require(t.odd_dims() && t.center_origin, errc::validation, "make_scene: template must be center-origin with odd dims");
    const auto c = t.center();
    for (const auto& p : placements) {
        require(p.pos[0] - c[0] >= 0 && p.pos[0] + c[0] < nx &&
                p.pos[1] - c[1] >= 0 && p.pos[1] + c[1] < ny &&
                p.pos[2] - c[2] >= 0 && p.pos[2] + c[2] < nz,
                errc::validation, "make_scene: placement does not fit inside the volume");
    }
    for (std::size_t i = 0; i < placements.size(); ++i)
        for (std::size_t j = i + 1; j < placements.size(); ++j) {
            const double dx = placements[i].pos[0] - placements[j].pos[0];
            const double dy = placements[i].pos[1] - placements[j].pos[1];
            const double dz = placements[i].pos[2] - placements[j].pos[2];
            require(std::sqrt(dx * dx + dy * dy + dz * dz) >= min_sep, errc::validation,
                    "make_scene: placements overlap (separation below min_sep)");
        }

    SyntheticScene scene;
    scene.volume = VolumeGrid(nx, ny, nz, t.voxel_size, false);
    scene.truth = placements;
    scene.noise_sigma = noise_sigma;
    scene.seed = seed;

    for (const auto& p : placements) {
        VolumeGrid rot = rotate_volume(t, p.quat);
        for (int k = 0; k < t.nz; ++k)
            for (int j = 0; j < t.ny; ++j)
                for (int i = 0; i < t.nx; ++i)
                    scene.volume.at(p.pos[0] + i - c[0], p.pos[1] + j - c[1], p.pos[2] + k - c[2]) +=
                        rot.at(i, j, k);
    }
    if (noise_sigma > 0.0) {
        Prng rng(seed);
        for (double& v : scene.volume.data) v += noise_sigma * rng.normal();
    }
    return scene;
}

} // namespace ttm
