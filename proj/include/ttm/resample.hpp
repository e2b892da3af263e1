#pragma once

#include "ttm/quaternion.hpp"
#include "ttm/volume.hpp"

namespace ttm {

/// Rotated template t_R(z) = t(R z) with R = matrix(q)^T applied to
/// center-origin world coordinates, sampled by trilinear interpolation with
/// zero fill outside the support. A feature at p moves to matrix(q) p.
inline VolumeGrid rotate_volume(const VolumeGrid& t, const Quat& q) {
    require(t.center_origin, errc::validation, "rotate_volume: input must be center-origin");
    require(t.odd_dims(), errc::validation, "rotate_volume: input dims must be odd");
    require_unit(q, "rotate_volume");

    const Mat3 m = transpose(quat_to_matrix(q));
    const auto c = t.center();
    VolumeGrid out(t.nx, t.ny, t.nz, t.voxel_size, true);
    for (int k = 0; k < t.nz; ++k)
        for (int j = 0; j < t.ny; ++j)
            for (int i = 0; i < t.nx; ++i) {
                const double z0 = i - c[0], z1 = j - c[1], z2 = k - c[2];
                const double sx = m[0][0] * z0 + m[0][1] * z1 + m[0][2] * z2 + c[0];
                const double sy = m[1][0] * z0 + m[1][1] * z1 + m[1][2] * z2 + c[1];
                const double sz = m[2][0] * z0 + m[2][1] * z1 + m[2][2] * z2 + c[2];
                const int ix = static_cast<int>(std::floor(sx));
                const int iy = static_cast<int>(std::floor(sy));
                const int iz = static_cast<int>(std::floor(sz));
                const double fx = sx - ix, fy = sy - iy, fz = sz - iz;
                double acc = 0.0;
                for (int dz = 0; dz <= 1; ++dz)
                    for (int dy = 0; dy <= 1; ++dy)
                        for (int dx = 0; dx <= 1; ++dx) {
                            const int px = ix + dx, py = iy + dy, pz = iz + dz;
                            if (px < 0 || px >= t.nx || py < 0 || py >= t.ny || pz < 0 || pz >= t.nz)
                                continue;
                            const double wgt = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) * (dz ? fz : 1.0 - fz);
                            acc += wgt * t.at(px, py, pz);
                        }
                out.at(i, j, k) = acc;
            }
    return out;
}

} // namespace ttm
