#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here must stay independent of the implementation paths it checks: dense
// tensor algebra by full d^n expansion, correlations by direct spatial sums.

#include <array>
#include <cmath>
#include <vector>

#include "ttm/prng.hpp"
#include "ttm/quaternion.hpp"
#include "ttm/ssp.hpp"
#include "ttm/symtensor.hpp"
#include "ttm/volume.hpp"

namespace ttm_test {

using ttm::Quat;
using ttm::SymTensor;
using ttm::VolumeGrid;

// --- dense symmetric tensor oracle (full 4^n expansion) ---

struct DenseTensor {
    int n = 0;
    std::vector<double> a; // 4^n entries, tuple (i1..in) -> sum_k i_k * 4^k

    static DenseTensor from_compressed(const SymTensor& t) {
        DenseTensor d;
        d.n = t.order();
        std::size_t total = 1;
        for (int i = 0; i < d.n; ++i) total *= 4;
        d.a.resize(total);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::array<int, 4> e{0, 0, 0, 0};
            std::size_t rem = flat;
            for (int k = 0; k < d.n; ++k) {
                e[rem % 4]++;
                rem /= 4;
            }
            // locate the compressed entry with this exponent pattern
            double val = 0.0;
            for (std::size_t idx = 0; idx < t.size(); ++idx) {
                if (t.table->entries[idx].e == e) {
                    val = t.comp[idx];
                    break;
                }
            }
            d.a[flat] = val;
        }
        return d;
    }

    double dot(const DenseTensor& o) const {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * o.a[i];
        return s;
    }

    double frobenius() const { return std::sqrt(dot(*this)); }

    /// (A x^{n-1})_i by direct summation over all index tuples; symmetry makes
    /// the choice of the free index position irrelevant.
    std::array<double, 4> contract(const std::array<double, 4>& x) const {
        std::array<double, 4> v{0, 0, 0, 0};
        for (std::size_t flat = 0; flat < a.size(); ++flat) {
            std::size_t rem = flat;
            int i0 = static_cast<int>(rem % 4);
            rem /= 4;
            double mono = 1.0;
            for (int k = 1; k < n; ++k) {
                mono *= x[rem % 4];
                rem /= 4;
            }
            v[i0] += a[flat] * mono;
        }
        return v;
    }

    double apply(const std::array<double, 4>& x) const {
        double s = 0.0;
        for (std::size_t flat = 0; flat < a.size(); ++flat) {
            std::size_t rem = flat;
            double mono = 1.0;
            for (int k = 0; k < n; ++k) {
                mono *= x[rem % 4];
                rem /= 4;
            }
            s += a[flat] * mono;
        }
        return s;
    }
};

inline SymTensor random_sym_tensor(int n, ttm::Prng& rng) {
    SymTensor t(n);
    for (auto& c : t.comp) c = rng.normal();
    return t;
}

inline std::array<double, 4> random_unit4(ttm::Prng& rng) {
    std::array<double, 4> q{};
    double nsq = 0.0;
    do {
        for (auto& x : q) x = rng.normal();
        nsq = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    } while (nsq < 1e-12);
    const double inv = 1.0 / std::sqrt(nsq);
    for (auto& x : q) x *= inv;
    return q;
}

// --- direct spatial-domain oracles (circular boundary) ---

inline VolumeGrid spatial_correlate(const VolumeGrid& f, const VolumeGrid& g) {
    VolumeGrid out(f.nx, f.ny, f.nz, f.voxel_size, f.center_origin);
    const auto c = g.center();
    for (int zk = 0; zk < f.nz; ++zk)
        for (int zj = 0; zj < f.ny; ++zj)
            for (int zi = 0; zi < f.nx; ++zi) {
                double s = 0.0;
                for (int k = 0; k < g.nz; ++k)
                    for (int j = 0; j < g.ny; ++j)
                        for (int i = 0; i < g.nx; ++i)
                            s += f.at_wrapped(zi + i - c[0], zj + j - c[1], zk + k - c[2]) * g.at(i, j, k);
                out.at(zi, zj, zk) = s;
            }
    return out;
}

inline VolumeGrid spatial_convolve_gaussian(const VolumeGrid& f, double sigma) {
    const std::vector<double> k1 = ttm::gaussian_kernel_1d(sigma);
    const int radius = static_cast<int>(k1.size() / 2);
    VolumeGrid out(f.nx, f.ny, f.nz, f.voxel_size, f.center_origin);
    for (int zk = 0; zk < f.nz; ++zk)
        for (int zj = 0; zj < f.ny; ++zj)
            for (int zi = 0; zi < f.nx; ++zi) {
                double s = 0.0;
                for (int ck = -radius; ck <= radius; ++ck)
                    for (int cj = -radius; cj <= radius; ++cj)
                        for (int ci = -radius; ci <= radius; ++ci)
                            s += k1[ci + radius] * k1[cj + radius] * k1[ck + radius] *
                                 f.at_wrapped(zi - ci, zj - cj, zk - ck);
                out.at(zi, zj, zk) = s;
            }
    return out;
}

// --- fixtures ---

inline VolumeGrid random_volume(int nx, int ny, int nz, ttm::Prng& rng, bool center_origin = false) {
    VolumeGrid v(nx, ny, nz, 1.0, center_origin);
    for (auto& x : v.data) x = rng.normal();
    return v;
}

inline void add_blob(VolumeGrid& t, double x, double y, double z, double sigma, double amp) {
    const auto c = t.center();
    for (int k = 0; k < t.nz; ++k)
        for (int j = 0; j < t.ny; ++j)
            for (int i = 0; i < t.nx; ++i) {
                const double dx = i - c[0] - x, dy = j - c[1] - y, dz = k - c[2] - z;
                t.at(i, j, k) += amp * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * sigma * sigma));
            }
}

/// Rotationally asymmetric template: off-center blobs with distinct radii,
/// widths and amplitudes and no approximate self-overlap under rotation.
inline VolumeGrid tripod_template(int n = 21) {
    VolumeGrid t(n, n, n, 1.0, true);
    add_blob(t, 3.2, 0.0, 0.0, 1.2, 1.0);
    add_blob(t, -1.6, 2.8, 0.0, 1.2, 0.85);
    add_blob(t, -1.6, -1.4, 2.6, 1.2, 0.7);
    add_blob(t, 0.0, 0.0, -2.8, 0.9, 0.55);
    return t;
}

/// Spherically symmetric template (radial Gaussian). The default is smooth
/// enough that trilinear resampling error stays well below 1e-3 RMS and wide
/// enough that the support decays inside the grid.
inline VolumeGrid radial_template(int n = 41, double sigma = 5.0) {
    VolumeGrid t(n, n, n, 1.0, true);
    add_blob(t, 0.0, 0.0, 0.0, sigma, 1.0);
    return t;
}

/// Inserts a center-origin patch additively at pos (no bounds wrap).
inline void insert_patch(VolumeGrid& f, const VolumeGrid& patch, const std::array<int, 3>& pos) {
    const auto c = patch.center();
    for (int k = 0; k < patch.nz; ++k)
        for (int j = 0; j < patch.ny; ++j)
            for (int i = 0; i < patch.nx; ++i)
                f.at(pos[0] + i - c[0], pos[1] + j - c[1], pos[2] + k - c[2]) += patch.at(i, j, k);
}

inline Quat random_quat(ttm::Prng& rng) {
    auto q = random_unit4(rng);
    return Quat{q[0], q[1], q[2], q[3]};
}

} // namespace ttm_test
