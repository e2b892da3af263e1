#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ttm/errors.hpp"

namespace ttm {

/// A d=3 scalar image on a regular grid, x-fastest layout.
///
/// Templates and masks are stored center-origin: index (i,j,k) maps to world
/// coordinates (i - nx/2, j - ny/2, k - nz/2) * voxel_size, and dims are odd
/// per axis so the center voxel is exact.
struct VolumeGrid {
    int nx = 0, ny = 0, nz = 0;
    double voxel_size = 1.0;
    bool center_origin = false;
    std::vector<double> data; // length nx*ny*nz, x-fastest

    VolumeGrid() = default;

    VolumeGrid(int nx_, int ny_, int nz_, double voxel_size_ = 1.0, bool center_origin_ = false)
        : nx(nx_), ny(ny_), nz(nz_), voxel_size(voxel_size_), center_origin(center_origin_) {
        require(nx > 0 && ny > 0 && nz > 0, errc::validation, "VolumeGrid dims must be positive");
        require(voxel_size > 0.0, errc::validation, "voxel_size must be positive");
        data.assign(static_cast<std::size_t>(nx) * ny * nz, 0.0);
    }

    std::size_t size() const noexcept { return data.size(); }

    std::size_t index(int i, int j, int k) const noexcept {
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(ny) * k);
    }

    double& at(int i, int j, int k) { return data[index(i, j, k)]; }
    double at(int i, int j, int k) const { return data[index(i, j, k)]; }

    /// Wrapped accessor (circular boundary convention).
    double at_wrapped(int i, int j, int k) const {
        i %= nx; if (i < 0) i += nx;
        j %= ny; if (j < 0) j += ny;
        k %= nz; if (k < 0) k += nz;
        return at(i, j, k);
    }

    std::array<int, 3> dims() const noexcept { return {nx, ny, nz}; }
    std::array<int, 3> center() const noexcept { return {nx / 2, ny / 2, nz / 2}; }

    bool same_dims(const VolumeGrid& o) const noexcept {
        return nx == o.nx && ny == o.ny && nz == o.nz;
    }

    bool odd_dims() const noexcept { return (nx % 2) && (ny % 2) && (nz % 2); }

    bool all_finite() const noexcept {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double min() const {
        double m = data.empty() ? 0.0 : data[0];
        for (double v : data) m = std::min(m, v);
        return m;
    }

    double max() const {
        double m = data.empty() ? 0.0 : data[0];
        for (double v : data) m = std::max(m, v);
        return m;
    }

    double sum() const {
        double s = 0.0;
        for (double v : data) s += v;
        return s;
    }

    /// Linear index of the largest value (first on ties).
    std::size_t argmax() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < data.size(); ++i)
            if (data[i] > data[best]) best = i;
        return best;
    }

    std::array<int, 3> unravel(std::size_t idx) const {
        int i = static_cast<int>(idx % nx);
        int j = static_cast<int>((idx / nx) % ny);
        int k = static_cast<int>(idx / (static_cast<std::size_t>(nx) * ny));
        return {i, j, k};
    }
};

inline double dot(const VolumeGrid& a, const VolumeGrid& b) {
    require(a.same_dims(b), errc::validation, "dot: dims mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

inline double rms_diff(const VolumeGrid& a, const VolumeGrid& b) {
    require(a.same_dims(b), errc::validation, "rms_diff: dims mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

} // namespace ttm
