#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "ttm/errors.hpp"
#include "ttm/volume.hpp"

namespace ttm {

namespace fft {

/// Half-spectrum of a real 3-D array: nz * ny * (nx/2 + 1) complex bins.
struct Spectrum {
    int nx = 0, ny = 0, nz = 0;
    std::vector<std::complex<double>> bins;

    std::size_t n_bins() const { return bins.size(); }
};

namespace detail {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// FFTW planning is not thread-safe; creation is serialized and plans are
// cached per dims. FFTW_ESTIMATE keeps the chosen algorithm (and therefore
// the rounding) deterministic; FFTW_UNALIGNED allows new-array execution on
// ordinary heap buffers.
inline const PlanPair& plans_for(int nx, int ny, int nz) {
    static std::mutex mu;
    static std::map<std::array<int, 3>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::array<int, 3>{nx, ny, nz};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::size_t n_real = static_cast<std::size_t>(nx) * ny * nz;
    require(n_real <= (std::size_t{1} << 33), errc::config, "FFT plan dimension overflow");
    const std::size_t n_cplx = static_cast<std::size_t>(nz) * ny * (nx / 2 + 1);
    std::vector<double> re(n_real);
    std::vector<std::complex<double>> cx(n_cplx);
    PlanPair p;
    // x is the fastest-varying axis, so it is FFTW's last dimension.
    p.fwd = fftw_plan_dft_r2c_3d(nz, ny, nx, re.data(), reinterpret_cast<fftw_complex*>(cx.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.inv = fftw_plan_dft_c2r_3d(nz, ny, nx, reinterpret_cast<fftw_complex*>(cx.data()), re.data(),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(p.fwd && p.inv, errc::config, "FFTW plan creation failed");
    return cache.emplace(key, p).first->second;
}

} // namespace detail

inline Spectrum forward(const VolumeGrid& v) {
    const auto& p = detail::plans_for(v.nx, v.ny, v.nz);
    Spectrum s;
    s.nx = v.nx;
    s.ny = v.ny;
    s.nz = v.nz;
    s.bins.resize(static_cast<std::size_t>(v.nz) * v.ny * (v.nx / 2 + 1));
    std::vector<double> scratch(v.data); // r2c may clobber its input
    fftw_execute_dft_r2c(p.fwd, scratch.data(), reinterpret_cast<fftw_complex*>(s.bins.data()));
    return s;
}

/// Inverse transform scaled by 1/N so inverse(forward(v)) == v.
inline VolumeGrid inverse(const Spectrum& s, const VolumeGrid& like) {
    const auto& p = detail::plans_for(s.nx, s.ny, s.nz);
    VolumeGrid out(s.nx, s.ny, s.nz, like.voxel_size, like.center_origin);
    std::vector<std::complex<double>> scratch(s.bins); // c2r clobbers its input
    fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(scratch.data()), out.data.data());
    const double scale = 1.0 / static_cast<double>(out.size());
    for (double& x : out.data) x *= scale;
    return out;
}

} // namespace fft

/// Zero-embeds a centered (template-sized) volume g into dims, placing g's
/// center voxel at index (0,0,0) with circular wrap. Taps that alias onto the
/// same voxel accumulate, matching circular convolution of the full kernel.
inline VolumeGrid embed_centered(const VolumeGrid& g, int nx, int ny, int nz) {
    VolumeGrid out(nx, ny, nz);
    const auto c = g.center();
    for (int k = 0; k < g.nz; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                int ti = (i - c[0]) % nx; if (ti < 0) ti += nx;
                int tj = (j - c[1]) % ny; if (tj < 0) tj += ny;
                int tk = (k - c[2]) % nz; if (tk < 0) tk += nz;
                out.at(ti, tj, tk) += g.at(i, j, k);
            }
    return out;
}

/// Circular FFT cross-correlation (f * g)(x) = sum_z f(z+x) g(z), with g
/// zero-embedded and centered. Output lives on f's grid; the boundary
/// convention is circular wrap-around.
inline VolumeGrid cross_correlate(const VolumeGrid& f, const VolumeGrid& g) {
    require(g.nx <= f.nx && g.ny <= f.ny && g.nz <= f.nz, errc::validation,
            "cross_correlate: template does not fit inside image");
    require(f.all_finite() && g.all_finite(), errc::validation, "cross_correlate: non-finite input");
    fft::Spectrum F = fft::forward(f);
    fft::Spectrum G = fft::forward(embed_centered(g, f.nx, f.ny, f.nz));
    for (std::size_t i = 0; i < F.bins.size(); ++i) F.bins[i] *= std::conj(G.bins[i]);
    return fft::inverse(F, f);
}

/// Same correlation against a precomputed image spectrum (classical matching
/// correlates one image against many rotated templates).
inline VolumeGrid cross_correlate_spectrum(const fft::Spectrum& F, const VolumeGrid& g,
                                           const VolumeGrid& like) {
    fft::Spectrum G = fft::forward(embed_centered(g, F.nx, F.ny, F.nz));
    for (std::size_t i = 0; i < G.bins.size(); ++i) G.bins[i] = F.bins[i] * std::conj(G.bins[i]);
    return fft::inverse(G, like);
}

} // namespace ttm
