#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ttm/errors.hpp"
#include "ttm/fft.hpp"
#include "ttm/volume.hpp"

namespace ttm {

/// Parameters of the SSP operator S(f) = h * (m . (f * h)): the isotropic
/// Gaussian low-pass h and the rotationally symmetric raised-cosine mask m.
struct SspConfig {
    double sigma_h = 1.0; // std-dev of h, voxels
    double r0 = 4.0;      // mask inner radius, voxels
    double r1 = 6.0;      // mask outer radius, voxels

    void validate() const {
        require(sigma_h > 0.0, errc::config, "sigma_h must be positive");
        require(r0 > 0.0, errc::config, "r0 must be positive");
        require(r1 > r0, errc::config, "r1 must exceed r0");
    }

    /// Smallest odd cube that contains the mask support.
    int mask_extent() const {
        return 2 * static_cast<int>(std::ceil(r1)) + 1;
    }

    /// Mask taper value at radius r (voxels): 1 inside r0, cos^2 ramp to 0 at r1.
    double mask_value(double r) const {
        if (r <= r0) return 1.0;
        if (r >= r1) return 0.0;
        double c = std::cos(M_PI * (r - r0) / (2.0 * (r1 - r0)));
        return c * c;
    }
};

/// 1-D Gaussian taps truncated at 4*sigma. The taps are renormalized and the
/// center tap absorbs the rounding residual, so the sum is exactly 1 and
/// h * 1 = 1 holds in the discrete setting.
inline std::vector<double> gaussian_kernel_1d(double sigma) {
    require(sigma > 0.0, errc::config, "gaussian_kernel_1d: sigma must be positive");
    int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-0.5 * (i / sigma) * (i / sigma));
        k[i + radius] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    double resid = -1.0;
    for (double v : k) resid += v;
    k[radius] -= resid;
    return k;
}

/// Separable circular convolution with the unit-sum Gaussian h.
inline VolumeGrid apply_lowpass(const VolumeGrid& v, const SspConfig& cfg) {
    cfg.validate();
    const std::vector<double> k = gaussian_kernel_1d(cfg.sigma_h);
    const int radius = static_cast<int>(k.size() / 2);
    VolumeGrid cur = v;
    VolumeGrid nxt(v.nx, v.ny, v.nz, v.voxel_size, v.center_origin);
    const int dims[3] = {v.nx, v.ny, v.nz};
    for (int axis = 0; axis < 3; ++axis) {
        const int n = dims[axis];
        for (int kk = 0; kk < v.nz; ++kk)
            for (int jj = 0; jj < v.ny; ++jj)
                for (int ii = 0; ii < v.nx; ++ii) {
                    int pos[3] = {ii, jj, kk};
                    double acc = 0.0;
                    for (int u = -radius; u <= radius; ++u) {
                        int src[3] = {ii, jj, kk};
                        int s = pos[axis] - u;
                        s %= n; if (s < 0) s += n;
                        src[axis] = s;
                        acc += k[u + radius] * cur.at(src[0], src[1], src[2]);
                    }
                    nxt.at(ii, jj, kk) = acc;
                }
        std::swap(cur, nxt);
    }
    return cur;
}

/// Samples the rotationally symmetric mask m(x) = rho(|x|) on a grid of the
/// given dims, centered at (nx/2, ny/2, nz/2).
inline VolumeGrid mask_volume(int nx, int ny, int nz, const SspConfig& cfg) {
    cfg.validate();
    VolumeGrid m(nx, ny, nz, 1.0, true);
    const auto c = m.center();
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                double dx = i - c[0], dy = j - c[1], dz = k - c[2];
                m.at(i, j, k) = cfg.mask_value(std::sqrt(dx * dx + dy * dy + dz * dz));
            }
    return m;
}

/// Mask on its minimal odd-cube support.
inline VolumeGrid mask_volume(const SspConfig& cfg) {
    int n = cfg.mask_extent();
    return mask_volume(n, n, n, cfg);
}

/// <f, g>_S = <f*h, m.(g*h)> with the mask sampled on the shared grid.
/// Symmetric positive semidefinite in (f, g).
inline double s_inner(const VolumeGrid& f, const VolumeGrid& g, const SspConfig& cfg) {
    require(f.same_dims(g), errc::validation, "s_inner: dims mismatch");
    VolumeGrid hf = apply_lowpass(f, cfg);
    VolumeGrid hg = apply_lowpass(g, cfg);
    VolumeGrid m = mask_volume(f.nx, f.ny, f.nz, cfg);
    double s = 0.0;
    for (std::size_t i = 0; i < hf.size(); ++i) s += hf.data[i] * m.data[i] * hg.data[i];
    return s;
}

inline double s_norm(const VolumeGrid& f, const SspConfig& cfg) {
    double v = s_inner(f, f, cfg);
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

/// Per-voxel reciprocal S-seminorm of the projected local window,
/// w(x) = 1 / ||P_S(tau_x f)||_S, with validity flags.
struct WeightVolume {
    VolumeGrid w;            // 0 on invalid voxels
    VolumeGrid variance;     // v(x) = ||P_S(tau_x f)||_S^2 before flooring
    std::vector<std::uint8_t> valid;
    std::size_t n_valid = 0;

    bool any_valid() const noexcept { return n_valid > 0; }
};

/// Scale-aware default variance floor: 1e-8 * (max f - min f)^2 * <1, m>.
inline double default_eps_var(const VolumeGrid& f, const SspConfig& cfg) {
    VolumeGrid m = mask_volume(cfg);
    double range = f.max() - f.min();
    double eps = 1e-8 * range * range * m.sum();
    return eps > 0.0 ? eps : 1e-300;
}

/// Computes v(x) = <(tau_x f * h)^2, m> - <tau_x f * h, m>^2 / <1, m> with two
/// FFT correlations, then w(x) = 1/sqrt(v(x)) where v exceeds eps_var.
/// A constant image yields zero valid voxels (flagged, not an error).
inline WeightVolume weight_map(const VolumeGrid& f, const SspConfig& cfg, double eps_var) {
    cfg.validate();
    require(eps_var > 0.0, errc::config, "weight_map: eps_var must be positive");
    VolumeGrid m = mask_volume(cfg);
    const double m_sum = m.sum();
    require(m_sum > 0.0, errc::config, "weight_map: empty mask");

    VolumeGrid F = apply_lowpass(f, cfg);
    VolumeGrid F2 = F;
    for (double& x : F2.data) x *= x;
    VolumeGrid v1 = cross_correlate(F2, m);
    VolumeGrid v2 = cross_correlate(F, m);

    WeightVolume out;
    out.w = VolumeGrid(f.nx, f.ny, f.nz, f.voxel_size, f.center_origin);
    out.variance = out.w;
    out.valid.assign(f.size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double v = v1.data[i] - v2.data[i] * v2.data[i] / m_sum;
        out.variance.data[i] = v;
        if (v > eps_var) {
            out.w.data[i] = 1.0 / std::sqrt(v);
            out.valid[i] = 1;
            ++out.n_valid;
        }
    }
    return out;
}

inline WeightVolume weight_map(const VolumeGrid& f, const SspConfig& cfg) {
    return weight_map(f, cfg, default_eps_var(f, cfg));
}

/// Template preprocessed for matching: t_hat = m . t_S . (h*t + t_O), plus the
/// scalars of the closed-form normalization.
struct NormalizedTemplate {
    VolumeGrid t_hat;  // masked, affine-normalized, smoothed template
    SspConfig ssp;     // parameters the normalization was built with
    double t1 = 0.0;   // <h*t, m>
    double t2 = 0.0;   // <(h*t)^2, m>
    double t_offset = 0.0; // t_O = -t1 / m_sum
    double t_scale = 0.0;  // t_S = 1 / sqrt(t2 - t1^2 / m_sum)
    double m_sum = 0.0;    // <1, m>

    /// The affine image t_S * (t + t_O) of the raw template; inserting it into
    /// a zero scene gives ||P_S(tau_x0 f)||_S = 1 at the insertion voxel.
    VolumeGrid affine_normalized(const VolumeGrid& t_raw) const {
        VolumeGrid out = t_raw;
        for (double& x : out.data) x = t_scale * (x + t_offset);
        return out;
    }
};

/// Template preprocessing for matching. Throws errc::degenerate_template
/// when the template is constant under the mask (zero S-variance).
inline NormalizedTemplate normalize_template(const VolumeGrid& t, const SspConfig& cfg) {
    cfg.validate();
    require(t.odd_dims(), errc::validation, "normalize_template: template dims must be odd");
    require(t.center_origin, errc::validation, "normalize_template: template must be center-origin");
    require(t.all_finite(), errc::validation, "normalize_template: non-finite template");
    require(t.nx >= cfg.mask_extent(), errc::validation,
            "normalize_template: template smaller than the mask support");

    VolumeGrid ht = apply_lowpass(t, cfg);
    VolumeGrid m = mask_volume(t.nx, t.ny, t.nz, cfg);
    NormalizedTemplate out;
    out.ssp = cfg;
    out.m_sum = m.sum();
    for (std::size_t i = 0; i < ht.size(); ++i) {
        out.t1 += ht.data[i] * m.data[i];
        out.t2 += ht.data[i] * ht.data[i] * m.data[i];
    }
    double var = out.t2 - out.t1 * out.t1 / out.m_sum;
    require(var > 1e-12 * std::max(1.0, out.t2), errc::degenerate_template,
            "normalize_template: zero S-variance (template constant under the mask)");
    out.t_offset = -out.t1 / out.m_sum;
    out.t_scale = 1.0 / std::sqrt(var);
    out.t_hat = ht;
    for (std::size_t i = 0; i < ht.size(); ++i)
        out.t_hat.data[i] = m.data[i] * out.t_scale * (ht.data[i] + out.t_offset);
    return out;
}

} // namespace ttm
