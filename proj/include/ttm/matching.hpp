#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttm/errors.hpp"
#include "ttm/fft.hpp"
#include "ttm/parallel.hpp"
#include "ttm/resample.hpp"
#include "ttm/rotation_set.hpp"
#include "ttm/sshopm.hpp"
#include "ttm/ssp.hpp"
#include "ttm/symtensor.hpp"
#include "ttm/tensor_field.hpp"
#include "ttm/volume.hpp"

namespace ttm {

/// Image prepared for matching: low-passed copy, its spectrum, and the
/// normalization weights w(x) = 1/||P_S(tau_x f)||_S.
struct PreparedImage {
    VolumeGrid f_low;
    fft::Spectrum spectrum;
    WeightVolume weights;
};

/// Rotates the preprocessed template and restores the exact zero sum by
/// subtracting the leaked DC over the mask. In the continuum t_hat_R stays
/// S-orthogonal to 1 (the mask is rotationally symmetric); trilinear
/// resampling leaks a ~1e-3 DC component which constant image offsets would
/// otherwise pick up through w-amplified correlations.
inline VolumeGrid rotate_template(const VolumeGrid& t_hat, const Quat& q, const VolumeGrid& mask,
                                  double mask_sum) {
    VolumeGrid rot = rotate_volume(t_hat, q);
    const double leak = rot.sum() / mask_sum;
    for (std::size_t i = 0; i < rot.size(); ++i) rot.data[i] -= leak * mask.data[i];
    return rot;
}

inline PreparedImage prepare_image(const VolumeGrid& f, const SspConfig& cfg, double eps_var) {
    PreparedImage p;
    p.f_low = apply_lowpass(f, cfg);
    p.spectrum = fft::forward(p.f_low);
    p.weights = weight_map(f, cfg, eps_var);
    return p;
}

inline PreparedImage prepare_image(const VolumeGrid& f, const SspConfig& cfg) {
    return prepare_image(f, cfg, default_eps_var(f, cfg));
}

/// One normalized cross-correlation map c(x, R) = w(x) (f_low * t_hat_R)(x)
/// for an already-rotated preprocessed template.
inline VolumeGrid correlation_map(const PreparedImage& img, const VolumeGrid& t_hat_rotated) {
    VolumeGrid c = cross_correlate_spectrum(img.spectrum, t_hat_rotated, img.f_low);
    for (std::size_t i = 0; i < c.size(); ++i) c.data[i] *= img.weights.w.data[i];
    return c;
}

/// Direct (windowed-sum) evaluation of c(x, R) at a single voxel, with the
/// same circular indexing the FFT path uses. Serves as the per-detection
/// classical re-score.
inline double correlation_at(const PreparedImage& img, const VolumeGrid& t_hat_rotated,
                             const std::array<int, 3>& pos) {
    const auto c = t_hat_rotated.center();
    double s = 0.0;
    for (int k = 0; k < t_hat_rotated.nz; ++k)
        for (int j = 0; j < t_hat_rotated.ny; ++j)
            for (int i = 0; i < t_hat_rotated.nx; ++i)
                s += img.f_low.at_wrapped(pos[0] + i - c[0], pos[1] + j - c[1], pos[2] + k - c[2]) *
                     t_hat_rotated.at(i, j, k);
    return s * img.weights.w.at(pos[0], pos[1], pos[2]);
}

/// Rotation-sampled classical matcher: per-voxel running maximum of c(x, R)
/// over the rotation set, with the argmax rotation index.
struct ClassicalResult {
    VolumeGrid best_c;
    std::vector<std::int32_t> best_rot;
    std::size_t n_correlations = 0;
};

inline ClassicalResult classical_match(const VolumeGrid& f, const VolumeGrid& t,
                                       const RotationSet& rots, const SspConfig& cfg) {
    rots.validate();
    const NormalizedTemplate norm = normalize_template(t, cfg);
    const VolumeGrid mask = mask_volume(t.nx, t.ny, t.nz, cfg);
    const PreparedImage img = prepare_image(f, cfg);

    ClassicalResult res;
    res.best_c = VolumeGrid(f.nx, f.ny, f.nz, f.voxel_size, f.center_origin);
    std::fill(res.best_c.data.begin(), res.best_c.data.end(), -std::numeric_limits<double>::infinity());
    res.best_rot.assign(f.size(), -1);
    res.n_correlations = rots.size();

    // Rotations are processed in fixed-size batches: the batch is computed in
    // parallel, the running max is merged in rotation order so results do not
    // depend on the worker count.
    const std::size_t batch = std::max<std::size_t>(1, static_cast<std::size_t>(thread_count()));
    std::vector<VolumeGrid> cmaps(std::min(batch, rots.size()));
    for (std::size_t base = 0; base < rots.size(); base += batch) {
        const std::size_t nb = std::min(batch, rots.size() - base);
        parallel_for(nb, [&](std::size_t bi) {
            VolumeGrid rot = rotate_template(norm.t_hat, rots.quats[base + bi], mask, norm.m_sum);
            cmaps[bi] = correlation_map(img, rot);
        });
        for (std::size_t bi = 0; bi < nb; ++bi) {
            const auto& c = cmaps[bi];
            const std::int32_t ridx = static_cast<std::int32_t>(base + bi);
            for (std::size_t v = 0; v < c.size(); ++v) {
                if (c.data[v] > res.best_c.data[v]) {
                    res.best_c.data[v] = c.data[v];
                    res.best_rot[v] = ridx;
                }
            }
        }
    }
    return res;
}

/// Tensor template T(z) = sum_i weight_i q_i^(.n) t_hat_{q_i}(z): the
/// quadrature of R^(.n) S(t)_R over SO(3), stored as n_components volumes.
/// One offline pass; component order is graded-lex.
inline TensorField build_tensor_template(const VolumeGrid& t, const RotationSet& rots,
                                         const SspConfig& cfg, int order = 4) {
    rots.validate();
    const NormalizedTemplate norm = normalize_template(t, cfg);
    const VolumeGrid mask = mask_volume(t.nx, t.ny, t.nz, cfg);
    TensorField tf(order, t.nx, t.ny, t.nz, true);
    tf.meta.ssp = cfg;
    tf.meta.rotset_seed = rots.seed;
    tf.meta.rotset_count = rots.size();

    const std::size_t n_comp = tf.n_components();
    const std::size_t vox = norm.t_hat.size();

    // Fixed batch size: accumulation order is (batch, rotation-in-batch),
    // independent of the thread count.
    const std::size_t batch = 64;
    std::vector<VolumeGrid> rotated(std::min(batch, rots.size()));
    std::vector<std::vector<double>> coeff(std::min(batch, rots.size()),
                                           std::vector<double>(n_comp));
    for (std::size_t base = 0; base < rots.size(); base += batch) {
        const std::size_t nb = std::min(batch, rots.size() - base);
        parallel_for(nb, [&](std::size_t bi) {
            const Quat& q = rots.quats[base + bi];
            rotated[bi] = rotate_template(norm.t_hat, q, mask, norm.m_sum);
            SymTensor p = tensor_power(q.components(), order);
            const double wq = rots.weights[base + bi];
            for (std::size_t c = 0; c < n_comp; ++c) coeff[bi][c] = wq * p.comp[c];
        });
        parallel_for(n_comp, [&](std::size_t c) {
            double* acc = tf.comps[c].data.data();
            for (std::size_t bi = 0; bi < nb; ++bi) {
                const double w = coeff[bi][c];
                const double* src = rotated[bi].data.data();
                for (std::size_t v = 0; v < vox; ++v) acc[v] += w * src[v];
            }
        });
    }
    return tf;
}

/// Correlation tensor C_n(x): one FFT correlation of the low-passed image per
/// tensor component, scaled by w(x). Invalid-weight voxels carry zero tensors.
struct CorrelationField {
    TensorField field;
    std::size_t n_correlations = 0;
};

inline void require_same_ssp(const SspConfig& a, const SspConfig& b, const char* who) {
    require(std::abs(a.sigma_h - b.sigma_h) < 1e-9 && std::abs(a.r0 - b.r0) < 1e-9 &&
                std::abs(a.r1 - b.r1) < 1e-9,
            errc::config, std::string(who) + ": tensor template was built with a different SSP config");
}

inline CorrelationField correlation_tensor_field(const PreparedImage& img, const TensorField& T) {
    T.validate();
    const VolumeGrid& tg = T.grid();
    require(tg.nx <= img.f_low.nx && tg.ny <= img.f_low.ny && tg.nz <= img.f_low.nz,
            errc::validation, "correlation_tensor_field: template support exceeds image");

    CorrelationField out;
    out.field = TensorField(T.order(), img.f_low.nx, img.f_low.ny, img.f_low.nz, img.f_low.center_origin);
    out.field.meta = T.meta;
    std::atomic<std::size_t> counter{0};
    parallel_for(T.n_components(), [&](std::size_t c) {
        VolumeGrid corr = cross_correlate_spectrum(img.spectrum, T.comps[c], img.f_low);
        for (std::size_t v = 0; v < corr.size(); ++v) corr.data[v] *= img.weights.w.data[v];
        out.field.comps[c] = std::move(corr);
        counter.fetch_add(1);
    });
    out.n_correlations = counter.load();
    return out;
}

inline CorrelationField correlation_tensor_field(const VolumeGrid& f, const TensorField& T,
                                                 const SspConfig& cfg) {
    require_same_ssp(T.meta.ssp, cfg, "correlation_tensor_field");
    return correlation_tensor_field(prepare_image(f, cfg), T);
}

/// Per-voxel Frobenius norm of the tensor field (the peak-location proxy).
inline VolumeGrid frobenius_map(const TensorField& T) {
    T.validate();
    const VolumeGrid& g = T.grid();
    VolumeGrid out(g.nx, g.ny, g.nz, g.voxel_size, g.center_origin);
    const std::size_t n_comp = T.n_components();
    for (std::size_t c = 0; c < n_comp; ++c) {
        const double mult = T.table->entries[c].mult;
        const double* src = T.comps[c].data.data();
        for (std::size_t v = 0; v < out.size(); ++v) out.data[v] += mult * src[v] * src[v];
    }
    for (double& v : out.data) v = std::sqrt(v);
    return out;
}

struct PeakParams {
    double k_sigma = 5.0;      // threshold mean(F) + k_sigma * std(F)
    double min_sep = 0.0;      // non-max suppression radius; <= 0 selects r1
    double border_margin = 0.0; // peaks within this of a face are flagged
};

struct Peak {
    std::array<int, 3> pos;
    double value = 0.0;
    bool border = false;
};

/// 26-neighborhood local maxima above mean + k_sigma * std, greedily
/// suppressed by descending value within min_sep. A constant map has no
/// peaks. The neighborhood wraps, matching the circular correlation domain.
inline std::vector<Peak> find_peaks(const VolumeGrid& F, const PeakParams& params) {
    require(params.min_sep > 0.0, errc::config, "find_peaks: min_sep must be positive");
    double mean = 0.0;
    for (double v : F.data) mean += v;
    mean /= static_cast<double>(F.size());
    double var = 0.0;
    for (double v : F.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(F.size());
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) return {};
    const double threshold = mean + params.k_sigma * sd;

    std::vector<Peak> cands;
    for (int k = 0; k < F.nz; ++k)
        for (int j = 0; j < F.ny; ++j)
            for (int i = 0; i < F.nx; ++i) {
                const double v = F.at(i, j, k);
                if (v < threshold) continue;
                bool is_max = true;
                for (int dk = -1; dk <= 1 && is_max; ++dk)
                    for (int dj = -1; dj <= 1 && is_max; ++dj)
                        for (int di = -1; di <= 1 && is_max; ++di) {
                            if (!di && !dj && !dk) continue;
                            if (F.at_wrapped(i + di, j + dj, k + dk) > v) is_max = false;
                        }
                if (is_max) cands.push_back({{i, j, k}, v, false});
            }

    std::sort(cands.begin(), cands.end(), [&](const Peak& a, const Peak& b) {
        if (a.value != b.value) return a.value > b.value;
        return F.index(a.pos[0], a.pos[1], a.pos[2]) < F.index(b.pos[0], b.pos[1], b.pos[2]);
    });
    std::vector<Peak> kept;
    for (const auto& c : cands) {
        bool ok = true;
        for (const auto& k : kept) {
            const double dx = c.pos[0] - k.pos[0], dy = c.pos[1] - k.pos[1], dz = c.pos[2] - k.pos[2];
            if (std::sqrt(dx * dx + dy * dy + dz * dz) < params.min_sep) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        Peak p = c;
        const double m = params.border_margin;
        p.border = p.pos[0] < m || p.pos[0] > F.nx - 1 - m ||
                   p.pos[1] < m || p.pos[1] > F.ny - 1 - m ||
                   p.pos[2] < m || p.pos[2] > F.nz - 1 - m;
        kept.push_back(p);
    }
    return kept;
}

/// Dominant Z-eigenpair of the correlation tensor at one voxel: the match
/// rotation candidate.
inline ZEigenpair recover_rotation(const TensorField& C, const std::array<int, 3>& pos,
                                   const SshopmOptions& opt = {}) {
    const VolumeGrid& g = C.grid();
    require(pos[0] >= 0 && pos[0] < g.nx && pos[1] >= 0 && pos[1] < g.ny && pos[2] >= 0 && pos[2] < g.nz,
            errc::validation, "recover_rotation: position out of bounds");
    return sshopm(C.at(pos[0], pos[1], pos[2]), opt);
}

struct Detection {
    std::array<int, 3> pos{};
    Quat quat = Quat::identity();
    double lambda = 0.0; // phi(q) = C_n(pos) . q^(.n)
    double frob = 0.0;   // ||C_n(pos)||_F
    bool border = false;
    std::optional<double> ncc_rescore;
};

struct TtmParams {
    int order = 4;
    PeakParams peaks;
    SshopmOptions eigen;
    bool classical_rescore = false;
};

/// Full tensorial matcher: tensor template (built or supplied) ->
/// 35-correlation tensor field -> Frobenius peak proxy -> per-peak SS-HOPM
/// rotation recovery. Detections are sorted by lambda descending.
inline std::vector<Detection> ttm_match(const VolumeGrid& f, const TensorField& T,
                                        const SspConfig& cfg, const TtmParams& params,
                                        std::size_t* n_correlations = nullptr) {
    require_same_ssp(T.meta.ssp, cfg, "ttm_match");
    PreparedImage img = prepare_image(f, cfg);
    CorrelationField corr = correlation_tensor_field(img, T);
    if (n_correlations) *n_correlations = corr.n_correlations;
    VolumeGrid fmap = frobenius_map(corr.field);

    PeakParams pk = params.peaks;
    if (pk.min_sep <= 0.0) pk.min_sep = cfg.r1;
    if (pk.border_margin <= 0.0) pk.border_margin = cfg.r1;
    std::vector<Peak> peaks = find_peaks(fmap, pk);

    std::vector<Detection> dets(peaks.size());
    parallel_for(peaks.size(), [&](std::size_t i) {
        const Peak& p = peaks[i];
        ZEigenpair pair = recover_rotation(corr.field, p.pos, params.eigen);
        Detection d;
        d.pos = p.pos;
        d.quat = pair.q;
        d.lambda = pair.lambda;
        d.frob = p.value;
        d.border = p.border;
        dets[i] = d;
    });

    std::sort(dets.begin(), dets.end(), [&](const Detection& a, const Detection& b) {
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        return f.index(a.pos[0], a.pos[1], a.pos[2]) < f.index(b.pos[0], b.pos[1], b.pos[2]);
    });
    return dets;
}

inline std::vector<Detection> ttm_match(const VolumeGrid& f, const VolumeGrid& t,
                                        const RotationSet& rots, const SspConfig& cfg,
                                        const TtmParams& params = {},
                                        std::size_t* n_correlations = nullptr) {
    TensorField T = build_tensor_template(t, rots, cfg, params.order);
    return ttm_match(f, T, cfg, params, n_correlations);
}

/// Optional per-detection classical re-score: one direct correlation at the
/// recovered (pos, q), reported as a calibrated NCC value.
inline void classical_rescore(std::vector<Detection>& dets, const PreparedImage& img,
                              const NormalizedTemplate& norm) {
    const VolumeGrid& th = norm.t_hat;
    const VolumeGrid mask = mask_volume(th.nx, th.ny, th.nz, norm.ssp);
    parallel_for(dets.size(), [&](std::size_t i) {
        VolumeGrid rot = rotate_template(th, dets[i].quat, mask, norm.m_sum);
        dets[i].ncc_rescore = correlation_at(img, rot, dets[i].pos);
    });
}

// --- detection file format: JSON lines, one object per detection ---

inline nlohmann::json detection_to_json(const Detection& d) {
    nlohmann::json j = {
        {"pos", {d.pos[0], d.pos[1], d.pos[2]}},
        {"quat", {d.quat.a, d.quat.b, d.quat.c, d.quat.d}},
        {"lambda", d.lambda},
        {"frob", d.frob},
        {"border", d.border},
    };
    if (d.ncc_rescore) j["ncc_rescore"] = *d.ncc_rescore;
    return j;
}

inline void write_detections(const std::vector<Detection>& dets, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), errc::io, "cannot write " + path);
    for (const auto& d : dets) out << detection_to_json(d).dump() << "\n";
    require(out.good(), errc::io, "short write on " + path);
}

inline std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::io, "cannot open " + path);
    std::vector<Detection> dets;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            Detection d;
            d.pos = {j.at("pos")[0].get<int>(), j.at("pos")[1].get<int>(), j.at("pos")[2].get<int>()};
            d.quat = Quat{j.at("quat")[0].get<double>(), j.at("quat")[1].get<double>(),
                          j.at("quat")[2].get<double>(), j.at("quat")[3].get<double>()};
            d.lambda = j.at("lambda").get<double>();
            d.frob = j.at("frob").get<double>();
            d.border = j.at("border").get<bool>();
            if (j.contains("ncc_rescore")) d.ncc_rescore = j["ncc_rescore"].get<double>();
            dets.push_back(d);
        } catch (const nlohmann::json::exception& e) {
            throw error(errc::format, path + ": bad detection line (" + std::string(e.what()) + ")");
        }
    }
    return dets;
}

} // namespace ttm
