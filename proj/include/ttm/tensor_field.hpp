#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttm/errors.hpp"
#include "ttm/ssp.hpp"
#include "ttm/symtensor.hpp"
#include "ttm/volume.hpp"
#include "ttm/volume_io.hpp"

namespace ttm {

/// A per-voxel compressed symmetric tensor stored as n_components component
/// volumes in graded-lex order: the tensor template T(z) and the correlation
/// tensor C_n(x).
struct TensorField {
    const MultiIndexTable* table = nullptr;
    std::vector<VolumeGrid> comps;

    struct Meta {
        std::string template_id;
        SspConfig ssp;
        std::uint64_t rotset_seed = 0;
        std::size_t rotset_count = 0;
    } meta;

    TensorField() = default;

    TensorField(int order, int nx, int ny, int nz, bool center_origin) : table(&MultiIndexTable::get(order)) {
        comps.assign(table->size(), VolumeGrid(nx, ny, nz, 1.0, center_origin));
    }

    int order() const noexcept { return table ? table->order : 0; }
    std::size_t n_components() const noexcept { return comps.size(); }
    const VolumeGrid& grid() const { return comps.at(0); }

    /// Compressed tensor extracted at one voxel.
    SymTensor at(int i, int j, int k) const {
        SymTensor t(order());
        const std::size_t idx = comps[0].index(i, j, k);
        for (std::size_t c = 0; c < comps.size(); ++c) t.comp[c] = comps[c].data[idx];
        return t;
    }

    void validate() const {
        require(table != nullptr && !comps.empty(), errc::validation, "TensorField: empty");
        require(comps.size() == table->size(), errc::validation, "TensorField: component count mismatch");
        for (const auto& c : comps)
            require(c.same_dims(comps[0]), errc::validation, "TensorField: component dims mismatch");
    }
};

/// Writes `<name>.json` + `<name>.f32` with the component payloads
/// concatenated in header (graded-lex) order.
inline void write_tensor_field(const TensorField& tf, const std::string& path) {
    tf.validate();
    const std::string stem = io_detail::strip_volume_ext(path);
    const VolumeGrid& g = tf.grid();
    nlohmann::json j = {
        {"order", tf.order()},
        {"dim", 4},
        {"n_components", tf.n_components()},
        {"index_order", "graded-lex-desc"},
        {"dims", {g.nx, g.ny, g.nz}},
        {"center_origin", g.center_origin},
        {"template_id", tf.meta.template_id},
        {"rotset_seed", tf.meta.rotset_seed},
        {"rotset_count", tf.meta.rotset_count},
        {"ssp", {{"sigma_h", tf.meta.ssp.sigma_h}, {"r0", tf.meta.ssp.r0}, {"r1", tf.meta.ssp.r1}}},
        {"dtype", "f32le"},
    };
    io_detail::save_json(j, stem + ".json");
    std::vector<float> payload;
    payload.reserve(tf.n_components() * g.size());
    for (const auto& c : tf.comps)
        for (double v : c.data) payload.push_back(static_cast<float>(v));
    io_detail::save_f32(payload, stem + ".f32");
}

inline TensorField read_tensor_field(const std::string& path) {
    const std::string stem = io_detail::strip_volume_ext(path);
    nlohmann::json j = io_detail::load_json(stem + ".json");
    try {
        const int order = j.at("order").get<int>();
        require(j.at("dim").get<int>() == 4, errc::format, stem + ".json: only dim=4 tensors supported");
        require(j.at("index_order").get<std::string>() == "graded-lex-desc", errc::format,
                stem + ".json: unsupported index order");
        auto dims = j.at("dims").get<std::vector<int>>();
        require(dims.size() == 3 && dims[0] > 0 && dims[1] > 0 && dims[2] > 0, errc::format,
                stem + ".json: bad dims");
        TensorField tf(order, dims[0], dims[1], dims[2], j.value("center_origin", true));
        require(j.at("n_components").get<std::size_t>() == tf.n_components(), errc::format,
                stem + ".json: n_components does not match order");
        tf.meta.template_id = j.value("template_id", "");
        tf.meta.rotset_seed = j.value("rotset_seed", std::uint64_t{0});
        tf.meta.rotset_count = j.value("rotset_count", std::size_t{0});
        if (j.contains("ssp")) {
            tf.meta.ssp.sigma_h = j["ssp"].value("sigma_h", 1.0);
            tf.meta.ssp.r0 = j["ssp"].value("r0", 4.0);
            tf.meta.ssp.r1 = j["ssp"].value("r1", 6.0);
        }
        const std::size_t vox = tf.grid().size();
        auto payload = io_detail::load_f32(stem + ".f32", tf.n_components() * vox);
        for (std::size_t c = 0; c < tf.n_components(); ++c)
            for (std::size_t i = 0; i < vox; ++i) tf.comps[c].data[i] = payload[c * vox + i];
        return tf;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::format, stem + ".json: bad tensor header (" + std::string(e.what()) + ")");
    }
}

} // namespace ttm
