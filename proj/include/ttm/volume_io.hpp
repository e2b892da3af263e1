#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttm/errors.hpp"
#include "ttm/rotation_set.hpp"
#include "ttm/volume.hpp"

namespace ttm {

namespace io_detail {

/// Volume files come as a `<name>.json` / `<name>.f32` pair; any of the three
/// spellings (stem, .json, .f32) addresses the pair.
inline std::string strip_volume_ext(const std::string& path) {
    std::filesystem::path p(path);
    if (p.extension() == ".json" || p.extension() == ".f32") return p.replace_extension().string();
    return path;
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::io, "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::format, path + ": malformed JSON (" + e.what() + ")");
    }
    return j;
}

inline void save_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), errc::io, "cannot write " + path);
    out << j.dump(2) << "\n";
}

inline std::vector<float> load_f32(const std::string& path, std::size_t expect) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::io, "cannot open " + path);
    in.seekg(0, std::ios::end);
    const std::size_t bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    require(bytes == expect * sizeof(float), errc::format,
            path + ": payload has " + std::to_string(bytes / sizeof(float)) + " floats, expected " + std::to_string(expect));
    std::vector<float> buf(expect);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    require(in.good(), errc::io, "short read on " + path);
    return buf;
}

inline void save_f32(const std::vector<float>& buf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), errc::io, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    require(out.good(), errc::io, "short write on " + path);
}

} // namespace io_detail

/// Reads a `<name>.json` + `<name>.f32` volume pair.
inline VolumeGrid read_volume(const std::string& path) {
    const std::string stem = io_detail::strip_volume_ext(path);
    nlohmann::json j = io_detail::load_json(stem + ".json");
    try {
        auto dims = j.at("dims").get<std::vector<std::int64_t>>();
        require(dims.size() == 3, errc::format, stem + ".json: dims must have 3 entries");
        for (auto d : dims)
            require(d > 0, errc::format, stem + ".json: dims must be positive");
        require(j.at("layout").get<std::string>() == "x-fastest", errc::format,
                stem + ".json: unsupported layout");
        require(j.at("dtype").get<std::string>() == "f32le", errc::format,
                stem + ".json: unsupported dtype");
        VolumeGrid v(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]),
                     j.at("voxel_size").get<double>(), j.at("center_origin").get<bool>());
        auto payload = io_detail::load_f32(stem + ".f32", v.size());
        for (std::size_t i = 0; i < payload.size(); ++i) v.data[i] = payload[i];
        require(v.all_finite(), errc::format, stem + ".f32: non-finite values");
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::format, stem + ".json: bad header (" + std::string(e.what()) + ")");
    }
}

/// Writes a `<name>.json` + `<name>.f32` volume pair (payload little-endian f32).
inline void write_volume(const VolumeGrid& v, const std::string& path) {
    const std::string stem = io_detail::strip_volume_ext(path);
    nlohmann::json j = {
        {"dims", {v.nx, v.ny, v.nz}},
        {"voxel_size", v.voxel_size},
        {"layout", "x-fastest"},
        {"center_origin", v.center_origin},
        {"dtype", "f32le"},
    };
    io_detail::save_json(j, stem + ".json");
    std::vector<float> payload(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) payload[i] = static_cast<float>(v.data[i]);
    io_detail::save_f32(payload, stem + ".f32");
}

inline RotationSet read_rotation_set(const std::string& path) {
    nlohmann::json j = io_detail::load_json(path);
    RotationSet rs;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        require(kind == "haar_random" || kind == "grid", errc::format, path + ": unknown rotation-set kind");
        rs.kind = kind == "haar_random" ? RotationSet::Kind::haar_random : RotationSet::Kind::grid;
        rs.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& q : j.at("quats")) {
            require(q.size() == 4, errc::format, path + ": quaternion needs 4 components");
            rs.quats.push_back(Quat{q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw error(errc::format, path + ": bad rotation set (" + std::string(e.what()) + ")");
    }
    rs.weights.assign(rs.quats.size(), 1.0 / static_cast<double>(rs.quats.size()));
    rs.validate();
    return rs;
}

inline void write_rotation_set(const RotationSet& rs, const std::string& path) {
    nlohmann::json quats = nlohmann::json::array();
    for (const auto& q : rs.quats) quats.push_back({q.a, q.b, q.c, q.d});
    nlohmann::json j = {
        {"kind", rs.kind == RotationSet::Kind::haar_random ? "haar_random" : "grid"},
        {"seed", rs.seed},
        {"quats", std::move(quats)},
    };
    io_detail::save_json(j, path);
}

} // namespace ttm
