#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ttm/errors.hpp"
#include "ttm/ssp.hpp"
#include "ttm/volume_io.hpp"

namespace ttm {

/// Engine configuration: SSP parameters, tensor order, rotation counts,
/// seeds, and peak selection. Serializable as a single JSON object; CLI flags
/// mirror the field names.
struct RunConfig {
    SspConfig ssp{1.0, 4.0, 6.0};
    int order = 4;
    std::size_t rot_build_count = 20000;
    std::size_t rot_classical_count = 512;
    std::uint64_t rot_build_seed = 11;
    std::uint64_t rot_classical_seed = 12;
    std::uint64_t noise_seed = 13;
    std::uint64_t sshopm_seed = 0xC0FFEE;
    double k_sigma = 5.0;
    double min_sep = 0.0; // <= 0 selects r1
    int threads = 0;      // 0 = auto (TTM_THREADS or hardware)

    void validate() const {
        ssp.validate();
        require(order >= 2 && order % 2 == 0, errc::config, "order must be even and >= 2");
        require(rot_build_count > 0, errc::config, "rot_build_count must be positive");
        require(rot_classical_count > 0, errc::config, "rot_classical_count must be positive");
        require(k_sigma >= 0.0, errc::config, "k_sigma must be nonnegative");
        require(threads >= 0, errc::config, "threads must be nonnegative");
    }

    nlohmann::json to_json() const {
        return {
            {"sigma_h", ssp.sigma_h},
            {"r0", ssp.r0},
            {"r1", ssp.r1},
            {"n", order},
            {"rot_build_count", rot_build_count},
            {"rot_classical_count", rot_classical_count},
            {"rot_build_seed", rot_build_seed},
            {"rot_classical_seed", rot_classical_seed},
            {"noise_seed", noise_seed},
            {"sshopm_seed", sshopm_seed},
            {"k_sigma", k_sigma},
            {"min_sep", min_sep},
            {"threads", threads},
        };
    }

    static RunConfig from_json(const nlohmann::json& j) {
        RunConfig c;
        try {
            c.ssp.sigma_h = j.value("sigma_h", c.ssp.sigma_h);
            c.ssp.r0 = j.value("r0", c.ssp.r0);
            c.ssp.r1 = j.value("r1", c.ssp.r1);
            c.order = j.value("n", c.order);
            c.rot_build_count = j.value("rot_build_count", c.rot_build_count);
            c.rot_classical_count = j.value("rot_classical_count", c.rot_classical_count);
            c.rot_build_seed = j.value("rot_build_seed", c.rot_build_seed);
            c.rot_classical_seed = j.value("rot_classical_seed", c.rot_classical_seed);
            c.noise_seed = j.value("noise_seed", c.noise_seed);
            c.sshopm_seed = j.value("sshopm_seed", c.sshopm_seed);
            c.k_sigma = j.value("k_sigma", c.k_sigma);
            c.min_sep = j.value("min_sep", c.min_sep);
            c.threads = j.value("threads", c.threads);
        } catch (const nlohmann::json::exception& e) {
            throw error(errc::config, std::string("bad config: ") + e.what());
        }
        c.validate();
        return c;
    }

    static RunConfig load(const std::string& path) {
        return from_json(io_detail::load_json(path));
    }
};

} // namespace ttm
