#pragma once

#include <stdexcept>
#include <string>

namespace ttm {

/// Error categories; the CLI maps each to a distinct exit code.
enum class errc {
    generic = 1,
    io = 2,                   // missing/unreadable files
    format = 3,               // malformed headers, configs, truncated payloads
    degenerate_template = 4,  // zero-variance template under the mask
    validation = 5,           // precondition violations (dims, norms, bounds)
    config = 6,               // invalid configuration values, FFT plan overflow
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) throw error(code, what);
}

} // namespace ttm
