#pragma once

#include <stdexcept>
#include <string>

namespace qav {

// User-supplied configuration is invalid (CLI maps this to exit code 3).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal invariant was violated (CLI maps this to exit code 4).
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace qav

#define QAV_CHECK(cond, msg)                                \
    do {                                                    \
        if (!(cond)) {                                      \
            throw ::qav::InternalError(std::string(msg));   \
        }                                                   \
    } while (0)
