#pragma once

#include <stdexcept>
#include <string>

namespace nlx {

/// Raised when a solver or experiment is configured outside its validity
/// envelope (contraction bound, grid padding, malformed CLI input). The
/// message always names the offending quantity.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlx
