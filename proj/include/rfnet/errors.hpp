#ifndef RFNET_ERRORS_HPP
#define RFNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rfnet {

/// Invalid configuration file, key, or flag value.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or truncated data file (IDX, kernel dump, checkpoint).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values encountered during optimization.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rfnet

#endif
