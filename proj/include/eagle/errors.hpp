#pragma once

#include <stdexcept>
#include <string>

namespace eagle {

/// Shape or divisibility violation (image vs kernel, patch size, geometry).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Scalar parameter outside its valid range.
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Inconsistent run configuration (missing reference image, empty dataset, ...).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// File I/O failure or malformed on-disk data.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace eagle
