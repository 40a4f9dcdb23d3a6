#pragma once

#include <stdexcept>
#include <string>

namespace esn {

/// Input or file-format problems: malformed CSV cells, series too short,
/// pool-size guards, inconsistent model files.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failures: factorization breakdown, eigenvalue iteration cap,
/// non-finite intermediate values.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown by the fitting pipeline when the transformed series has zero
/// variance. Callers catch it and fall back to a flat forecast.
class ConstantSeriesSignal : public std::runtime_error {
public:
    ConstantSeriesSignal()
        : std::runtime_error("series is constant after preprocessing") {}
};

}  // namespace esn
