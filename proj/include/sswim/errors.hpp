#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sswim {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cholesky failure or a non-finite intermediate.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) + ", got " +
                             std::to_string(got));
    }
}

} // namespace sswim
