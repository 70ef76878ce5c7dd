#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace imlab {

/// Dense vector of probabilities or values.
using Vector = Eigen::VectorXd;

/// Row-major dense matrix. Every table in the library is row-major so that
/// flattening (s, a) or (s, a, s') tables yields the index s*A + a or
/// (s*A + a)*S + s'.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Seed = std::uint64_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Row-major flattening view of a table.
inline Eigen::Map<const Vector> flatten(const Matrix& table) {
    return {table.data(), table.size()};
}

/// Reshape a flat vector into a rows x cols row-major table.
inline Matrix unflatten(const Vector& flat, Eigen::Index rows, Eigen::Index cols) {
    return Eigen::Map<const Matrix>(flat.data(), rows, cols);
}

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates a probability or range invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter outside the domain of a formula (e.g. gamma = 0 in a ratio).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, long iterations)
        : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}
    long iterations() const noexcept { return iterations_; }

private:
    long iterations_;
};

/// The requested computation exceeds a hard size limit (e.g. 2^m enumeration).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// The reward does not lie in the affine span of a discriminator class.
class SpanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace imlab
