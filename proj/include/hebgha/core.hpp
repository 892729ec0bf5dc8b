#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hebgha {

using Vector = std::vector<double>;

// Error hierarchy. Every failure the library reports derives from Error so
// callers can catch one type at the CLI boundary.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

// Bad argument values: zero dimensions, empty ranges, non-positive rates,
// invalid splits or spectra.
class ValueError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class LoadError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Dense row-major matrix of doubles. The only linear algebra in this
/// project is the handful of kernels the trainers and the oracle need,
/// so this stays deliberately small.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Seed for the project-wide deterministic PRNG. Same seed, same stream,
/// bit for bit, on every platform.
struct Seed {
    std::uint64_t value = 0;

    /// Derives an independent sub-stream seed, e.g. one per grid cell or
    /// one per purpose (split vs. weight init). Defined as one splitmix64
    /// scramble of value XOR (salt+1)*0x9E3779B97F4A7C15.
    Seed derive(std::uint64_t salt) const;

    bool operator==(const Seed&) const = default;
};

/// splitmix64 stream generator (Steele, Lea, Vigna). The full recurrence,
/// so the stream can be reproduced in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
///
/// Doubles in [0,1) take the top 53 bits: (u64 >> 11) * 2^-53.
/// Gaussians use the Marsaglia polar method (rejection on the unit disc,
/// second value cached). No trig: compilers fuse sin/cos pairs into
/// sincos at higher optimization levels, and glibc's sincos rounds
/// differently from the separate calls, which would make the stream
/// depend on the optimization level.
class Rng {
public:
    explicit Rng(Seed seed) : state_(seed.value) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform01();

    /// Uniform in [lo, hi). Requires lo < hi.
    double uniform(double lo, double hi);

    /// Standard normal deviate.
    double gaussian();

    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t bounded(std::uint64_t n);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// rows x cols matrix with i.i.d. entries uniform in [lo, hi), generated
/// from the splitmix64 stream in row-major order. Pure function of its
/// arguments.
Matrix seeded_uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, Seed seed);

/// sqrt(sum (a_ij - b_ij)^2), accumulated in row-major order.
double frobenius_delta(const Matrix& a, const Matrix& b);

/// Dot product accumulated left to right. All trainers go through this
/// one kernel so that reference and fabric executions agree bit for bit.
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace hebgha
