#include "hebgha/core.hpp"

#include <cassert>
#include <cmath>

namespace hebgha {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw ValueError("invalid dimension: matrix must have rows >= 1 and cols >= 1");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix_scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Seed Seed::derive(std::uint64_t salt) const {
    return Seed{splitmix_scramble(value ^ ((salt + 1) * kGolden))};
}

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return splitmix_scramble(state_);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi)) {
        throw ValueError("invalid range: lo must be < hi");
    }
    double v = lo + uniform01() * (hi - lo);
    // (hi - lo) can round the product up to the open bound.
    if (v >= hi) {
        v = std::nextafter(hi, lo);
    }
    return v;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    for (;;) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) {
            continue;
        }
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }
}

std::uint64_t Rng::bounded(std::uint64_t n) {
    assert(n > 0);
    return next_u64() % n;
}

Matrix seeded_uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, Seed seed) {
    if (rows == 0 || cols == 0) {
        throw ValueError("invalid dimension: rows and cols must be >= 1");
    }
    if (!(lo < hi)) {
        throw ValueError("invalid range: lo must be < hi");
    }
    Matrix m(rows, cols);
    Rng rng(seed);
    for (double& entry : m.data()) {
        entry = rng.uniform(lo, hi);
    }
    return m;
}

double frobenius_delta(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("frobenius_delta: dimension mismatch");
    }
    double sum = 0.0;
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = da[i] - db[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

}  // namespace hebgha
