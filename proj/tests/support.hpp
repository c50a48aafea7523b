// Shared helpers for the unit tests: matrix comparisons and small
// hand-rolled generators for property tests.
#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wyskew/wyskew.hpp"

namespace wyskew::testing {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    EXPECT_EQ(a.rows(), b.rows());
    EXPECT_EQ(a.cols(), b.cols());
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

inline double max_abs_diff(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

// Sequential cases: case i gets its own seed stream.
struct Cases {
    std::uint64_t master;
    std::uint64_t seed(std::uint64_t i, std::uint64_t sub = 0) const {
        return derive_seed(derive_seed(master, i), sub);
    }
};

// Random Bloch vector with radius drawn uniformly in [lo, hi].
inline BlochVector random_bloch(std::uint64_t seed, double lo = 0.0, double hi = 0.999) {
    GaussianSource src(seed);
    const Vec3 n = random_direction(src);
    const double r = lo + (hi - lo) * src.uniform();
    return BlochVector(r * n);
}

inline Vec3 random_unit(std::uint64_t seed) {
    GaussianSource src(seed);
    return random_direction(src);
}

inline std::vector<double> grid(double lo, double hi, std::size_t n) { return uniform_grid(lo, hi, n); }

}  // namespace wyskew::testing
