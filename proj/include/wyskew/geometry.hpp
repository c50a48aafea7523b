// geometry.hpp
// Quantum affinity, Hellinger distance and Hellinger angle.

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wyskew/coherence.hpp"
#include "wyskew/error.hpp"
#include "wyskew/linalg.hpp"
#include "wyskew/states.hpp"

namespace wyskew {

inline constexpr double affinity_clamp_tolerance = 1e-9;

// Tr(sqrt_rho sqrt_sigma) clamped into [0, 1]; roundoff beyond 1e-9 is an error.
inline double affinity_from_roots(const Matrix& sqrt_rho, const Matrix& sqrt_sigma) {
    const double a = trace_product(sqrt_rho, sqrt_sigma).real();
    if (a > 1.0 + affinity_clamp_tolerance || a < -affinity_clamp_tolerance) {
        std::ostringstream msg;
        msg << "affinity: value " << a << " outside [0, 1] beyond tolerance";
        throw ToleranceError(msg.str());
    }
    return std::clamp(a, 0.0, 1.0);
}

inline double affinity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    detail::require_same_dim(rho.dim(), sigma.dim(), "affinity");
    return affinity_from_roots(rho.sqrt(), sigma.sqrt());
}

// D = 2 - 2 A
inline double hellinger_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return 2.0 - 2.0 * affinity(rho, sigma);
}

// L = arccos A, in [0, pi/2].
inline double hellinger_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return std::acos(affinity(rho, sigma));
}

}  // namespace wyskew
