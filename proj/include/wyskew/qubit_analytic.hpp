// qubit_analytic.hpp
// Closed-form single-qubit machinery: averaged rotation axis, Bloch-vector
// evolution (direct and Rodrigues/adjoint-representation routes), analytic
// Hellinger angle and skew information, and the worked qubit example that
// cross-checks all of it against the generic numeric pipeline.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "wyskew/coherence.hpp"
#include "wyskew/dynamics.hpp"
#include "wyskew/error.hpp"
#include "wyskew/geometry.hpp"
#include "wyskew/linalg.hpp"
#include "wyskew/quadrature.hpp"
#include "wyskew/states.hpp"

namespace wyskew {

using Mat3 = std::array<Vec3, 3>;

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline Mat3 identity3() { return Mat3{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}; }

// Generator family K_phi = varpi (alpha I + n_phi . sigma).
struct AxisFamily {
    std::function<Vec3(double)> n_hat;
    double varpi = 1.0;
    double alpha = 0.0;

    Vec3 axis(double phi) const {
        const Vec3 n = n_hat(phi);
        if (std::abs(norm(n) - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "AxisFamily: |n(" << phi << ")| = " << norm(n) << " is not 1";
            throw ValidationError(msg.str());
        }
        return n;
    }

    HermitianMatrix generator_at(double phi) const {
        return HermitianMatrix(Matrix::identity(2) * (varpi * alpha) + pauli_dot(axis(phi)) * varpi);
    }
};

inline AxisFamily constant_axis(const Vec3& n, double varpi = 1.0, double alpha = 0.0) {
    const Vec3 unit = unit_or_zero(n);
    if (norm(unit) == 0.0) throw ValidationError("constant_axis: zero axis");
    return {[unit](double) { return unit; }, varpi, alpha};
}

// n(phi) = (cos(rate phi), sin(rate phi), 0)
inline AxisFamily rotating_xy_axis(double rate, double varpi = 1.0, double alpha = 0.0) {
    return {[rate](double phi) { return Vec3{std::cos(rate * phi), std::sin(rate * phi), 0.0}; },
            varpi, alpha};
}

// Largest ||[K_a, K_b]||_2 over all pairs of sample points.
inline double self_commutation_residual(const AxisFamily& axis, const std::vector<double>& phis) {
    double worst = 0.0;
    for (std::size_t i = 0; i < phis.size(); ++i)
        for (std::size_t j = i + 1; j < phis.size(); ++j)
            worst = std::max(worst, schatten2_norm(commutator(axis.generator_at(phis[i]),
                                                              axis.generator_at(phis[j]))));
    return worst;
}

struct RotationState {
    Vec3 sigma_avg;  // (1/phi) int_0^phi n(phi') dphi'
    double gamma;    // varpi phi |sigma_avg| / hbar
    double delta;    // varpi phi / hbar
};

// Averaged axis by Gauss-Legendre, doubling the node count until successive
// estimates agree to 1e-10.
inline RotationState sigma_average(const AxisFamily& axis, double phi, double hbar = 1.0,
                                   int n_quad = 16) {
    if (!(hbar > 0.0)) throw ValidationError("sigma_average: hbar must be positive");
    Vec3 avg;
    if (std::abs(phi) < 1e-12) {
        avg = axis.axis(0.0);
    } else {
        auto estimate = [&](std::size_t n) {
            const QuadratureRule rule = gauss_legendre_unit(n);
            Vec3 s{0.0, 0.0, 0.0};
            for (std::size_t q = 0; q < n; ++q) s = s + rule.weights[q] * axis.axis(phi * rule.nodes[q]);
            return s;  // already divided by phi: int_0^1 n(phi t) dt
        };
        std::size_t n = static_cast<std::size_t>(std::max(2, n_quad));
        Vec3 prev = estimate(n);
        bool done = false;
        for (; n <= 4096; n *= 2) {
            const Vec3 next = estimate(2 * n);
            if (norm(next - prev) < 1e-10) {
                prev = next;
                done = true;
                break;
            }
            prev = next;
        }
        if (!done) throw ToleranceError("sigma_average: quadrature did not converge");
        avg = prev;
    }
    if (norm(avg) > 1.0 + 1e-10) throw ToleranceError("sigma_average: |Sigma| exceeds 1");
    const double delta = axis.varpi * phi / hbar;
    return {avg, delta * norm(avg), delta};
}

// U = e^{-i delta alpha} [I cos(gamma) - i (Sigma_hat . sigma) sin(gamma)]
inline Matrix unitary_closed(const AxisFamily& axis, double phi, double hbar = 1.0) {
    const RotationState st = sigma_average(axis, phi, hbar);
    const Vec3 dir = unit_or_zero(st.sigma_avg);
    Matrix u = Matrix::identity(2) * std::cos(st.gamma) +
               pauli_dot(dir) * complex{0.0, -std::sin(st.gamma)};
    return u * std::exp(complex{0.0, -st.delta * axis.alpha});
}

inline UnitaryFamily axis_unitary_family(const AxisFamily& axis, double hbar = 1.0) {
    return UnitaryFamily([axis, hbar](double phi) { return unitary_closed(axis, phi, hbar); }, 2,
                         FamilyKind::axis_family);
}

// r_phi = cos(2g) r0 + (1 - cos(2g)) (S.r0) S + sin(2g) (S x r0)
inline BlochVector bloch_evolve_closed(const BlochVector& r0, const AxisFamily& axis, double phi,
                                       double hbar = 1.0) {
    const RotationState st = sigma_average(axis, phi, hbar);
    const Vec3 s = unit_or_zero(st.sigma_avg);
    const double c2 = std::cos(2.0 * st.gamma);
    const double s2 = std::sin(2.0 * st.gamma);
    const Vec3& r = r0.r();
    return BlochVector(c2 * r + ((1.0 - c2) * dot(s, r)) * s + s2 * cross(s, r));
}

// Lambda_jl = eps_jkl S_k, so Lambda v = S x v.
inline Mat3 lambda_matrix(const Vec3& s) {
    return Mat3{Vec3{0.0, -s[2], s[1]}, Vec3{s[2], 0.0, -s[0]}, Vec3{-s[1], s[0], 0.0}};
}

// Generators of the adjoint (spin-1) representation of su(2), (J_k)_jl = -i eps_kjl.
inline std::array<Matrix, 3> adjoint_generators() {
    const complex i{0.0, 1.0};
    return {Matrix{{0, 0, 0}, {0, 0, -i}, {0, i, 0}},
            Matrix{{0, 0, i}, {0, 0, 0}, {-i, 0, 0}},
            Matrix{{0, -i, 0}, {i, 0, 0}, {0, 0, 0}}};
}

// S = I + (1 - cos 2g) Lambda^2 + sin(2g) Lambda = exp(2 g Lambda)
inline Mat3 rodrigues_matrix(const Vec3& sigma_hat, double gamma) {
    if (std::abs(norm(sigma_hat) - 1.0) > 1e-12) {
        throw ValidationError("rodrigues_matrix: axis is not a unit vector");
    }
    const Mat3 l = lambda_matrix(sigma_hat);
    const Mat3 l2 = l * l;
    const double a = 1.0 - std::cos(2.0 * gamma);
    const double b = std::sin(2.0 * gamma);
    Mat3 s = identity3();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s[i][j] += a * l2[i][j] + b * l[i][j];
    return s;
}

// cos L = (1/4)[c0+ cphi+ + c0- cphi- (r_phi_hat . r0_hat)], valid for unequal radii.
inline double cos_hellinger_qubit(const BlochVector& r0, const BlochVector& r_phi) {
    const auto c0 = sqrt_coefficients(r0.radius());
    const auto cp = sqrt_coefficients(r_phi.radius());
    return 0.25 * (c0.c_plus * cp.c_plus +
                   c0.c_minus * cp.c_minus * dot(r_phi.direction(), r0.direction()));
}

// [sqrt(rho_phi), K_phi] = i (varpi c- / sqrt 2) (r_hat x n_hat) . sigma
inline Matrix sqrt_commutator_closed(const BlochVector& r_phi, const Vec3& n_hat, double varpi) {
    const auto c = sqrt_coefficients(r_phi.radius());
    const Vec3 v = cross(r_phi.direction(), n_hat);
    return pauli_dot(v) * complex{0.0, varpi * c.c_minus / std::numbers::sqrt2};
}

// I = (1/2)(varpi c-)^2 |r_hat x n_hat|^2 = varpi^2 xi- |r_hat x n_hat|^2
inline double wysi_qubit_closed(const BlochVector& r_phi, const Vec3& n_hat, double varpi) {
    if (std::abs(norm(n_hat) - 1.0) > 1e-12) {
        throw ValidationError("wysi_qubit_closed: axis is not a unit vector");
    }
    const auto c = sqrt_coefficients(r_phi.radius());
    const Vec3 v = cross(r_phi.direction(), n_hat);
    return 0.5 * (varpi * c.c_minus) * (varpi * c.c_minus) * dot(v, v);
}

// ---------------------------------------------------------------------------
// Worked example

struct WorkedExampleParams {
    double r0_mag = 0.6;
    double azimuth = 0.0;
    double varpi = 1.0;
    double alpha = 0.0;
    double hbar = 1.0;
    Vec3 axis{0.0, 0.0, 1.0};
    std::vector<double> phi_grid = uniform_grid(0.0, 2.0 * std::numbers::pi, 201);
};

struct WorkedExample {
    BoundReport closed;   // every column from closed forms
    BoundReport numeric;  // generic bound_check on the same instance
    double max_deviation = 0.0;        // worst column mismatch closed vs numeric
    double wysi_spread = 0.0;          // max - min of closed-form WYSI over the grid
};

inline constexpr double worked_example_tolerance = 1e-8;

// Equatorial r0 = r0_mag (cos az, sin az, 0) under a constant axis. The closed
// report uses only Bloch-level formulas: rotation for r_phi, the
// unequal-radius cos L, d cos L/dphi = (xi-/2)(2 varpi/hbar)(n x r_phi_hat).r0_hat
// and the closed skew information.
inline WorkedExample worked_example(const WorkedExampleParams& p) {
    if (!(p.r0_mag > 0.0 && p.r0_mag < 1.0)) {
        throw ValidationError("worked_example: r0 must lie in (0, 1)");
    }
    const AxisFamily axis = constant_axis(p.axis, p.varpi, p.alpha);
    const Vec3 n = axis.axis(0.0);
    if (self_commutation_residual(axis, {0.0, 0.5, 1.0, 2.0}) > 1e-8) {
        throw ToleranceError("worked_example: generator family is not self-commuting");
    }
    const BlochVector r0(p.r0_mag * std::cos(p.azimuth), p.r0_mag * std::sin(p.azimuth), 0.0);
    const auto coeff = sqrt_coefficients(r0.radius());

    WorkedExample out;
    double wmin = std::numeric_limits<double>::infinity();
    double wmax = -wmin;
    for (double phi : p.phi_grid) {
        const BlochVector rp = bloch_evolve_closed(r0, axis, phi, p.hbar);
        BoundRow row;
        row.phi = phi;
        row.cos_hellinger = cos_hellinger_qubit(r0, rp);
        const double slope = 0.5 * coeff.xi_minus * (2.0 * p.varpi / p.hbar) *
                             dot(cross(n, rp.direction()), r0.direction());
        row.lhs = std::abs(slope);
        row.analytic_lhs = row.lhs;
        row.wysi = wysi_qubit_closed(rp, n, p.varpi);
        row.rhs = std::numbers::sqrt2 / p.hbar * std::sqrt(row.wysi);
        row.margin = row.rhs - row.lhs;
        row.tolerance = base_violation_tolerance;
        row.violated = row.margin < -row.tolerance;
        out.closed.rows.push_back(row);
        wmin = std::min(wmin, row.wysi);
        wmax = std::max(wmax, row.wysi);
    }
    out.wysi_spread = wmax - wmin;
    if (out.wysi_spread > 1e-11) {
        throw ToleranceError("worked_example: skew information is not a constant of motion");
    }

    BoundConfig cfg;
    cfg.hbar = p.hbar;
    cfg.phi_grid.assign(p.phi_grid.begin(), p.phi_grid.end());
    out.numeric = bound_check(from_bloch(r0), exp_family(axis.generator_at(0.0), p.hbar), cfg);
    for (std::size_t i = 0; i < p.phi_grid.size(); ++i) {
        const BoundRow& a = out.closed.rows[i];
        const BoundRow& b = out.numeric.rows[i];
        const double dev = std::max({std::abs(a.lhs - b.lhs), std::abs(a.rhs - b.rhs),
                                     std::abs(a.wysi - b.wysi),
                                     std::abs(a.cos_hellinger - b.cos_hellinger)});
        out.max_deviation = std::max(out.max_deviation, dev);
        if (dev > worked_example_tolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "worked_example: closed form and numeric pipeline differ by " << dev
                << " at phi = " << a.phi;
            throw ToleranceError(msg.str());
        }
    }
    return out;
}

}  // namespace wyskew
