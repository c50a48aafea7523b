// states.hpp
// Density matrices, Bloch parametrization, closed-form qubit algebra and
// seeded random ensembles.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "wyskew/error.hpp"
#include "wyskew/linalg.hpp"

namespace wyskew {

// ---------------------------------------------------------------------------
// 3-vectors

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// a/|a|, or the zero vector when |a| == 0.
inline Vec3 unit_or_zero(const Vec3& a) {
    const double n = norm(a);
    return n == 0.0 ? Vec3{0.0, 0.0, 0.0} : (1.0 / n) * a;
}

// v . sigma
inline Matrix pauli_dot(const Vec3& v) {
    return Matrix{{v[2], complex{v[0], -v[1]}}, {complex{v[0], v[1]}, -v[2]}};
}

// ---------------------------------------------------------------------------
// Bloch vectors

class BlochVector {
public:
    static constexpr double radius_slack = 1e-12;

    explicit BlochVector(const Vec3& r) : r_(r) {
        for (double x : r_)
            if (!std::isfinite(x)) throw ValidationError("BlochVector: non-finite component");
        if (norm(r_) > 1.0 + radius_slack) {
            std::ostringstream msg;
            msg << "BlochVector: |r| = " << norm(r_) << " exceeds 1";
            throw ValidationError(msg.str());
        }
    }
    BlochVector(double x, double y, double z) : BlochVector(Vec3{x, y, z}) {}

    const Vec3& r() const noexcept { return r_; }
    double radius() const { return std::min(1.0, norm(r_)); }
    Vec3 direction() const { return unit_or_zero(r_); }
    double operator[](std::size_t i) const { return r_[i]; }

private:
    Vec3 r_;
};

// ---------------------------------------------------------------------------
// Density matrices

// Unit-trace PSD Hermitian matrix. Construction validates and caches the
// spectrum so square roots and powers do not re-diagonalize.
class DensityMatrix {
public:
    static constexpr double trace_tolerance = 1e-10;

    explicit DensityMatrix(const Matrix& m) : h_(m), spectrum_(eigh(h_)) {
        const complex tr = h_.matrix().trace();
        if (std::abs(tr.real() - 1.0) > trace_tolerance) {
            std::ostringstream msg;
            msg << "DensityMatrix: trace " << tr.real() << " differs from 1";
            throw ValidationError(msg.str());
        }
        spectrum_.eigenvalues = detail::clamp_psd(spectrum_.eigenvalues, "DensityMatrix");
    }

    const HermitianMatrix& hermitian() const noexcept { return h_; }
    const Matrix& matrix() const noexcept { return h_.matrix(); }
    operator const HermitianMatrix&() const noexcept { return h_; }
    std::size_t dim() const noexcept { return h_.dim(); }

    // Eigenvalues with roundoff-level values clamped to exactly zero.
    const Spectrum& spectrum() const noexcept { return spectrum_; }

    std::size_t rank() const {
        std::size_t r = 0;
        for (double x : spectrum_.eigenvalues)
            if (x > 0.0) ++r;
        return r;
    }

    HermitianMatrix sqrt() const {
        return HermitianMatrix(spectrum_.apply([](double x) { return std::sqrt(x); }));
    }

    // rho^p with 0^p = 0.
    HermitianMatrix power(double p) const {
        if (!(p > 0.0)) throw ValidationError("DensityMatrix::power: exponent must be positive");
        return HermitianMatrix(
            spectrum_.apply([p](double x) { return x == 0.0 ? 0.0 : std::pow(x, p); }));
    }

    static DensityMatrix maximally_mixed(std::size_t d) {
        return DensityMatrix(Matrix::identity(d) * (1.0 / static_cast<double>(d)));
    }

    // |k><k| in the computational basis.
    static DensityMatrix basis_state(std::size_t d, std::size_t k) {
        Matrix m(d, d);
        m(k, k) = 1.0;
        return DensityMatrix(m);
    }

    // U rho U^dagger for unitary U. The spectrum is carried over as
    // (lambda, U V) instead of re-diagonalizing.
    DensityMatrix rotated(const Matrix& u) const {
        if (!u.is_square() || u.rows() != dim()) {
            throw ValidationError("DensityMatrix::rotated: shape " + u.shape() + " vs dim " +
                                  std::to_string(dim()));
        }
        const double res = unitarity_residual(u);
        if (res > 1e-10) {
            std::ostringstream msg;
            msg << "DensityMatrix::rotated: unitarity residual " << res;
            throw ValidationError(msg.str());
        }
        Spectrum sp{spectrum_.eigenvalues, u * spectrum_.eigenvectors};
        return DensityMatrix(HermitianMatrix(u * matrix() * u.adjoint()), std::move(sp));
    }

private:
    DensityMatrix(HermitianMatrix h, Spectrum sp) : h_(std::move(h)), spectrum_(std::move(sp)) {}

    HermitianMatrix h_;
    Spectrum spectrum_;
};

inline HermitianMatrix matrix_sqrt_spectral(const DensityMatrix& rho) { return rho.sqrt(); }

// Tr rho^2
inline double purity(const DensityMatrix& rho) {
    return trace_product(rho.matrix(), rho.matrix()).real();
}

// |psi><psi| for a (not necessarily normalized) nonzero vector.
inline DensityMatrix pure_state(std::span<const complex> psi) {
    double n2 = 0.0;
    for (const auto& z : psi) n2 += std::norm(z);
    if (!(n2 > 0.0)) throw ValidationError("pure_state: zero vector");
    const std::size_t d = psi.size();
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = psi[i] * std::conj(psi[j]) / n2;
    return DensityMatrix(m);
}

// ---------------------------------------------------------------------------
// Qubit closed forms

// rho = (I + r.sigma)/2
inline DensityMatrix from_bloch(const BlochVector& r) {
    Matrix m = Matrix::identity(2) + pauli_dot(r.r());
    return DensityMatrix(m * 0.5);
}

// r_k = Tr(rho sigma_k)
inline BlochVector to_bloch(const DensityMatrix& rho) {
    if (rho.dim() != 2) {
        throw ValidationError("to_bloch: expected a qubit state, got dimension " +
                              std::to_string(rho.dim()));
    }
    const Matrix& m = rho.matrix();
    const Vec3 r{trace_product(m, pauli_x()).real(), trace_product(m, pauli_y()).real(),
                 trace_product(m, pauli_z()).real()};
    return BlochVector(r);
}

struct QubitSqrtCoefficients {
    double c_plus;
    double c_minus;
    double xi_plus;
    double xi_minus;
};

// c_pm = sqrt(1+|r|) pm sqrt(1-|r|), xi_pm = 1 pm sqrt(1-|r|^2).
inline QubitSqrtCoefficients sqrt_coefficients(double radius) {
    const double a = std::sqrt(1.0 + radius);
    const double b = std::sqrt(std::max(0.0, 1.0 - radius));
    const double root = std::sqrt(std::max(0.0, 1.0 - radius * radius));
    return {a + b, a - b, 1.0 + root, 1.0 - root};
}

// sqrt(rho) = [c_+ I + c_- (r_hat . sigma)] / (2 sqrt 2)
inline HermitianMatrix qubit_sqrt_closed(const BlochVector& r) {
    const auto c = sqrt_coefficients(r.radius());
    Matrix m = Matrix::identity(2) * c.c_plus + pauli_dot(r.direction()) * c.c_minus;
    return HermitianMatrix(m * (1.0 / (2.0 * std::numbers::sqrt2)));
}

inline constexpr double singular_radius_cutoff = 1.0 - 1e-8;

// rho^{-1} = 2 (I - r.sigma) / (1 - |r|^2), from the Neumann series of (I + r.sigma)^{-1}.
inline HermitianMatrix qubit_inverse_closed(const BlochVector& r) {
    const double rad = norm(r.r());
    if (rad >= singular_radius_cutoff) {
        std::ostringstream msg;
        msg << "qubit_inverse_closed: |r| = " << rad
            << " is at or beyond the singular cutoff; pure states need a generalized inverse";
        throw ValidationError(msg.str());
    }
    Matrix m = Matrix::identity(2) - pauli_dot(r.r());
    return HermitianMatrix(m * (2.0 / (1.0 - rad * rad)));
}

// det rho = (1 - |r|^2)/4
inline double qubit_det_closed(const BlochVector& r) {
    const double r2 = dot(r.r(), r.r());
    return std::max(0.0, 1.0 - r2) / 4.0;
}

// ---------------------------------------------------------------------------
// Seeded random ensembles

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream seed for (master, stream index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// mt19937_64 stream with portable uniform and Box-Muller normal variates.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // uniform in (0, 1)
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // E|z|^2 = 1
    complex standard_complex() {
        const double re = normal();
        const double im = normal();
        return complex{re, im} * (1.0 / std::numbers::sqrt2);
    }

    Matrix ginibre(std::size_t rows, std::size_t cols) {
        Matrix g(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) g(i, j) = standard_complex();
        return g;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// rho = G G^dagger / Tr(G G^dagger), G a dim x rank complex Ginibre matrix.
inline DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    if (dim == 0 || rank == 0 || rank > dim) {
        throw ValidationError("random_density: need 1 <= rank <= dim, got rank " +
                              std::to_string(rank) + ", dim " + std::to_string(dim));
    }
    GaussianSource src(seed);
    const Matrix g = src.ginibre(dim, rank);
    Matrix w = g * g.adjoint();
    const double tr = w.trace().real();
    return DensityMatrix(w * (1.0 / tr));
}

// scale * (G + G^dagger)/2
inline HermitianMatrix random_hermitian(std::size_t dim, std::uint64_t seed, double scale = 1.0) {
    if (dim == 0) throw ValidationError("random_hermitian: dim must be positive");
    GaussianSource src(seed);
    const Matrix g = src.ginibre(dim, dim);
    return HermitianMatrix((g + g.adjoint()) * (0.5 * scale));
}

// Haar unitary: Gram-Schmidt on a Ginibre matrix (positive-diagonal R).
inline Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
    GaussianSource src(seed);
    Matrix q = src.ginibre(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                complex proj{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < dim; ++i) q(i, j) -= proj * q(i, k);
            }
        }
        double n2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) n2 += std::norm(q(i, j));
        const double inv = 1.0 / std::sqrt(n2);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) *= inv;
    }
    return q;
}

// Uniform direction on the sphere scaled by radius.
inline Vec3 random_direction(GaussianSource& src) {
    for (;;) {
        const Vec3 v{src.normal(), src.normal(), src.normal()};
        const double n = norm(v);
        if (n > 1e-12) return (1.0 / n) * v;
    }
}

// rho -> U rho U^dagger, U unitary.
inline DensityMatrix conjugate(const DensityMatrix& rho, const Matrix& u) { return rho.rotated(u); }

}  // namespace wyskew
