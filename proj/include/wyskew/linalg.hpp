// linalg.hpp
// Small dense complex linear algebra: matrices, a cyclic Jacobi Hermitian
// eigensolver, spectral matrix functions, and the resolvent-integral route to
// fractional powers. Sized for d <= 16; nothing here allocates beyond O(d^2).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wyskew/error.hpp"
#include "wyskew/quadrature.hpp"

namespace wyskew {

using complex = std::complex<double>;

inline constexpr double hermiticity_tolerance = 1e-10;
inline constexpr double psd_tolerance = 1e-10;

// Dense row-major complex matrix.
namespace detail {

// a*b without the inf/nan recovery path of std::complex operator*
inline complex cmul(complex a, complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace detail

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, complex{0.0, 0.0}) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw ValidationError("Matrix: entry count " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
        }
    }

    Matrix(std::initializer_list<std::initializer_list<complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ValidationError("Matrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const double> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const complex> data() const noexcept { return data_; }

    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    complex trace() const {
        complex t{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const complex& z) {
            return std::isfinite(z.real()) && std::isfinite(z.imag());
        });
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(complex s) {
        for (auto& z : data_) z = detail::cmul(z, s);
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, complex s) { return a *= s; }
    friend Matrix operator*(complex s, Matrix a) { return a *= s; }
    friend Matrix operator*(Matrix a, double s) { return a *= complex{s, 0.0}; }
    friend Matrix operator*(double s, Matrix a) { return a *= complex{s, 0.0}; }
    friend Matrix operator-(Matrix a) { return a *= complex{-1.0, 0.0}; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw ValidationError("Matrix product: " + a.shape() + " * " + b.shape());
        }
        Matrix out(a.rows_, b.cols_);
        // plain real arithmetic; std::complex operator* goes through __muldc3
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double ar = a(i, k).real();
                const double ai = a(i, k).imag();
                if (ar == 0.0 && ai == 0.0) continue;
                const complex* brow = &b.data_[k * b.cols_];
                complex* orow = &out.data_[i * out.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const double br = brow[j].real();
                    const double bi = brow[j].imag();
                    orow[j] = complex{orow[j].real() + ar * br - ai * bi,
                                      orow[j].imag() + ar * bi + ai * br};
                }
            }
        }
        return out;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void require_same_shape(const Matrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw ValidationError(std::string("Matrix ") + what + ": shape " + shape() + " vs " +
                                  o.shape());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex> data_;
};

// Schatten 2-norm (Hilbert-Schmidt / Frobenius).
inline double schatten2_norm(const Matrix& a) {
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

// <A, B> = Tr(A^dagger B).
inline complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("hs_inner: shape " + a.shape() + " vs " + b.shape());
    }
    complex s{0.0, 0.0};
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) s += detail::cmul(std::conj(da[k]), db[k]);
    return s;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw ValidationError("commutator: non-conformable " + a.shape() + " and " + b.shape());
    }
    return a * b - b * a;
}

// Product trace Tr(AB) without forming AB.
inline complex trace_product(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw ValidationError("trace_product: shape " + a.shape() + " vs " + b.shape());
    }
    complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) s += detail::cmul(a(i, k), b(k, i));
    return s;
}

// ||U^dagger U - I||_2
inline double unitarity_residual(const Matrix& u) {
    if (!u.is_square()) return std::numeric_limits<double>::infinity();
    return schatten2_norm(u.adjoint() * u - Matrix::identity(u.rows()));
}

inline Matrix pauli_x() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix pauli_y() { return Matrix{{0.0, complex{0.0, -1.0}}, {complex{0.0, 1.0}, 0.0}}; }
inline Matrix pauli_z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }

// A square matrix with ||M - M^dagger||_2 <= tol * ||M||_2. The stored value is
// the exact Hermitian part (M + M^dagger)/2.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Matrix& m, double rel_tol = hermiticity_tolerance) {
        if (!m.is_square() || m.rows() == 0) {
            throw ValidationError("HermitianMatrix: expected a non-empty square matrix, got " +
                                  m.shape());
        }
        if (!m.all_finite()) throw ValidationError("HermitianMatrix: non-finite entry");
        const Matrix adj = m.adjoint();
        const double asym = schatten2_norm(m - adj);
        const double scale = schatten2_norm(m);
        if (asym > rel_tol * scale) {
            std::ostringstream msg;
            msg << "HermitianMatrix: ||M - M^dagger||_2 = " << asym << " exceeds " << rel_tol
                << " * ||M||_2 = " << rel_tol * scale;
            throw ValidationError(msg.str());
        }
        m_ = (m + adj) * 0.5;
    }

    const Matrix& matrix() const noexcept { return m_; }
    operator const Matrix&() const noexcept { return m_; }
    std::size_t dim() const noexcept { return m_.rows(); }

private:
    Matrix m_;
};

// Ascending eigenvalues and the matching orthonormal eigenvector columns.
struct Spectrum {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const {
        return apply([](double x) { return x; });
    }

    // V diag(f(lambda)) V^dagger
    template <typename F>
    Matrix apply(F&& f) const {
        const std::size_t n = eigenvalues.size();
        Matrix out(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const complex fk = f(eigenvalues[k]);
            if (fk == complex{0.0, 0.0}) continue;
            for (std::size_t i = 0; i < n; ++i) {
                const complex vik = detail::cmul(eigenvectors(i, k), fk);
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += detail::cmul(vik, std::conj(eigenvectors(j, k)));
            }
        }
        return out;
    }
};

// Cyclic Jacobi. Each rotation first removes the phase of a_pq, then applies
// the real symmetric Jacobi rotation. Converged when the off-diagonal
// Frobenius mass is below 1e-14 * ||M||_2.
inline Spectrum eigh(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    Matrix a = h.matrix();
    Matrix v = Matrix::identity(n);
    const double target = 1e-14 * schatten2_norm(a);
    constexpr int max_sweeps = 100;

    auto off_diagonal = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal() <= target) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const complex phase = apq / mag;  // e^{i theta}
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 0.5 / tau;
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const complex gqp = -s * std::conj(phase);
                const complex gqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const complex akp = a(k, p);
                    const complex akq = a(k, q);
                    a(k, p) = c * akp + detail::cmul(gqp, akq);
                    a(k, q) = s * akp + detail::cmul(gqq, akq);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complex apk = a(p, k);
                    const complex aqk = a(q, k);
                    a(p, k) = c * apk + detail::cmul(std::conj(gqp), aqk);
                    a(q, k) = s * apk + detail::cmul(std::conj(gqq), aqk);
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const complex vkp = v(k, p);
                    const complex vkq = v(k, q);
                    v(k, p) = c * vkp + detail::cmul(gqp, vkq);
                    v(k, q) = s * vkp + detail::cmul(gqq, vkq);
                }
            }
        }
    }
    if (!converged && off_diagonal() > target) {
        throw ToleranceError("eigh: Jacobi did not converge in " + std::to_string(max_sweeps) +
                             " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src).real();
        double max_abs = 0.0;
        for (std::size_t i = 0; i < n; ++i) max_abs = std::max(max_abs, std::abs(v(i, src)));
        std::size_t pivot = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) >= max_abs - 1e-12) {
                pivot = i;
                break;
            }
        }
        const complex z = v(pivot, src);
        const complex fix = std::conj(z) / std::abs(z);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * fix;
    }
    return out;
}

namespace detail {

// Eigenvalues at or below this magnitude are indistinguishable from zero after
// a Jacobi solve of a matrix with this spectral scale.
inline double numerical_zero(std::span<const double> eigenvalues) {
    double m = 0.0;
    for (double x : eigenvalues) m = std::max(m, std::abs(x));
    return 64.0 * std::numeric_limits<double>::epsilon() * m;
}

inline std::vector<double> clamp_psd(std::span<const double> eigenvalues, const char* who) {
    const double zero = numerical_zero(eigenvalues);
    std::vector<double> out(eigenvalues.begin(), eigenvalues.end());
    for (double& x : out) {
        if (x < -psd_tolerance) {
            std::ostringstream msg;
            msg << who << ": eigenvalue " << x << " below -psd_tolerance (" << -psd_tolerance
                << "); matrix is not positive semidefinite";
            throw ValidationError(msg.str());
        }
        if (x <= zero) x = 0.0;
    }
    return out;
}

}  // namespace detail

// M^s for PSD Hermitian M and s > 0, via the spectral decomposition. Zero
// eigenvalues map to zero.
inline Matrix matrix_power_spectral(const HermitianMatrix& m, double s) {
    if (!(s > 0.0)) throw ValidationError("matrix_power_spectral: exponent must be positive");
    Spectrum sp = eigh(m);
    sp.eigenvalues = detail::clamp_psd(sp.eigenvalues, "matrix_power_spectral");
    return HermitianMatrix(sp.apply([s](double x) { return x == 0.0 ? 0.0 : std::pow(x, s); }))
        .matrix();
}

inline HermitianMatrix matrix_sqrt_spectral(const HermitianMatrix& m) {
    Spectrum sp = eigh(m);
    sp.eigenvalues = detail::clamp_psd(sp.eigenvalues, "matrix_sqrt_spectral");
    return HermitianMatrix(sp.apply([](double x) { return std::sqrt(x); }));
}

// exp(-i t H)
inline Matrix expm_i(const Spectrum& sp, double t) {
    return sp.apply([t](double x) { return std::exp(complex{0.0, -t * x}); });
}

// LU with partial pivoting; solves A X = B.
inline Matrix solve(Matrix a, Matrix b) {
    if (!a.is_square() || a.rows() != b.rows()) {
        throw ValidationError("solve: shape " + a.shape() + " vs " + b.shape());
    }
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) == 0.0) throw ValidationError("solve: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(col, j), b(piv, j));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const complex f = a(r, col) / a(col, col);
            if (f == complex{0.0, 0.0}) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            complex s = b(col, j);
            for (std::size_t k = col + 1; k < n; ++k) s -= a(col, k) * b(k, j);
            b(col, j) = s / a(col, col);
        }
    }
    return b;
}

inline Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

// log det M for Hermitian M > shift*I, via Cholesky of M - shift*I. Returns
// false when the factorization breaks down (M - shift*I not positive definite).
inline bool cholesky_log_det(const Matrix& m, double shift, double& log_det_unshifted) {
    const std::size_t n = m.rows();
    Matrix l(n, n);
    Matrix mm = m;
    for (std::size_t i = 0; i < n; ++i) mm(i, i) -= shift;
    for (std::size_t j = 0; j < n; ++j) {
        double d = mm(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return false;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            complex s = mm(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / l(j, j).real();
        }
    }
    // determinant of the unshifted matrix needs its own factorization
    if (shift != 0.0) return cholesky_log_det(m, 0.0, log_det_unshifted);
    log_det_unshifted = 0.0;
    for (std::size_t i = 0; i < n; ++i) log_det_unshifted += 2.0 * std::log(l(i, i).real());
    return true;
}

// Lambda^s from the resolvent representation
//   Lambda^s = sin(pi s)/(pi s) * int_0^inf Lambda (Lambda + x I)^{-1} s x^{s-1} dx.
// With x = u^{1/s} the measure becomes du; then u = z^k, z = t/(1-t),
// k = max(1, s/(1-s)) makes both endpoints smooth for Gauss-Legendre on (0,1).
// Lambda is rescaled by its geometric mean so the spectrum is centred on 1.
// Uses only linear solves and Cholesky; independent of eigh.
inline HermitianMatrix matrix_power_integral(const HermitianMatrix& lambda, double s,
                                             int n_quad = 64) {
    if (!(s > 0.0 && s < 1.0)) {
        throw ValidationError("matrix_power_integral: exponent must lie in (0, 1)");
    }
    if (n_quad < 16) throw ValidationError("matrix_power_integral: n_quad must be >= 16");
    const std::size_t n = lambda.dim();
    double log_det = 0.0;
    if (!cholesky_log_det(lambda.matrix(), psd_tolerance, log_det)) {
        throw ValidationError(
            "matrix_power_integral: operator is singular or not positive definite (eigenvalue "
            "<= psd_tolerance); use the spectral route");
    }
    const double centre = std::exp(log_det / static_cast<double>(n));
    const Matrix scaled = lambda.matrix() * (1.0 / centre);
    const Matrix eye = Matrix::identity(n);

    const double k = std::max(1.0, s / (1.0 - s));
    const QuadratureRule rule = gauss_legendre_unit(static_cast<std::size_t>(n_quad));
    Matrix acc(n, n);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double log_z = std::log(t) - std::log1p(-t);
        const double log_y = (k / s) * log_z;                       // y = x = u^{1/s}
        const double log_du = std::log(k) + (k - 1.0) * log_z - 2.0 * std::log1p(-t);
        Matrix term;
        if (log_y > 0.0) {
            // Lambda (Lambda + yI)^{-1} du = Lambda (Lambda/y + I)^{-1} (du/y)
            const double inv_y = std::exp(-log_y);
            term = solve(scaled * inv_y + eye, scaled) * std::exp(log_du - log_y);
        } else {
            const double y = std::exp(log_y);
            term = solve(scaled + eye * y, scaled) * std::exp(log_du);
        }
        acc += term * rule.weights[q];
    }
    const double prefactor = std::sin(std::numbers::pi * s) / (std::numbers::pi * s);
    return HermitianMatrix(acc * (prefactor * std::pow(centre, s)), 1e-8);
}

}  // namespace wyskew
