// coherence.hpp
// Skew-information coherence quantifiers and the monotone-metric structure
// behind them.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wyskew/error.hpp"
#include "wyskew/linalg.hpp"
#include "wyskew/states.hpp"

namespace wyskew {

namespace detail {

inline void require_same_dim(std::size_t a, std::size_t b, const char* who) {
    if (a != b) {
        throw ValidationError(std::string(who) + ": dimension mismatch " + std::to_string(a) +
                              " vs " + std::to_string(b));
    }
}

}  // namespace detail

// Wigner-Yanase skew information  I(rho, K) = -1/2 Tr([sqrt(rho), K]^2).
inline double wysi(const DensityMatrix& rho, const HermitianMatrix& k) {
    detail::require_same_dim(rho.dim(), k.dim(), "wysi");
    const Matrix c = commutator(rho.sqrt(), k);
    return std::max(0.0, -0.5 * trace_product(c, c).real());
}

// Wigner-Yanase-Dyson skew information  -1/2 Tr([rho^p, K][rho^{1-p}, K]).
inline double wydsi(const DensityMatrix& rho, const HermitianMatrix& k, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "wydsi: p = " << p << " outside (0, 1)";
        throw ValidationError(msg.str());
    }
    detail::require_same_dim(rho.dim(), k.dim(), "wydsi");
    const Matrix a = commutator(rho.power(p), k);
    const Matrix b = commutator(rho.power(1.0 - p), k);
    return -0.5 * trace_product(a, b).real();
}

// <K^2> - <K>^2
inline double variance(const DensityMatrix& rho, const HermitianMatrix& k) {
    detail::require_same_dim(rho.dim(), k.dim(), "variance");
    const Matrix rk = rho.matrix() * k.matrix();
    const double mean = rk.trace().real();
    const double second = trace_product(rk, k.matrix()).real();
    return std::max(0.0, second - mean * mean);
}

// ---------------------------------------------------------------------------
// Monotone metrics

// Operator monotone f on (0, inf) with f(t) = t f(1/t) and f(1) = 1.
struct PetzFunction {
    std::function<double(double)> f;
    std::string label;

    double operator()(double t) const { return f(t); }
};

// f(t) = (sqrt t + 1)^2 / 4
inline PetzFunction wigner_yanase_function() {
    return {[](double t) {
                const double r = std::sqrt(t) + 1.0;
                return 0.25 * r * r;
            },
            "wigner-yanase"};
}

// f(t) = (1 + t)/2, the SLD / Bures metric.
inline PetzFunction bures_function() {
    return {[](double t) { return 0.5 * (1.0 + t); }, "bures"};
}

// Spot checks of monotonicity, self-inversion and normalization on a grid.
inline void check_petz_function(const PetzFunction& fn) {
    const double f1 = fn(1.0);
    if (std::abs(f1 - 1.0) > 1e-12) {
        throw ValidationError("PetzFunction '" + fn.label + "': f(1) = " + std::to_string(f1));
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = -40; i <= 40; ++i) {
        const double t = std::pow(10.0, 0.1 * i);
        const double ft = fn(t);
        if (!(ft >= prev)) {
            throw ValidationError("PetzFunction '" + fn.label + "': not monotone near t = " +
                                  std::to_string(t));
        }
        prev = ft;
        const double mirrored = t * fn(1.0 / t);
        if (std::abs(ft - mirrored) > 1e-12 * std::max(1.0, std::abs(ft))) {
            throw ValidationError("PetzFunction '" + fn.label +
                                  "': not self-inversive at t = " + std::to_string(t));
        }
    }
}

// Morozova-Cencov kernel  c_f(x, y) = 1 / (y f(x/y)).
inline double cencov_kernel(const PetzFunction& fn, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw ValidationError("cencov_kernel: arguments must be positive");
    }
    return 1.0 / (y * fn(x / y));
}

namespace detail {

// Kernel with one argument allowed to vanish, using f(0) when finite.
inline double kernel_with_zero(const PetzFunction& fn, double x, double y) {
    if (x > 0.0 && y > 0.0) return cencov_kernel(fn, x, y);
    const double other = std::max(x, y);
    const double f0 = fn(0.0);
    if (!(std::isfinite(f0) && f0 > 0.0)) {
        throw ValidationError("petz_metric: kernel undefined on the kernel of rho for '" +
                              fn.label + "' (f(0) not positive)");
    }
    return 1.0 / (other * f0);
}

inline Matrix make_traceless(const Matrix& a, const char* which) {
    const std::size_t d = a.rows();
    const complex tr = a.trace();
    if (std::abs(tr) >= 1e-8) {
        std::ostringstream msg;
        msg << "petz_metric: tangent " << which << " has trace " << std::abs(tr)
            << "; tangent vectors must be traceless";
        throw ValidationError(msg.str());
    }
    return a - Matrix::identity(d) * (tr / static_cast<double>(d));
}

}  // namespace detail

// g_f(A, B) = Tr[A c_f(L, R) B], evaluated in the eigenbasis of rho:
//   sum_ij conj(A~_ij) B~_ij c_f(lambda_i, lambda_j),  A~ = V^dagger A V.
inline double petz_metric(const DensityMatrix& rho, const HermitianMatrix& a,
                          const HermitianMatrix& b, const PetzFunction& fn) {
    detail::require_same_dim(rho.dim(), a.dim(), "petz_metric");
    detail::require_same_dim(rho.dim(), b.dim(), "petz_metric");
    const Spectrum& sp = rho.spectrum();
    const Matrix& v = sp.eigenvectors;
    const Matrix at = v.adjoint() * detail::make_traceless(a, "A") * v;
    const Matrix bt = v.adjoint() * detail::make_traceless(b, "B") * v;
    const std::size_t d = rho.dim();
    const double touch = 1e-12 * std::max({1.0, schatten2_norm(at), schatten2_norm(bt)});
    complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double li = sp.eigenvalues[i];
            const double lj = sp.eigenvalues[j];
            const complex term = std::conj(at(i, j)) * bt(i, j);
            if (li == 0.0 && lj == 0.0) {
                if (std::abs(at(i, j)) > touch || std::abs(bt(i, j)) > touch) {
                    throw ValidationError(
                        "petz_metric: tangent vector touches the kernel of a rank-deficient "
                        "state; kernel c_f(0, 0) is undefined");
                }
                continue;
            }
            sum += term * detail::kernel_with_zero(fn, li, lj);
        }
    }
    return sum.real();
}

// ---------------------------------------------------------------------------
// Incoherent states and measurements

// Complete set of orthogonal projectors.
class ProjectiveMeasurement {
public:
    explicit ProjectiveMeasurement(std::vector<Matrix> projectors)
        : projectors_(std::move(projectors)) {
        if (projectors_.empty()) throw ValidationError("ProjectiveMeasurement: no projectors");
        const std::size_t d = projectors_.front().rows();
        Matrix total(d, d);
        for (std::size_t mu = 0; mu < projectors_.size(); ++mu) {
            const Matrix& p = projectors_[mu];
            if (!p.is_square() || p.rows() != d) {
                throw ValidationError("ProjectiveMeasurement: projector shape " + p.shape());
            }
            if (schatten2_norm(p - p.adjoint()) > 1e-10 || schatten2_norm(p * p - p) > 1e-10) {
                throw ValidationError("ProjectiveMeasurement: element " + std::to_string(mu) +
                                      " is not a Hermitian idempotent");
            }
            total += p;
        }
        if (schatten2_norm(total - Matrix::identity(d)) > 1e-10) {
            throw ValidationError("ProjectiveMeasurement: projectors do not sum to identity");
        }
    }

    // Rank-one projectors onto the columns of a unitary.
    static ProjectiveMeasurement from_basis(const Matrix& basis) {
        if (unitarity_residual(basis) > 1e-10) {
            throw ValidationError("ProjectiveMeasurement::from_basis: basis is not unitary");
        }
        const std::size_t d = basis.rows();
        std::vector<Matrix> ps;
        ps.reserve(d);
        for (std::size_t k = 0; k < d; ++k) {
            Matrix p(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) p(i, j) = basis(i, k) * std::conj(basis(j, k));
            ps.push_back(std::move(p));
        }
        return ProjectiveMeasurement(std::move(ps));
    }

    const std::vector<Matrix>& projectors() const noexcept { return projectors_; }

    // True when every projector commutes with K (measurement in the incoherent
    // basis of K). Only then is the average skew information guaranteed not to
    // exceed the pre-measurement value.
    bool commutes_with(const HermitianMatrix& k, double tol = 1e-10) const {
        detail::require_same_dim(dim(), k.dim(), "ProjectiveMeasurement::commutes_with");
        const double scale = std::max(1.0, schatten2_norm(k.matrix()));
        for (const Matrix& p : projectors_)
            if (schatten2_norm(commutator(p, k.matrix())) > tol * scale) return false;
        return true;
    }
    std::size_t dim() const { return projectors_.front().rows(); }

private:
    std::vector<Matrix> projectors_;
};

struct MeasurementAverage {
    double average;
    std::vector<double> probabilities;
};

// sum_mu p_mu I(rho_mu, K) with p_mu = Tr(P rho P), rho_mu = P rho P / p_mu.
// Outcomes with p_mu below 1e-14 are skipped. Bounded by I(rho, K) when the
// measurement commutes with K; for other bases it can be larger.
inline MeasurementAverage measurement_average_wysi(const DensityMatrix& rho,
                                                   const HermitianMatrix& k,
                                                   const ProjectiveMeasurement& m) {
    detail::require_same_dim(rho.dim(), k.dim(), "measurement_average_wysi");
    detail::require_same_dim(rho.dim(), m.dim(), "measurement_average_wysi");
    MeasurementAverage out{0.0, {}};
    for (const Matrix& p : m.projectors()) {
        const Matrix post = p * rho.matrix() * p;
        const double prob = post.trace().real();
        out.probabilities.push_back(prob);
        if (prob < 1e-14) continue;
        out.average += prob * wysi(DensityMatrix(post * (1.0 / prob)), k);
    }
    return out;
}

// Diagonal in the given basis (off-diagonals of V^dagger rho V below 1e-10).
inline bool is_incoherent(const DensityMatrix& rho, const Matrix& basis) {
    detail::require_same_dim(rho.dim(), basis.rows(), "is_incoherent");
    const Matrix r = basis.adjoint() * rho.matrix() * basis;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (i != j && std::abs(r(i, j)) >= 1e-10) return false;
    return true;
}

// Zero the off-diagonals of rho in the given basis.
inline DensityMatrix dephase(const DensityMatrix& rho, const Matrix& basis) {
    Matrix r = basis.adjoint() * rho.matrix() * basis;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (i != j) r(i, j) = 0.0;
    return DensityMatrix(basis * r * basis.adjoint());
}

}  // namespace wyskew
