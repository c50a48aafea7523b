// dynamics.hpp
// Unitary parameter encoding rho_phi = U_phi rho_0 U_phi^dagger, the generator
// K_phi = -i hbar U_phi dU_phi^dagger/dphi, and the lower bound
//
//   |d/dphi cos L(rho_0, rho_phi)| <= (sqrt 2 / hbar) sqrt(I(rho_phi, K_phi))
//
// checked pointwise on a phi grid, together with every intermediate step of
// its derivation (sqrt(rho) flow, Cauchy-Schwarz, commutator-norm identity,
// pure-state reduction).

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wyskew/coherence.hpp"
#include "wyskew/error.hpp"
#include "wyskew/geometry.hpp"
#include "wyskew/linalg.hpp"
#include "wyskew/states.hpp"

namespace wyskew {

enum class FamilyKind { constant_generator, axis_family, general };

// Continuous phi -> U(phi) with U(0) = I. Every evaluation is checked for
// unitarity.
class UnitaryFamily {
public:
    static constexpr double unitarity_tolerance = 1e-10;

    UnitaryFamily(std::function<Matrix(double)> evaluate, std::size_t dim,
                  FamilyKind kind = FamilyKind::general)
        : evaluate_(std::move(evaluate)), dim_(dim), kind_(kind) {
        const Matrix u0 = (*this)(0.0);
        if (schatten2_norm(u0 - Matrix::identity(dim_)) > unitarity_tolerance) {
            throw ValidationError("UnitaryFamily: U(0) must be the identity");
        }
    }

    Matrix operator()(double phi) const {
        Matrix u = evaluate_(phi);
        if (u.rows() != dim_ || u.cols() != dim_) {
            throw ValidationError("UnitaryFamily: evaluation has shape " + u.shape() +
                                  ", expected " + std::to_string(dim_));
        }
        const double res = unitarity_residual(u);
        if (!(res <= unitarity_tolerance)) {
            std::ostringstream msg;
            msg << "UnitaryFamily: non-unitary evaluation at phi = " << phi
                << " (||U^dagger U - I||_2 = " << res << ")";
            throw ValidationError(msg.str());
        }
        return u;
    }

    std::size_t dim() const noexcept { return dim_; }
    FamilyKind kind() const noexcept { return kind_; }

private:
    std::function<Matrix(double)> evaluate_;
    std::size_t dim_;
    FamilyKind kind_;
};

// U(phi) = exp(-i phi K / hbar), diagonalized once.
inline UnitaryFamily exp_family(const HermitianMatrix& k, double hbar = 1.0) {
    if (!(hbar > 0.0)) throw ValidationError("exp_family: hbar must be positive");
    auto sp = std::make_shared<const Spectrum>(eigh(k));
    return UnitaryFamily([sp, hbar](double phi) { return expm_i(*sp, phi / hbar); }, k.dim(),
                         FamilyKind::constant_generator);
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t steps) {
    if (steps < 2) throw ValidationError("uniform_grid: need at least two points");
    if (!(hi > lo)) throw ValidationError("uniform_grid: need phi_max > phi_min");
    std::vector<double> g(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    return g;
}

struct BoundConfig {
    double hbar = 1.0;
    double fd_step = 1e-5;
    std::vector<double> phi_grid = uniform_grid(0.0, 2.0 * std::numbers::pi, 201);

    void validate() const {
        if (!(hbar > 0.0)) throw ValidationError("BoundConfig: hbar must be positive");
        if (!(fd_step > 0.0)) throw ValidationError("BoundConfig: fd_step must be positive");
        for (std::size_t i = 1; i < phi_grid.size(); ++i) {
            if (!(phi_grid[i] > phi_grid[i - 1])) {
                throw ValidationError("BoundConfig: phi grid must be strictly increasing");
            }
        }
    }
};

inline DensityMatrix evolve(const DensityMatrix& rho0, const UnitaryFamily& u, double phi) {
    detail::require_same_dim(rho0.dim(), u.dim(), "evolve");
    return conjugate(rho0, u(phi));
}

// ---------------------------------------------------------------------------
// Finite differences

// Central difference with one Richardson level:
//   D(h) = [f(x+h) - f(x-h)]/2h,  value = (4 D(h/2) - D(h))/3,
//   error = |value - D(h/2)| + roundoff estimate.
struct FiniteDifference {
    double value;
    double error;
};

template <typename F>
FiniteDifference richardson_derivative(F&& f, double x, double h) {
    const double fp = f(x + h);
    const double fm = f(x - h);
    const double fp2 = f(x + 0.5 * h);
    const double fm2 = f(x - 0.5 * h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp2 - fm2) / h;
    const double value = (4.0 * d2 - d1) / 3.0;
    const double scale = std::max({1.0, std::abs(fp), std::abs(fm), std::abs(fp2), std::abs(fm2)});
    const double roundoff = 4e-15 * scale / h;
    return {value, std::abs(value - d2) + roundoff};
}

// Points whose Richardson error estimate exceeds this (relative to
// max(1, |value|)) are treated as non-smooth.
inline constexpr double nonsmooth_threshold = 1e-6;

inline bool is_nonsmooth(const FiniteDifference& d) {
    return d.error > nonsmooth_threshold * std::max(1.0, std::abs(d.value));
}

// ---------------------------------------------------------------------------
// Generator

struct Generator {
    HermitianMatrix k;
    double asymmetry;  // ||K_raw - K_raw^dagger||_2 before symmetrization
};

// K_phi = -i hbar U_phi dU_phi^dagger/dphi with a central difference of step h.
inline Generator generator(const UnitaryFamily& u, double phi, double h, double hbar = 1.0) {
    if (!(h > 0.0)) throw ValidationError("generator: step must be positive");
    const Matrix up = u(phi + h).adjoint();
    const Matrix um = u(phi - h).adjoint();
    const Matrix du_dag = (up - um) * (1.0 / (2.0 * h));
    const Matrix raw = u(phi) * du_dag * complex{0.0, -hbar};
    const double asym = schatten2_norm(raw - raw.adjoint());
    const double scale = std::max(1.0, schatten2_norm(raw));
    if (asym > 1e-6 * scale) {
        std::ostringstream msg;
        msg << "generator: asymmetry residual " << asym << " at phi = " << phi
            << " (non-smooth or non-unitary family)";
        throw ToleranceError(msg.str());
    }
    return {HermitianMatrix((raw + raw.adjoint()) * 0.5, 1.0), asym};
}

// ---------------------------------------------------------------------------
// Derivation chain

struct DerivativeCheck {
    double numeric;   // Richardson central difference of cos L(rho0, rho_phi)
    double analytic;  // Re[-(i/hbar) Tr(sqrt(rho0) [K_phi, sqrt(rho_phi)])]
    double fd_error;
    bool nonsmooth;
};

namespace detail {

inline double derivative_agreement_tolerance(double analytic) {
    return std::max(1e-6, 1e-4 * std::abs(analytic));
}

// Per-point evaluation shared by the chain operations and bound_check.
class ChainPoint {
public:
    ChainPoint(const DensityMatrix& rho0, const Matrix& sqrt_rho0, const UnitaryFamily& u,
               double phi, const BoundConfig& cfg)
        : rho_phi_(evolve(rho0, u, phi)),
          sqrt_rho_phi_(rho_phi_.sqrt()),
          k_(generator(u, phi, cfg.fd_step, cfg.hbar)) {
        const Matrix c = commutator(k_.k, sqrt_rho_phi_);
        trace_term_ = trace_product(sqrt_rho0, c);
        commutator_norm_ = schatten2_norm(c);
        cos_l_ = affinity_from_roots(sqrt_rho0, sqrt_rho_phi_);
        auto cos_at = [&](double x) {
            return affinity_from_roots(sqrt_rho0, evolve(rho0, u, x).sqrt());
        };
        fd_ = richardson_derivative(cos_at, phi, cfg.fd_step);
        analytic_ = (complex{0.0, -1.0 / cfg.hbar} * trace_term_).real();
    }

    const DensityMatrix& rho_phi() const { return rho_phi_; }
    const Matrix& sqrt_rho_phi() const { return sqrt_rho_phi_; }
    const HermitianMatrix& k() const { return k_.k; }
    complex trace_term() const { return trace_term_; }
    double commutator_norm() const { return commutator_norm_; }
    double cos_l() const { return cos_l_; }
    const FiniteDifference& fd() const { return fd_; }
    double analytic() const { return analytic_; }

    DerivativeCheck derivative_check(double phi) const {
        DerivativeCheck out{fd_.value, analytic_, fd_.error, is_nonsmooth(fd_)};
        if (!out.nonsmooth &&
            std::abs(out.numeric - out.analytic) > derivative_agreement_tolerance(analytic_)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "cos_hellinger_derivative: numeric " << out.numeric << " vs analytic "
                << out.analytic << " at phi = " << phi;
            throw ToleranceError(msg.str());
        }
        return out;
    }

private:
    DensityMatrix rho_phi_;
    Matrix sqrt_rho_phi_;
    Generator k_;
    complex trace_term_;
    double commutator_norm_ = 0.0;
    double cos_l_ = 0.0;
    FiniteDifference fd_{};
    double analytic_ = 0.0;
};

}  // namespace detail

inline DerivativeCheck cos_hellinger_derivative(const DensityMatrix& rho0, const UnitaryFamily& u,
                                                double phi, const BoundConfig& cfg = {}) {
    const detail::ChainPoint pt(rho0, rho0.sqrt(), u, phi, cfg);
    return pt.derivative_check(phi);
}

struct CauchySchwarzGap {
    double lhs;  // |Tr(sqrt(rho0) [K_phi, sqrt(rho_phi)])|
    double rhs;  // ||sqrt(rho0)||_2 ||[K_phi, sqrt(rho_phi)]||_2
};

inline CauchySchwarzGap cauchy_schwarz_gap(const DensityMatrix& rho0, const UnitaryFamily& u,
                                           double phi, const BoundConfig& cfg = {}) {
    const HermitianMatrix s0 = rho0.sqrt();
    const DensityMatrix rho_phi = evolve(rho0, u, phi);
    const Generator k = generator(u, phi, cfg.fd_step, cfg.hbar);
    const Matrix c = commutator(k.k, rho_phi.sqrt());
    return {std::abs(trace_product(s0, c)), schatten2_norm(s0) * schatten2_norm(c)};
}

struct CommutatorNormIdentity {
    double norm;     // ||[K, sqrt(rho)]||_2
    double sqrt2_i;  // sqrt(2 I(rho, K))
};

inline CommutatorNormIdentity commutator_norm_identity(const DensityMatrix& rho,
                                                       const HermitianMatrix& k) {
    return {schatten2_norm(commutator(k, rho.sqrt())), std::sqrt(2.0 * wysi(rho, k))};
}

// ---------------------------------------------------------------------------
// Bound report

struct BoundRow {
    double phi = 0.0;
    double lhs = 0.0;            // |d/dphi cos L(rho0, rho_phi)|, numeric
    double rhs = 0.0;            // (sqrt 2 / hbar) sqrt(I(rho_phi, K_phi))
    double margin = 0.0;         // rhs - lhs
    double wysi = 0.0;
    double cos_hellinger = 0.0;
    bool violated = false;       // margin < -tolerance at a smooth point
    double analytic_lhs = 0.0;   // (1/hbar)|Tr(sqrt(rho0)[K_phi, sqrt(rho_phi)])|
    double fd_error = 0.0;
    double tolerance = 0.0;      // 1e-8 + 10 fd_error
    bool nonsmooth = false;
};

struct BoundReport {
    std::vector<BoundRow> rows;

    std::size_t violations() const {
        return static_cast<std::size_t>(
            std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return r.violated; }));
    }
    std::size_t nonsmooth_points() const {
        return static_cast<std::size_t>(
            std::count_if(rows.begin(), rows.end(), [](const BoundRow& r) { return r.nonsmooth; }));
    }
    // Index of the smallest margin (first on ties); rows must be non-empty.
    std::size_t worst_index() const {
        std::size_t w = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].margin < rows[w].margin) w = i;
        return w;
    }
    double min_margin() const {
        return rows.empty() ? std::numeric_limits<double>::infinity() : rows[worst_index()].margin;
    }
};

inline constexpr double base_violation_tolerance = 1e-8;

inline BoundReport bound_check(const DensityMatrix& rho0, const UnitaryFamily& u,
                               const BoundConfig& cfg = {}) {
    cfg.validate();
    detail::require_same_dim(rho0.dim(), u.dim(), "bound_check");
    const HermitianMatrix s0 = rho0.sqrt();
    BoundReport report;
    report.rows.reserve(cfg.phi_grid.size());
    for (double phi : cfg.phi_grid) {
        const detail::ChainPoint pt(rho0, s0, u, phi, cfg);
        const DerivativeCheck d = pt.derivative_check(phi);
        BoundRow row;
        row.phi = phi;
        row.lhs = std::abs(d.numeric);
        row.wysi = wysi(pt.rho_phi(), pt.k());
        row.rhs = std::numbers::sqrt2 / cfg.hbar * std::sqrt(row.wysi);
        row.margin = row.rhs - row.lhs;
        row.cos_hellinger = pt.cos_l();
        row.analytic_lhs = std::abs(d.analytic);
        row.fd_error = d.fd_error;
        row.tolerance = base_violation_tolerance + 10.0 * d.fd_error;
        row.nonsmooth = d.nonsmooth;
        row.violated = !d.nonsmooth && row.margin < -row.tolerance;
        report.rows.push_back(row);
    }
    return report;
}

// f(phi) = Tr(rho0 rho_phi) / Tr(rho0^2)
inline double relative_purity(const DensityMatrix& rho0, const DensityMatrix& rho_phi) {
    detail::require_same_dim(rho0.dim(), rho_phi.dim(), "relative_purity");
    return trace_product(rho0.matrix(), rho_phi.matrix()).real() / purity(rho0);
}

struct PureStateBound {
    double delta_k;  // sqrt(Var(K_phi)) in rho_phi
    double rhs;      // (hbar / sqrt 2) |df/dphi|
    double wysi;
    double fd_error;
};

inline PureStateBound pure_state_bound(const DensityMatrix& psi0, const UnitaryFamily& u,
                                       double phi, const BoundConfig& cfg = {}) {
    if (std::abs(purity(psi0) - 1.0) > 1e-10) {
        throw ValidationError("pure_state_bound: input state is not pure (purity " +
                              std::to_string(purity(psi0)) + ")");
    }
    const DensityMatrix rho_phi = evolve(psi0, u, phi);
    const Generator k = generator(u, phi, cfg.fd_step, cfg.hbar);
    const double var = variance(rho_phi, k.k);
    const double skew = wysi(rho_phi, k.k);
    if (std::abs(skew - var) > 1e-10) {
        std::ostringstream msg;
        msg << "pure_state_bound: skew information " << skew << " differs from variance " << var
            << " on a pure state";
        throw ToleranceError(msg.str());
    }
    const auto f = [&](double x) { return relative_purity(psi0, evolve(psi0, u, x)); };
    const FiniteDifference d = richardson_derivative(f, phi, cfg.fd_step);
    return {std::sqrt(var), cfg.hbar / std::numbers::sqrt2 * std::abs(d.value), skew, d.error};
}

struct FlowResidual {
    double residual;  // ||d sqrt(rho_phi)/dphi + (i/hbar)[K_phi, sqrt(rho_phi)]||_2
    double bound;     // max(1e-6, 1e-4 ||[K_phi, sqrt(rho_phi)]||_2)
};

inline FlowResidual sqrt_flow_residual(const DensityMatrix& rho0, const UnitaryFamily& u,
                                       double phi, const BoundConfig& cfg = {}) {
    const double h = cfg.fd_step;
    auto root = [&](double x) { return evolve(rho0, u, x).sqrt().matrix(); };
    const Matrix d1 = (root(phi + h) - root(phi - h)) * (1.0 / (2.0 * h));
    const Matrix d2 = (root(phi + 0.5 * h) - root(phi - 0.5 * h)) * (1.0 / h);
    const Matrix deriv = (d2 * 4.0 - d1) * (1.0 / 3.0);
    const Generator k = generator(u, phi, h, cfg.hbar);
    const Matrix c = commutator(k.k, root(phi));
    const FlowResidual out{schatten2_norm(deriv + c * complex{0.0, 1.0 / cfg.hbar}),
                           std::max(1e-6, 1e-4 * schatten2_norm(c))};
    if (out.residual > out.bound) {
        std::ostringstream msg;
        msg << "sqrt_flow_residual: residual " << out.residual << " exceeds " << out.bound
            << " at phi = " << phi;
        throw ToleranceError(msg.str());
    }
    return out;
}

}  // namespace wyskew
