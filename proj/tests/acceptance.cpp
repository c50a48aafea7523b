// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wyskew/campaign.hpp"
#include "wyskew/wyskew.hpp"

using namespace wyskew;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

double max_abs3(const Mat3& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (double x : row) m = std::max(m, std::abs(x));
    return m;
}

Mat3 sub3(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::uint64_t seed_for(std::uint64_t criterion, std::uint64_t i, std::uint64_t sub = 0) {
    return derive_seed(derive_seed(derive_seed(2024, criterion), i), sub);
}

BlochVector random_bloch(std::uint64_t seed, double hi = 0.999) {
    GaussianSource src(seed);
    const Vec3 n = random_direction(src);
    return BlochVector(hi * src.uniform() * n);
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

Outcome ac1() {
    const WorkedExampleParams params;
    const auto t0 = std::chrono::steady_clock::now();
    const WorkedExample ex = worked_example(params);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double cos_err = 0.0;
    double wysi_err = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const BoundRow& r : ex.closed.rows) {
        cos_err = std::max(cos_err, std::abs(r.cos_hellinger - (0.9 + 0.1 * std::cos(2.0 * r.phi))));
        wysi_err = std::max(wysi_err, std::abs(r.wysi - 0.2));
        min_margin = std::min(min_margin, r.margin);
    }
    // generic matrix pipeline on the same grid, with the exact generator
    const AxisFamily axis = constant_axis(params.axis, params.varpi, params.alpha);
    const HermitianMatrix k = axis.generator_at(0.0);
    const UnitaryFamily u = exp_family(k, params.hbar);
    const DensityMatrix rho0 = from_bloch(BlochVector(params.r0_mag, 0.0, 0.0));
    double num_cos_err = 0.0;
    double num_wysi_err = 0.0;
    for (double phi : params.phi_grid) {
        const DensityMatrix rho = evolve(rho0, u, phi);
        num_cos_err = std::max(num_cos_err, std::abs(affinity(rho0, rho) - (0.9 + 0.1 * std::cos(2.0 * phi))));
        num_wysi_err = std::max(num_wysi_err, std::abs(wysi(rho, k) - 0.2));
    }
    // finite-difference bound report against the closed one
    const bool fd_ok = ex.numeric.violations() == 0 && ex.max_deviation <= worked_example_tolerance &&
                       ex.numeric.min_margin() > 0.43;
    const bool pass = ex.closed.rows.size() == 201 && cos_err <= 1e-10 && wysi_err <= 1e-11 &&
                      num_cos_err <= 1e-10 && num_wysi_err <= 1e-11 && min_margin > 0.43 && fd_ok &&
                      secs < 1.0;
    return {pass, "cosL err " + fmt(cos_err) + "/" + fmt(num_cos_err) + ", wysi err " + fmt(wysi_err) +
                      "/" + fmt(num_wysi_err) + " (closed/numeric), min margin " + fmt(min_margin) +
                      ", FD cross-check " + fmt(ex.max_deviation) + ", " + fmt(secs) + " s"};
}

Outcome ac2() {
    CampaignConfig cfg;
    cfg.mode = Mode::verify;
    cfg.dims = {2, 3, 4, 8};
    cfg.trials = 10000;
    cfg.phi_steps = 201;
    cfg.seed = 12;
    cfg.workers = worker_count();
    const auto t0 = std::chrono::steady_clock::now();
    const VerifySummary s = run_verify(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {s.violations == 0 && s.instances == 10000 && s.grid_points == 10000u * 201u,
            std::to_string(s.instances) + " instances, " + std::to_string(s.grid_points) +
                " points, " + std::to_string(s.violations) + " violations, " +
                std::to_string(s.nonsmooth_points) + " non-smooth, min margin " +
                fmt(s.min_margin) + ", " + fmt(secs) + " s"};
}

Outcome ac3() {
    const PetzFunction wy = wigner_yanase_function();
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const std::size_t d = 2 + i % 7;
        const DensityMatrix rho = random_density(d, d, seed_for(3, i, 0));
        const HermitianMatrix k = random_hermitian(d, seed_for(3, i, 1));
        const HermitianMatrix tangent(commutator(rho.matrix(), k.matrix()) * complex{0.0, 1.0});
        const double g = petz_metric(rho, tangent, tangent, wy);
        const double ref = 8.0 * wysi(rho, k);
        worst = std::max(worst, std::abs(g - ref) / std::max(std::abs(ref), 1e-300));
    }
    return {worst <= 1e-8, "max relative gap " + fmt(worst) + " over 1000 full-rank states, dims 2-8"};
}

Outcome ac4() {
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_pure = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const std::size_t d = 2 + i % 7;
        const HermitianMatrix k = random_hermitian(d, seed_for(4, i, 1));
        const DensityMatrix mixed = random_density(d, 1 + (i / 7) % d, seed_for(4, i, 0));
        worst_excess = std::max(worst_excess, wysi(mixed, k) - variance(mixed, k));
        const DensityMatrix pure = random_density(d, 1, seed_for(4, i, 2));
        worst_pure = std::max(worst_pure, std::abs(wysi(pure, k) - variance(pure, k)));
    }
    return {worst_excess <= 1e-12 && worst_pure <= 1e-10,
            "max(wysi - var) mixed " + fmt(worst_excess) + ", max |wysi - var| pure " + fmt(worst_pure)};
}

Outcome ac5() {
    double route = 0.0;
    double cov = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const DensityMatrix rho = random_density(4, 4, seed_for(5, i, 0));
        const Matrix spectral = matrix_sqrt_spectral(rho).matrix();
        const Matrix integral = matrix_power_integral(rho.hermitian(), 0.5, 64).matrix();
        route = std::max(route, schatten2_norm(spectral - integral));
        const Matrix u = random_unitary(4, seed_for(5, i, 1));
        // fresh decomposition of U rho U^dagger
        const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
        cov = std::max(cov, max_abs(rotated.sqrt().matrix() - u * spectral * u.adjoint()));
    }
    return {route <= 1e-6 && cov <= 1e-9,
            "spectral vs integral " + fmt(route) + ", covariance " + fmt(cov)};
}

Outcome ac6() {
    double path_gap = 0.0;
    double cube_gap = 0.0;
    double norm_gap = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const BlochVector r0 = random_bloch(seed_for(6, i, 0), 1.0);
        GaussianSource src(seed_for(6, i, 1));
        const Vec3 n = random_direction(src);
        const double gamma = 4.0 * std::numbers::pi * src.uniform() - 2.0 * std::numbers::pi;
        // constant axis with varpi = hbar = 1: gamma = phi
        const AxisFamily axis = constant_axis(n);
        const BlochVector direct = bloch_evolve_closed(r0, axis, gamma);
        const Vec3 via_matrix = rodrigues_matrix(n, gamma) * r0.r();
        for (std::size_t c = 0; c < 3; ++c)
            path_gap = std::max(path_gap, std::abs(via_matrix[c] - direct.r()[c]));
        const Mat3 l = lambda_matrix(n);
        Mat3 neg{};
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) neg[a][b] = -l[a][b];
        cube_gap = std::max(cube_gap, max_abs3(sub3(l * l * l, neg)));
        norm_gap = std::max(norm_gap, std::abs(norm(direct.r()) - norm(r0.r())));
    }
    return {path_gap <= 1e-12 && cube_gap <= 1e-14 && norm_gap <= 1e-12,
            "Rodrigues vs Bloch " + fmt(path_gap) + ", Lambda^3 + Lambda " + fmt(cube_gap) +
                ", |r| drift " + fmt(norm_gap)};
}

Outcome ac7() {
    double sq = 0.0;
    double inv = 0.0;
    double det = 0.0;
    double cosl = 0.0;
    double skew = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const BlochVector r = random_bloch(seed_for(7, i, 0), 0.95);
        const BlochVector s = random_bloch(seed_for(7, i, 1));
        const DensityMatrix rho = from_bloch(r);
        sq = std::max(sq, max_abs(qubit_sqrt_closed(r).matrix() - rho.sqrt().matrix()));
        const Matrix numeric_inv = inverse(rho.matrix());
        inv = std::max(inv, max_abs(qubit_inverse_closed(r).matrix() - numeric_inv) /
                                std::max(1.0, max_abs(numeric_inv)));
        const auto& ev = rho.spectrum().eigenvalues;
        det = std::max(det, std::abs(qubit_det_closed(r) - ev[0] * ev[1]));
        cosl = std::max(cosl, std::abs(cos_hellinger_qubit(r, s) - affinity(rho, from_bloch(s))));
        GaussianSource src(seed_for(7, i, 2));
        const Vec3 n = random_direction(src);
        const double varpi = 0.1 + 2.0 * src.uniform();
        const double alpha = src.normal();
        const HermitianMatrix k(Matrix::identity(2) * (varpi * alpha) + pauli_dot(n) * varpi);
        skew = std::max(skew, std::abs(wysi_qubit_closed(r, n, varpi) - wysi(rho, k)));
    }
    const bool pass = sq <= 1e-11 && inv <= 1e-11 && det <= 1e-11 && cosl <= 1e-11 && skew <= 1e-11;
    return {pass, "sqrt " + fmt(sq) + ", inverse(rel) " + fmt(inv) + ", det " + fmt(det) +
                      ", cosL " + fmt(cosl) + ", wysi " + fmt(skew)};
}

Outcome ac8() {
    std::size_t flow_fail = 0;
    std::size_t cs_fail = 0;
    double ident = 0.0;
    double worst_flow_ratio = 0.0;
    const BoundConfig cfg;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const std::size_t d = 2 + i % 4;
        const DensityMatrix rho = random_density(d, 1 + (i / 4) % d, seed_for(8, i, 0));
        const HermitianMatrix k = random_hermitian(d, seed_for(8, i, 1));
        // alternate constant generators with a qubit family whose axis turns
        const UnitaryFamily u = (d == 2 && i % 8 == 4)
                                    ? axis_unitary_family(rotating_xy_axis(0.7, 1.2, 0.3))
                                    : exp_family(k, 1.0);
        const double phi = 6.0 * GaussianSource(seed_for(8, i, 2)).uniform();
        try {
            const FlowResidual f = sqrt_flow_residual(rho, u, phi, cfg);
            worst_flow_ratio = std::max(worst_flow_ratio, f.residual / f.bound);
        } catch (const ToleranceError&) {
            ++flow_fail;
        }
        const CauchySchwarzGap g = cauchy_schwarz_gap(rho, u, phi, cfg);
        if (g.lhs > g.rhs * (1.0 + 1e-12) + 1e-15) ++cs_fail;
        const CommutatorNormIdentity c = commutator_norm_identity(rho, k);
        ident = std::max(ident, std::abs(c.norm - c.sqrt2_i));
    }
    return {flow_fail == 0 && cs_fail == 0 && ident <= 1e-11,
            "flow failures " + std::to_string(flow_fail) + " (worst residual/bound " +
                fmt(worst_flow_ratio) + "), CS failures " + std::to_string(cs_fail) +
                ", norm identity " + fmt(ident)};
}

Outcome ac9() {
    double worst = -std::numeric_limits<double>::infinity();
    double skew_gap = 0.0;
    std::size_t throws = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const std::size_t d = 2 + i % 4;
        const DensityMatrix psi = random_density(d, 1, seed_for(9, i, 0));
        const HermitianMatrix k = random_hermitian(d, seed_for(9, i, 1));
        const double hbar = 0.5 + 0.5 * static_cast<double>(i % 3);
        const UnitaryFamily u = exp_family(k, hbar);
        const double phi = 6.0 * GaussianSource(seed_for(9, i, 2)).uniform();
        try {
            const PureStateBound b = pure_state_bound(psi, u, phi);
            worst = std::max(worst, b.rhs - b.delta_k);
            skew_gap = std::max(skew_gap, std::abs(b.wysi - b.delta_k * b.delta_k));
        } catch (const ToleranceError&) {
            ++throws;
        }
    }
    return {throws == 0 && worst <= 1e-8 && skew_gap <= 1e-10,
            "max((hbar/sqrt2)|df| - DeltaK) " + fmt(worst) + ", |wysi - DeltaK^2| " + fmt(skew_gap) +
                ", tolerance errors " + std::to_string(throws)};
}

// Generator with a doubly degenerate eigenvalue and the matching block measurement.
std::pair<HermitianMatrix, ProjectiveMeasurement> degenerate_qutrit(std::uint64_t seed) {
    GaussianSource src(seed);
    const Matrix v = random_unitary(3, derive_seed(seed, 1));
    const double a = src.normal();
    const double b = src.normal();
    const HermitianMatrix k(v * Matrix::diagonal(std::vector<double>{a, a, b}) * v.adjoint());
    Matrix p1(3, 3);
    Matrix p2(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            p1(i, j) = v(i, 0) * std::conj(v(j, 0)) + v(i, 1) * std::conj(v(j, 1));
            p2(i, j) = v(i, 2) * std::conj(v(j, 2));
        }
    return {k, ProjectiveMeasurement({p1, p2})};
}

Outcome ac10(std::size_t& arbitrary_violations) {
    double convex = -std::numeric_limits<double>::infinity();
    double measure = -std::numeric_limits<double>::infinity();
    arbitrary_violations = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const std::size_t d = 2 + i % 2;
        HermitianMatrix k = random_hermitian(d, seed_for(10, i, 0));
        const DensityMatrix rho = random_density(d, 1 + (i / 2) % d, seed_for(10, i, 1));
        const DensityMatrix sigma = random_density(d, 1 + (i / 4) % d, seed_for(10, i, 2));
        const double lam = GaussianSource(seed_for(10, i, 3)).uniform();
        const DensityMatrix mix(rho.matrix() * lam + sigma.matrix() * (1.0 - lam));
        convex = std::max(convex, wysi(mix, k) - (lam * wysi(rho, k) + (1.0 - lam) * wysi(sigma, k)));

        // measurement in the incoherent basis of K
        std::vector<ProjectiveMeasurement> ms{ProjectiveMeasurement::from_basis(eigh(k).eigenvectors)};
        if (d == 3 && i % 4 == 1) {
            auto [kd, block] = degenerate_qutrit(seed_for(10, i, 4));
            k = kd;
            ms = {block};
        }
        for (const ProjectiveMeasurement& m : ms) {
            if (!m.commutes_with(k)) return {false, "constructed measurement does not commute with K"};
            measure = std::max(measure, measurement_average_wysi(rho, k, m).average - wysi(rho, k));
        }
        const auto arbitrary = ProjectiveMeasurement::from_basis(random_unitary(d, seed_for(10, i, 5)));
        if (measurement_average_wysi(rho, k, arbitrary).average > wysi(rho, k) + 1e-10)
            ++arbitrary_violations;
    }
    return {convex <= 1e-10 && measure <= 1e-10,
            "max convexity excess " + fmt(convex) + ", max measurement increase " + fmt(measure) +
                " (K-commuting measurements)"};
}

Outcome ac11() {
    auto run = [](std::size_t workers) {
        CampaignConfig cfg;
        cfg.mode = Mode::verify;
        cfg.seed = 42;
        cfg.trials = 100;
        cfg.workers = workers;
        return verify_summary_json(run_verify(cfg));
    };
    const std::string a = run(1);
    const std::string b = run(1);
    const std::string c = run(4);
    return {a == b && a == c && !a.empty(),
            std::string("two runs ") + (a == b ? "identical" : "differ") + ", workers 1 vs 4 " +
                (a == c ? "identical" : "differ") + ", " + std::to_string(a.size()) + " bytes"};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](const char* id, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    };
    std::size_t arbitrary = 0;
    report("AC1 ", ac1);
    report("AC2 ", ac2);
    report("AC3 ", ac3);
    report("AC4 ", ac4);
    report("AC5 ", ac5);
    report("AC6 ", ac6);
    report("AC7 ", ac7);
    report("AC8 ", ac8);
    report("AC9 ", ac9);
    report("AC10", [&] { return ac10(arbitrary); });
    std::printf("     info: measurement average exceeded wysi in %zu of 1000 random (non-commuting) bases\n",
                arbitrary);
    report("AC11", ac11);
    return failures == 0 ? 0 : 1;
}
