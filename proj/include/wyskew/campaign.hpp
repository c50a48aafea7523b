// campaign.hpp
// Batch harness behind the wyskew command line tool: qubit-example and sweep
// reports, randomized bound-verification campaigns, and oracle cross-checks.
// All outputs are deterministic functions of the configuration; trials are
// distributed over worker threads and merged in index order.

#pragma once

#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ios>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "wyskew/dynamics.hpp"
#include "wyskew/error.hpp"
#include "wyskew/linalg.hpp"
#include "wyskew/qubit_analytic.hpp"
#include "wyskew/states.hpp"

namespace wyskew {

enum class Mode { qubit_example, sweep, verify, oracle };
enum class OutputFormat { csv, json };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int violation = 1;
inline constexpr int usage = 2;
}  // namespace exit_code

struct CampaignConfig {
    Mode mode = Mode::qubit_example;
    std::vector<std::size_t> dims{2};
    std::size_t rank = 0;  // 0: cycle ranks 1..dim over trials
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    double phi_min = 0.0;
    double phi_max = 2.0 * std::numbers::pi;
    std::size_t phi_steps = 201;
    double hbar = 1.0;
    double varpi = 1.0;
    double alpha = 0.0;
    double r0 = 0.6;
    double azimuth = 0.0;
    Vec3 axis{0.0, 0.0, 1.0};
    std::string output_path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;
    std::size_t workers = 1;

    void validate() const {
        if (trials < 1) throw ValidationError("trials must be >= 1");
        if (phi_steps < 2) throw ValidationError("phi-steps must be >= 2");
        if (dims.empty()) throw ValidationError("at least one dimension is required");
        for (std::size_t d : dims) {
            if (d < 2 || d > 16) throw ValidationError("dim must lie in [2, 16]");
            if (rank > d) throw ValidationError("rank exceeds dim");
        }
        if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
        if (!(varpi > 0.0)) throw ValidationError("varpi must be positive");
        if (workers < 1) throw ValidationError("workers must be >= 1");
    }

    BoundConfig bound_config() const {
        BoundConfig b;
        b.hbar = hbar;
        b.phi_grid = uniform_grid(phi_min, phi_max, phi_steps);
        return b;
    }
};

// ---------------------------------------------------------------------------
// Serialization

inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline constexpr const char* report_csv_header = "phi,lhs,rhs,margin,wysi,cos_hellinger,violated";

inline std::string report_to_csv(const BoundReport& report) {
    std::ostringstream os;
    os << report_csv_header << '\n';
    for (const BoundRow& r : report.rows) {
        os << format_double(r.phi) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
           << ',' << format_double(r.margin) << ',' << format_double(r.wysi) << ','
           << format_double(r.cos_hellinger) << ',' << (r.violated ? 1 : 0) << '\n';
    }
    return os.str();
}

inline nlohmann::ordered_json report_to_json(const BoundReport& report) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const BoundRow& r : report.rows) {
        rows.push_back({{"phi", r.phi},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"margin", r.margin},
                        {"wysi", r.wysi},
                        {"cos_hellinger", r.cos_hellinger},
                        {"violated", r.violated},
                        {"analytic_lhs", r.analytic_lhs},
                        {"fd_error", r.fd_error},
                        {"nonsmooth", r.nonsmooth}});
    }
    return {{"rows", rows},
            {"violations", report.violations()},
            {"nonsmooth_points", report.nonsmooth_points()},
            {"min_margin", report.min_margin()}};
}

inline std::string render_report(const BoundReport& report, OutputFormat format) {
    if (format == OutputFormat::csv) return report_to_csv(report);
    return report_to_json(report).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Trial scheduling

// Runs fn(i) for i in [0, n) on `workers` threads; results land at index i.
// The first exception (by index) is rethrown after all workers finish.
template <typename Result, typename F>
std::vector<Result> run_indexed(std::size_t n, std::size_t workers, F&& fn) {
    std::vector<Result> results(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

struct TrialSpec {
    std::size_t index;
    std::size_t dim;
    std::size_t rank;
    std::uint64_t state_seed;
    std::uint64_t generator_seed;
};

inline TrialSpec trial_spec(const CampaignConfig& cfg, std::size_t i) {
    const std::size_t nd = cfg.dims.size();
    const std::size_t dim = cfg.dims[i % nd];
    const std::size_t rank = cfg.rank == 0 ? 1 + (i / nd) % dim : cfg.rank;
    const std::uint64_t trial_seed = derive_seed(cfg.seed, i);
    return {i, dim, rank, derive_seed(trial_seed, 0), derive_seed(trial_seed, 1)};
}

// ---------------------------------------------------------------------------
// qubit-example and sweep

struct ReportResult {
    BoundReport report;
    std::string rendered;
    int exit_status;
};

inline ReportResult run_qubit_example(const CampaignConfig& cfg) {
    cfg.validate();
    WorkedExampleParams p;
    p.r0_mag = cfg.r0;
    p.azimuth = cfg.azimuth;
    p.varpi = cfg.varpi;
    p.alpha = cfg.alpha;
    p.hbar = cfg.hbar;
    p.axis = cfg.axis;
    p.phi_grid = uniform_grid(cfg.phi_min, cfg.phi_max, cfg.phi_steps);
    WorkedExample ex = worked_example(p);
    const int status = ex.closed.violations() == 0 ? exit_code::ok : exit_code::violation;
    std::string text = render_report(ex.closed, cfg.format);
    return {std::move(ex.closed), std::move(text), status};
}

inline ReportResult run_sweep(const CampaignConfig& cfg) {
    cfg.validate();
    const TrialSpec t = trial_spec(cfg, 0);
    const DensityMatrix rho0 = random_density(t.dim, t.rank, t.state_seed);
    const HermitianMatrix k = random_hermitian(t.dim, t.generator_seed);
    BoundReport report = bound_check(rho0, exp_family(k, cfg.hbar), cfg.bound_config());
    const int status = report.violations() == 0 ? exit_code::ok : exit_code::violation;
    std::string text = render_report(report, cfg.format);
    return {std::move(report), std::move(text), status};
}

// ---------------------------------------------------------------------------
// verify

struct TrialOutcome {
    std::size_t dim = 0;
    std::size_t rank = 0;
    std::size_t grid_points = 0;
    std::size_t violations = 0;
    std::size_t nonsmooth = 0;
    BoundRow worst;
    double max_derivative_gap = 0.0;   // |numeric - analytic| over the grid
    double max_pure_reduction_gap = 0.0;  // pure inputs: |rhs - sqrt2 DeltaK / hbar|
};

struct VerifySummary {
    std::uint64_t seed = 0;
    std::size_t instances = 0;
    std::size_t grid_points = 0;
    std::size_t violations = 0;
    std::size_t nonsmooth_points = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t worst_trial = 0;
    TrialOutcome worst;
    double max_derivative_gap = 0.0;
    double max_pure_reduction_gap = 0.0;
    std::vector<std::size_t> dims;

    int exit_status() const { return violations == 0 ? exit_code::ok : exit_code::violation; }
};

inline TrialOutcome run_verify_trial(const CampaignConfig& cfg, const BoundConfig& bcfg,
                                     std::size_t i) {
    const TrialSpec t = trial_spec(cfg, i);
    const DensityMatrix rho0 = random_density(t.dim, t.rank, t.state_seed);
    const HermitianMatrix k = random_hermitian(t.dim, t.generator_seed);
    const UnitaryFamily u = exp_family(k, cfg.hbar);
    const BoundReport report = bound_check(rho0, u, bcfg);
    TrialOutcome out;
    out.dim = t.dim;
    out.rank = t.rank;
    out.grid_points = report.rows.size();
    out.violations = report.violations();
    out.nonsmooth = report.nonsmooth_points();
    out.worst = report.rows[report.worst_index()];
    for (const BoundRow& r : report.rows) {
        out.max_derivative_gap = std::max(out.max_derivative_gap, std::abs(r.lhs - r.analytic_lhs));
    }
    if (t.rank == 1) {
        // constant generator: K_phi = K and Var(K) is conserved
        for (const BoundRow& r : report.rows) {
            const double delta_k = std::sqrt(variance(evolve(rho0, u, r.phi), k));
            out.max_pure_reduction_gap =
                std::max(out.max_pure_reduction_gap,
                         std::abs(r.rhs - std::numbers::sqrt2 / cfg.hbar * delta_k));
        }
    }
    return out;
}

inline VerifySummary run_verify(const CampaignConfig& cfg) {
    cfg.validate();
    const BoundConfig bcfg = cfg.bound_config();
    const auto outcomes = run_indexed<TrialOutcome>(
        cfg.trials, cfg.workers, [&](std::size_t i) { return run_verify_trial(cfg, bcfg, i); });
    VerifySummary s;
    s.seed = cfg.seed;
    s.instances = cfg.trials;
    s.dims = cfg.dims;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const TrialOutcome& o = outcomes[i];
        s.grid_points += o.grid_points;
        s.violations += o.violations;
        s.nonsmooth_points += o.nonsmooth;
        s.max_derivative_gap = std::max(s.max_derivative_gap, o.max_derivative_gap);
        s.max_pure_reduction_gap = std::max(s.max_pure_reduction_gap, o.max_pure_reduction_gap);
        if (o.worst.margin < s.min_margin) {
            s.min_margin = o.worst.margin;
            s.worst_trial = i;
            s.worst = o;
        }
    }
    return s;
}

inline std::string verify_summary_json(const VerifySummary& s) {
    nlohmann::ordered_json j;
    j["instances"] = s.instances;
    j["grid_points"] = s.grid_points;
    j["min_margin"] = s.min_margin;
    j["violations"] = s.violations;
    j["worst_case_descriptor"] = {{"trial", s.worst_trial},
                                  {"dim", s.worst.dim},
                                  {"rank", s.worst.rank},
                                  {"phi", s.worst.worst.phi},
                                  {"lhs", s.worst.worst.lhs},
                                  {"rhs", s.worst.worst.rhs},
                                  {"margin", s.worst.worst.margin}};
    j["seed"] = s.seed;
    j["dims"] = s.dims;
    j["nonsmooth_points"] = s.nonsmooth_points;
    j["max_derivative_gap"] = s.max_derivative_gap;
    j["max_pure_reduction_gap"] = s.max_pure_reduction_gap;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// oracle

inline constexpr double sqrt_route_tolerance = 1e-6;

struct OracleSummary {
    std::size_t trials = 0;
    std::size_t integral_checked = 0;
    std::size_t integral_skipped = 0;
    double max_sqrt_discrepancy = 0.0;
    double max_derivative_gap = 0.0;
    double max_flow_residual = 0.0;
    std::vector<std::string> breaches;
    std::vector<std::string> notices;

    int exit_status() const { return breaches.empty() ? exit_code::ok : exit_code::violation; }
};

struct OracleTrial {
    bool integral_checked = false;
    double sqrt_discrepancy = 0.0;
    double derivative_gap = 0.0;
    double flow_residual = 0.0;
    std::string breach;
    std::string notice;
};

inline OracleSummary run_oracle(const CampaignConfig& cfg) {
    cfg.validate();
    const BoundConfig bcfg = cfg.bound_config();
    const auto trials = run_indexed<OracleTrial>(cfg.trials, cfg.workers, [&](std::size_t i) {
        const TrialSpec t = trial_spec(cfg, i);
        const DensityMatrix rho = random_density(t.dim, t.rank, t.state_seed);
        OracleTrial out;
        if (rho.rank() < rho.dim()) {
            out.notice = "trial " + std::to_string(i) + ": rank " + std::to_string(rho.rank()) +
                         " < dim " + std::to_string(rho.dim()) +
                         ", integral route skipped (requires a non-singular state)";
        } else {
            out.integral_checked = true;
            out.sqrt_discrepancy =
                schatten2_norm(matrix_sqrt_spectral(rho).matrix() -
                               matrix_power_integral(rho.hermitian(), 0.5, 64).matrix());
            if (out.sqrt_discrepancy > sqrt_route_tolerance) {
                out.breach = "trial " + std::to_string(i) + ": sqrt routes differ by " +
                             format_double(out.sqrt_discrepancy);
            }
        }
        const HermitianMatrix k = random_hermitian(t.dim, t.generator_seed);
        const UnitaryFamily u = exp_family(k, cfg.hbar);
        GaussianSource src(derive_seed(t.state_seed, 7));
        const double phi = cfg.phi_min + (cfg.phi_max - cfg.phi_min) * src.uniform();
        try {
            const DerivativeCheck d = cos_hellinger_derivative(rho, u, phi, bcfg);
            out.derivative_gap = std::abs(d.numeric - d.analytic);
            out.flow_residual = sqrt_flow_residual(rho, u, phi, bcfg).residual;
        } catch (const ToleranceError& e) {
            if (out.breach.empty()) out.breach = "trial " + std::to_string(i) + ": " + e.what();
        }
        return out;
    });
    OracleSummary s;
    s.trials = cfg.trials;
    for (const OracleTrial& t : trials) {
        if (t.integral_checked) {
            ++s.integral_checked;
            s.max_sqrt_discrepancy = std::max(s.max_sqrt_discrepancy, t.sqrt_discrepancy);
        } else {
            ++s.integral_skipped;
        }
        s.max_derivative_gap = std::max(s.max_derivative_gap, t.derivative_gap);
        s.max_flow_residual = std::max(s.max_flow_residual, t.flow_residual);
        if (!t.breach.empty()) s.breaches.push_back(t.breach);
        if (!t.notice.empty()) s.notices.push_back(t.notice);
    }
    return s;
}

inline std::string oracle_summary_json(const OracleSummary& s) {
    nlohmann::ordered_json j;
    j["trials"] = s.trials;
    j["integral_checked"] = s.integral_checked;
    j["integral_skipped"] = s.integral_skipped;
    j["max_sqrt_discrepancy"] = s.max_sqrt_discrepancy;
    j["max_derivative_gap"] = s.max_derivative_gap;
    j["max_flow_residual"] = s.max_flow_residual;
    j["breaches"] = s.breaches;
    return j.dump(2) + "\n";
}

// Writes to cfg.output_path, or to `fallback` when the path is empty.
inline void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw std::ios_base::failure("write to '" + path + "' failed");
}

}  // namespace wyskew
