// wyskew command line harness.
//
//   wyskew qubit-example [--r0 0.6 --azimuth 0 --varpi 1 --alpha 0 --hbar 1 --axis 0,0,1]
//   wyskew sweep   --dim 4 --rank 2 --seed 7
//   wyskew verify  --dim 2,3,4,8 --rank 0 --trials 10000 --seed 42
//   wyskew oracle  --dim 4 --trials 100
//
// Exit status: 0 no violations, 1 violation or tolerance breach, 2 usage or I/O error.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wyskew/campaign.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
    std::vector<std::size_t> dims;
    for (const auto& p : split_commas(s)) dims.push_back(static_cast<std::size_t>(std::stoul(p)));
    return dims;
}

wyskew::Vec3 parse_axis(const std::string& s) {
    const auto parts = split_commas(s);
    if (parts.size() != 3) throw wyskew::ValidationError("--axis expects x,y,z");
    return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
}

}  // namespace

int main(int argc, char** argv) {
    using namespace wyskew;

    CLI::App app{"Skew-information coherence bound: qubit example, sweeps, Monte Carlo verification"};
    app.require_subcommand(1);

    CampaignConfig cfg;
    std::string dims_text = "2";
    std::string axis_text = "0,0,1";
    std::string format_text = "csv";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--dim", dims_text, "Hilbert-space dimension(s), comma separated");
        sub->add_option("--rank", cfg.rank, "State rank (0 cycles 1..dim across trials)");
        sub->add_option("--trials", cfg.trials, "Number of random instances");
        sub->add_option("--seed", cfg.seed, "Master seed");
        sub->add_option("--phi-min", cfg.phi_min, "Grid start");
        sub->add_option("--phi-max", cfg.phi_max, "Grid end");
        sub->add_option("--phi-steps", cfg.phi_steps, "Grid points (>= 2)");
        sub->add_option("--hbar", cfg.hbar, "Reduced Planck constant");
        sub->add_option("--varpi", cfg.varpi, "Generator scale");
        sub->add_option("--alpha", cfg.alpha, "Identity component of the generator");
        sub->add_option("--r0", cfg.r0, "Initial Bloch radius (qubit example)");
        sub->add_option("--azimuth", cfg.azimuth, "Initial Bloch azimuth (qubit example)");
        sub->add_option("--axis", axis_text, "Constant rotation axis x,y,z (qubit example)");
        sub->add_option("--out", cfg.output_path, "Output file (default stdout)");
        sub->add_option("--format", format_text, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", cfg.workers, "Worker threads");
    };

    auto* qubit = app.add_subcommand("qubit-example", "Closed-form single-qubit bound report");
    auto* sweep = app.add_subcommand("sweep", "Bound report for one random instance");
    auto* verify = app.add_subcommand("verify", "Monte Carlo verification campaign (JSON summary)");
    auto* oracle = app.add_subcommand("oracle", "Spectral vs integral sqrt and derivative oracles");
    for (auto* sub : {qubit, sweep, verify, oracle}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::ok : exit_code::usage;
    }

    try {
        cfg.dims = parse_dims(dims_text);
        cfg.axis = parse_axis(axis_text);
        cfg.format = format_text == "json" ? OutputFormat::json : OutputFormat::csv;

        if (qubit->parsed()) {
            const auto res = run_qubit_example(cfg);
            write_output(cfg.output_path, res.rendered, std::cout);
            std::cerr << "qubit-example: " << res.report.rows.size() << " rows, "
                      << res.report.violations() << " violations, min margin "
                      << format_double(res.report.min_margin()) << "\n";
            return res.exit_status;
        }
        if (sweep->parsed()) {
            const auto res = run_sweep(cfg);
            write_output(cfg.output_path, res.rendered, std::cout);
            std::cerr << "sweep: " << res.report.rows.size() << " rows, "
                      << res.report.violations() << " violations, min margin "
                      << format_double(res.report.min_margin()) << "\n";
            return res.exit_status;
        }
        if (verify->parsed()) {
            const auto s = run_verify(cfg);
            write_output(cfg.output_path, verify_summary_json(s), std::cout);
            std::cerr << "verify: " << s.instances << " instances, " << s.violations
                      << " violations, min margin " << format_double(s.min_margin) << "\n";
            return s.exit_status();
        }
        if (oracle->parsed()) {
            const auto s = run_oracle(cfg);
            for (const auto& n : s.notices) std::cerr << "notice: " << n << "\n";
            for (const auto& b : s.breaches) std::cerr << "breach: " << b << "\n";
            write_output(cfg.output_path, oracle_summary_json(s), std::cout);
            std::cerr << "oracle: max sqrt discrepancy " << format_double(s.max_sqrt_discrepancy)
                      << ", max derivative gap " << format_double(s.max_derivative_gap) << "\n";
            return s.exit_status();
        }
    } catch (const ToleranceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::violation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::usage;
    }
    return exit_code::usage;
}
