// dephase_cli.cpp: trace / figure / compare / sweep front end
//
// Exit codes: 0 success, 2 config or usage error, 3 numerical failure.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dephase/dephase.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::istringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw std::invalid_argument("bad sweep value '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void report_files(const std::vector<std::filesystem::path>& files) {
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

void warn_watchdog(const dephase::CoherenceTrajectory& tr, const std::string& label) {
    if (!tr.flagged) return;
    std::size_t first = 0;
    while (first < tr.watchdog.size() && !tr.watchdog[first]) ++first;
    std::cerr << "WARN " << label << ": |coherence| exceeds |coherence(0)| * (1 + " << dephase::watchdog_margin
              << ") from t=" << tr.times[first] << " (watchdog_flag column)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pure-dephasing qubit coherence: kinetic-equation solver and closed-form comparisons"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    bool verbose = false;
    app.add_option("-o,--out-dir", out_dir, "Directory for output files")->capture_default_str();
    app.add_flag("-v,--verbose", verbose, "Log quadrature error estimates");

    std::string config_path;
    auto* trace = app.add_subcommand("trace", "Solve the full kinetic equation for a scenario");
    trace->add_option("config", config_path, "Scenario config file")->required();

    std::string preset;
    std::optional<double> lambda_override;
    auto* figure = app.add_subcommand("figure", "Reproduce a comparison figure (fig1 | fig2)");
    figure->add_option("preset", preset, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
    figure->add_option("--lambda", lambda_override, "Override the coupling strength");

    auto* compare = app.add_subcommand("compare", "Correlational decoherence: ZN vs renormalized vs exact");
    compare->add_option("config", config_path, "Scenario config file")->required();

    std::string axis, values_text;
    unsigned jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "Sweep one numeric key of a scenario");
    sweep->add_option("config", config_path, "Base scenario config file")->required();
    sweep->add_option("--axis", axis, "lambda | beta | beta_omega0 | sigma3_mean | s | t_max")->required();
    sweep->add_option("--values", values_text, "Comma-separated values")->required();
    sweep->add_option("--jobs", jobs, "Concurrent sweep points")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*trace) {
            auto sc = dephase::load_config(config_path);
            sc.quadrature.verbose = verbose;
            auto res = dephase::run_trace(sc);
            warn_watchdog(res.trajectory, sc.label);
            report_files(res.files.commit(out_dir));
        } else if (*figure) {
            dephase::QuadratureConfig q;
            q.verbose = verbose;
            const auto p = preset == "fig1" ? dephase::FigurePreset::fig1 : dephase::FigurePreset::fig2;
            auto res = dephase::run_figure(p, lambda_override, q);
            report_files(res.files.commit(out_dir));
            std::cout << dephase::comparison_json(res.report, preset);
        } else if (*compare) {
            auto sc = dephase::load_config(config_path);
            sc.quadrature.verbose = verbose;
            sc.params.validate();
            const auto rep =
                dephase::compare_correlational(sc.params, sc.solver.t_max, sc.solver.n_steps + 1, sc.quadrature);
            dephase::OutputSet files;
            files.add(sc.label + "_comparison.csv", dephase::comparison_csv(rep));
            files.add(sc.label + "_comparison.json", dephase::comparison_json(rep, sc.label));
            files.add(sc.label + "_comparison.gp",
                      dephase::comparison_gnuplot(sc.label + "_comparison.csv", sc.label));
            report_files(files.commit(out_dir));
            std::cout << dephase::comparison_json(rep, sc.label);
        } else if (*sweep) {
            auto base = dephase::load_config(config_path);
            base.quadrature.verbose = verbose;
            std::vector<double> values;
            try {
                values = parse_values(values_text);
            } catch (const std::exception& e) {
                std::cerr << "usage error: " << e.what() << '\n';
                return exit_config;
            }
            if (values.empty()) {
                std::cerr << "usage error: --values must list at least one value\n";
                return exit_config;
            }
            const auto rows = dephase::run_sweep(base, axis, values, jobs);
            dephase::OutputSet files;
            files.add(base.label + "_sweep_" + axis + ".csv", dephase::sweep_csv(axis, rows));
            report_files(files.commit(out_dir));
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (!rows[i].ok) std::cerr << "WARN sweep point " << i << ": " << rows[i].status << '\n';
                else if (rows[i].watchdog) std::cerr << "WARN sweep point " << i << ": watchdog flagged\n";
        }
    } catch (const dephase::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_ok;
}
