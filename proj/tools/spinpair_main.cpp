// Command-line front end: evolve / sweep / validate / figure.
// Exit codes: 0 ok, 1 config error, 2 validation failure, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spinpair/runner.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_sweep(const spinpair::SweepResult& result, const std::filesystem::path& dir) {
    for (const auto& f : result.csvs) write_file(dir / f.name, f.content);
    write_file(dir / result.plot_script.name, result.plot_script.content);
    for (const auto& f : result.csvs) std::cout << (dir / f.name).string() << "\n";
    std::cout << (dir / result.plot_script.name).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytic two-qubit dissipative dynamics: concurrence and "
                 "population curves for exchange-coupled qubits in independent "
                 "zero-temperature bosonic baths"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string outdir = ".";
    int samples_override = 0;
    double tolerance = 1e-6;
    unsigned long seed = 20240901;
    int figure_id = 1;
    double gamma0_over_k = 1.0;

    auto* evolve = app.add_subcommand("evolve", "run one configuration, emit CSV");
    evolve->add_option("config", config_path, "key=value config file")->required();
    evolve->add_option("--out", out_path, "output CSV path (default: stdout)");
    evolve->add_option("--samples", samples_override, "override horizon.samples");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep, emit CSVs + plot script");
    sweep->add_option("config", config_path, "key=value config file with sweep.* keys")
        ->required();
    sweep->add_option("--outdir", outdir, "output directory (default: .)");
    sweep->add_option("--samples", samples_override, "override horizon.samples");

    auto* validate = app.add_subcommand("validate", "cross-check analytic solution "
                                                    "against the brute-force integrator");
    validate->add_option("config", config_path, "key=value config file")->required();
    validate->add_option("--tolerance", tolerance, "max allowed deviation (default 1e-6)");
    validate->add_option("--seed", seed, "seed for the randomized physicality suite");

    auto* figure = app.add_subcommand("figure", "built-in figure recipes 1-4");
    figure->add_option("id", figure_id, "figure number (1..4)")->required();
    figure->add_option("--outdir", outdir, "output directory (default: .)");
    figure->add_option("--samples", samples_override, "samples per curve (default 201)");
    figure->add_option("--gamma0-over-k", gamma0_over_k,
                       "figure 4 only: gamma0 in units of K (default 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (evolve->parsed()) {
            auto cfg = spinpair::parse_run_config_file(config_path);
            if (samples_override > 0) cfg.samples = samples_override;
            const std::string csv = spinpair::run_evolve(cfg);
            if (out_path.empty())
                std::cout << csv;
            else
                write_file(out_path, csv);
            return 0;
        }
        if (sweep->parsed()) {
            auto cfg = spinpair::parse_sweep_config_file(config_path);
            if (samples_override > 0) cfg.base.samples = samples_override;
            write_sweep(spinpair::run_sweep(cfg), outdir);
            return 0;
        }
        if (validate->parsed()) {
            const auto cfg = spinpair::parse_run_config_file(config_path);
            const auto report = spinpair::run_validate(cfg, tolerance, seed);
            std::cout << report.text;
            return report.passed ? 0 : 2;
        }
        if (figure->parsed()) {
            const int n = samples_override > 0 ? samples_override : 201;
            write_sweep(spinpair::run_figure(figure_id, n, gamma0_over_k), outdir);
            return 0;
        }
    } catch (const spinpair::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const spinpair::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
