#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mobiq/analytics.hpp"
#include "mobiq/config.hpp"
#include "mobiq/csvio.hpp"
#include "mobiq/plot.hpp"
#include "mobiq/presets.hpp"
#include "mobiq/runner.hpp"

namespace {

// 0 ok, 2 configuration, 3 numerical convergence, 4 I/O.
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::string default_out_dir() {
    if (const char* env = std::getenv("MOBIQ_OUT"); env && *env) return env;
    return "out";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mobiq::IoError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wireless queue simulator and analytic calculator for mobile interferer fields"};
    app.fallthrough();
    app.set_version_flag("--version", "mobiq 0.1.0");
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();
    std::uint64_t seed_override = 0;
    int workers = 1;
    app.add_option("--out", out_dir, "output directory (default: $MOBIQ_OUT, else ./out)");
    auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
    app.add_option("--workers", workers, "worker threads, 0 = one per core (default 1)");

    auto* sim = app.add_subcommand("simulate", "run the experiment described by a config file");
    std::string sim_config;
    sim->add_option("config", sim_config, "config file path")->required();

    auto* ana = app.add_subcommand("analyze", "evaluate analytic quantities for a config");
    std::string ana_config;
    ana->add_option("config", ana_config, "config file path")->required();

    auto* swp = app.add_subcommand("sweep", "run the experiment across an axis of values");
    std::string swp_config, swp_axis;
    std::vector<std::string> swp_values;
    swp->add_option("config", swp_config, "config file path")->required();
    swp->add_option("--axis", swp_axis, "velocity | mobility-model | lambda | rho")->required();
    swp->add_option("--values", swp_values, "comma-separated axis values")
        ->required()
        ->delimiter(',');

    auto* plt = app.add_subcommand("plot", "render a CSV into a self-contained SVG");
    std::string plt_csv, plt_spec;
    plt->add_option("csv", plt_csv, "input csv (e.g. summary.csv)")->required();
    plt->add_option("spec", plt_spec, "plot spec file (key = value lines)")->required();

    auto* pre = app.add_subcommand("presets", "bundled experiment configurations");
    auto* pre_list = pre->add_subcommand("list", "list preset names");
    auto* pre_show = pre->add_subcommand("show", "print a preset config to stdout");
    std::string pre_name;
    pre_show->add_option("name", pre_name, "preset name, e.g. fig4")->required();
    pre->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        mobiq::RunOptions options;
        options.out_dir = out_dir;
        options.workers = workers;
        auto load = [&](const std::string& path) {
            mobiq::ExperimentConfig cfg = mobiq::load_config(path);
            if (seed_opt->count() > 0) cfg.seed = seed_override;
            return cfg;
        };

        if (*sim) {
            const std::string summary = mobiq::run_simulate(load(sim_config), options);
            std::cout << summary << "\n";
        } else if (*ana) {
            const mobiq::AnalyzeOutput out = mobiq::run_analyze(load(ana_config), options);
            std::cout << out.echo << out.csv_path << "\n";
        } else if (*swp) {
            const mobiq::SweepAxis axis = mobiq::parse_sweep_axis(swp_axis, swp_values);
            const std::string summary = mobiq::run_sweep(load(swp_config), axis, options);
            std::cout << summary << "\n";
        } else if (*plt) {
            const mobiq::CsvTable table = mobiq::read_csv_file(plt_csv);
            const mobiq::PlotSpec spec = mobiq::parse_plot_spec(read_file(plt_spec));
            const std::string svg = mobiq::render_svg(table, spec);
            const std::string name = spec.out.empty() ? stem_of(plt_csv) + ".svg" : spec.out;
            const std::string path = out_dir + "/" + name;
            mobiq::write_text_file(path, svg);
            std::cout << path << "\n";
        } else if (*pre) {
            if (*pre_list) {
                std::cout << mobiq::format_preset_listing();
            } else if (*pre_show) {
                const mobiq::Preset* preset = mobiq::find_preset(pre_name);
                if (!preset) {
                    std::cerr << "unknown preset: " << pre_name << "\n";
                    return kExitConfig;
                }
                std::cout << preset->text;
            }
        }
        return 0;
    } catch (const mobiq::ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return kExitConfig;
    } catch (const mobiq::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const mobiq::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        // load_config reports unreadable files through a plain runtime_error.
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
}
