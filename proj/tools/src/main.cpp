#include "horse_cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

int main(int argc, char** argv)
{
    using namespace horse::cli;

    CLI::App app{"Oscillator-representation (HORSE) scattering solver"};
    std::string config_path;
    std::string out_dir = ".";
    std::string preset;
    int threads = 1;
    app.add_option("config", config_path, "Run configuration ([section] key = value)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--preset", preset, "Figure preset, fig1 .. fig8")
        ->check(CLI::IsMember(preset_names()));
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->check(CLI::Range(0, 1024));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }
    if (threads == 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (config_path.empty() == preset.empty()) {
        std::cerr << "error: give exactly one of a config file or --preset\n";
        return exit_config;
    }

    try {
        const RunReport rep = preset.empty() ? run(load_config(config_path), out_dir, threads)
                                             : run_preset(preset, out_dir, threads);
        for (const auto& f : rep.files)
            std::cout << f.string() << '\n';
        if (rep.failed_points > 0) {
            std::cerr << "warning: " << rep.failed_points << " grid point(s) failed; see the status column\n";
            return exit_numerical;
        }
        return exit_ok;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const horse::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const horse::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    }
}
