#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "starflow/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"starflow - expanding curvature flows of star-shaped hypersurfaces"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    bool allow_out_of_range = false;
    CLI::App* run = app.add_subcommand("run", "integrate a configured flow");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_override, "override the output directory");
    run->add_flag("--allow-out-of-range", allow_out_of_range,
                  "permit exponents outside the guaranteed convergence ranges");

    std::vector<std::string> series_files;
    CLI::App* report = app.add_subcommand("report", "summarize series files");
    report->add_option("--series", series_files, "series CSV file(s)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "cannot open config file " << config_path << "\n";
            return 4;
        }
        std::stringstream buf;
        buf << is.rdbuf();
        starflow::RunConfig cfg;
        try {
            cfg = starflow::parse_config(buf.str());
        } catch (const starflow::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (allow_out_of_range) cfg.flow.allow_out_of_range = true;
        return starflow::run_command(cfg, std::cout);
    }
    return starflow::report_command(series_files, std::cout);
}
