#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "vvlab/experiment.hpp"
#include "vvlab/flows.hpp"

// exit codes: 0 pass, 1 verdict failure, 2 usage/config error, 3 numeric failure
int main(int argc, char** argv) {
    CLI::App app{"expanding-domain truncation and vanishing-viscosity laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    int jobs = 1;
    double resolution_scale = 1.0;
    std::string out_dir;
    if (const char* env = std::getenv("VVLAB_OUT")) out_dir = env;
    app.add_option("--jobs", jobs, "worker threads for sweep cells");
    app.add_option("--resolution-scale", resolution_scale,
                   "multiply quadrature/solver resolutions");
    app.add_option("--out", out_dir, "output directory (default: config 'out' or $VVLAB_OUT)");

    std::string config_path, manifest_path;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", config_path, "experiment config file")->required();
    auto* list_flows = app.add_subcommand("list-flows", "list catalog reference flows");
    auto* list_exp = app.add_subcommand("list-experiments", "list experiment kinds");
    auto* emit = app.add_subcommand("emit-plots", "emit plot data from a manifest");
    emit->add_option("manifest", manifest_path, "manifest.json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_flows->parsed()) {
            for (const auto& f : vvlab::catalog())
                std::cout << f.name << "  (" << f.dimension << "D, case " << f.case_tag
                          << ", s=" << f.smoothness << ")\n";
            return 0;
        }
        if (list_exp->parsed()) {
            for (const auto& k : vvlab::experiment_kinds()) std::cout << k << "\n";
            return 0;
        }
        if (emit->parsed()) {
            std::string notice;
            const auto dir = out_dir.empty() ? std::string("plots") : out_dir;
            auto written = vvlab::emit_plotdata(manifest_path, dir, &notice);
            for (const auto& p : written) std::cout << p.string() << "\n";
            if (!notice.empty()) std::cerr << notice << "\n";
            return 0;
        }
        // run
        auto config = vvlab::ExperimentConfig::parse_file(config_path);
        if (!out_dir.empty()) config.out = out_dir;
        if (jobs > 1) config.jobs = jobs;
        if (resolution_scale != 1.0) config.resolution_scale = resolution_scale;
        config.validate();
        auto manifest = vvlab::run(config);
        auto written = vvlab::write_outputs(manifest, config);
        for (const auto& p : written) std::cout << p.string() << "\n";
        std::cerr << manifest.log;
        std::cout << (manifest.pass ? "PASS" : "FAIL") << "\n";
        return manifest.pass ? 0 : 1;
    } catch (const vvlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}
