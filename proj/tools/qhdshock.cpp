// qhdshock: profiles, spectra and stability certificates for viscous-
// dispersive shock waves of the 1-D QHD system with nonlinear viscosity.
//
// Subcommands: profile | spectrum | certify | kappa | sweep.
// Exit codes: 0 pass, 1 failure, 2 usage error, 3 numerical error.

#include <CLI11.hpp>
#include <iostream>

#include "qhd/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"viscous-dispersive QHD shock profiles and spectral stability"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int resolution = 0;
    int jobs = -1;
    std::string scheme;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--resolution", resolution, "grid points per component (overrides config)");
        sub->add_option("--jobs", jobs, "worker threads (overrides config)");
        sub->add_option("--scheme", scheme, "discretization scheme: fd4 or spectral")
            ->check(CLI::IsMember({"fd4", "spectral"}));
    };

    CLI::App* c_profile = app.add_subcommand("profile", "compute shock profiles, export CSVs");
    CLI::App* c_spectrum = app.add_subcommand("spectrum", "borders, point spectra and verdict");
    CLI::App* c_certify = app.add_subcommand("certify", "energy-estimate certificates and sweep");
    CLI::App* c_kappa = app.add_subcommand("kappa", "speed-bound comparison table");
    CLI::App* c_sweep = app.add_subcommand("sweep", "stability-region sweep over (eps, s)");
    for (auto* sub : {c_profile, c_spectrum, c_certify, c_kappa, c_sweep}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    qhd::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = qhd::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (resolution > 0) cfg.n = resolution;
        if (jobs >= 0) cfg.jobs = jobs;
        if (!scheme.empty()) cfg.scheme = scheme == "fd4" ? qhd::Scheme::fd4 : qhd::Scheme::spectral;
        cfg.validate();
    } catch (const qhd::config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(c_profile)) return qhd::cmd_profile(cfg);
        if (app.got_subcommand(c_spectrum)) return qhd::cmd_spectrum(cfg);
        if (app.got_subcommand(c_certify)) return qhd::cmd_certify(cfg);
        if (app.got_subcommand(c_kappa)) return qhd::cmd_kappa(cfg);
        if (app.got_subcommand(c_sweep)) return qhd::cmd_sweep(cfg);
    } catch (const qhd::config_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 2;
}
