// Command implementations behind the CLI subcommands.  Each takes a validated
// RunConfig, writes its artifacts under cfg.out_dir and returns the process
// exit code (0 pass, 1 failure, 2 usage, 3 numerical error).

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qhd/io.hpp"

namespace qhd {

namespace detail {

inline std::string eps_tag(double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", eps);
    return buf;
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot open output file " + p.string());
    f << j.dump(2) << "\n";
}

}  // namespace detail

/// Profile CSVs (one per eps) plus a summary with monotonicity flags and the
/// derivative-bound ratios.  A per-eps failure is recorded; the exit code is
/// nonzero only when every amplitude fails.
inline int cmd_profile(const RunConfig& cfg, std::ostream& log = std::cerr) {
    if (cfg.eps_list.empty()) {
        log << "profile: empty eps list\n";
        return 2;
    }
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::json summary;
    summary["config"] = serialize_config(cfg);
    int failures = 0;
    for (double eps : cfg.eps_list) {
        nlohmann::json entry;
        entry["eps"] = eps;
        try {
            const ShockData sd = build_shock(cfg.r_minus, cfg.r_minus - eps, cfg.s, cfg.gas);
            ProfileOptions po = cfg.profile;
            po.n_points = cfg.n;
            const ProfileGrid g = solve_profile(sd, po);
            CsvWriter csv(std::filesystem::path(cfg.out_dir) /
                              ("profile_eps" + detail::eps_tag(eps) + ".csv"),
                          shock_params(sd), {"x", "R", "dR", "d2R", "U", "dU", "d2U"});
            for (int i = 0; i < g.n(); ++i)
                csv.row({g.x[i], g.R[i], g.dR[i], g.d2R[i], g.U[i], g.dU[i], g.d2U[i]});
            const auto mono = monotonicity_report(g);
            const auto bounds = derivative_bound_row(g);
            entry["monotone"] = mono.is_monotone;
            entry["n_sign_changes"] = mono.n_sign_changes;
            entry["min_R"] = mono.min_R;
            entry["sup_dR_over_eps2"] = bounds.sup_dR_over_eps2;
            entry["sup_d2R_over_eps_dR"] = bounds.sup_d2R_over_eps_dR;
            entry["sup_dU_over_eps2"] = bounds.sup_dU_over_eps2;
            entry["sup_d2U_over_eps_dR"] = bounds.sup_d2U_over_eps_dR;
            entry["ok"] = true;
        } catch (const std::exception& e) {
            entry["ok"] = false;
            entry["error"] = e.what();
            ++failures;
            log << "profile: eps = " << eps << " failed: " << e.what() << "\n";
        }
        summary["profiles"].push_back(entry);
    }
    detail::write_json(std::filesystem::path(cfg.out_dir) / "profile_summary.json", summary);
    return failures == static_cast<int>(cfg.eps_list.size()) ? 3 : 0;
}

/// Border and eigenvalue CSVs plus the SpectrumReport JSON, per amplitude.
inline int cmd_spectrum(const RunConfig& cfg, std::ostream& log = std::cerr) {
    if (cfg.eps_list.empty()) {
        log << "spectrum: empty eps list\n";
        return 2;
    }
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::json all;
    all["config"] = serialize_config(cfg);
    int code = 0;
    for (double eps : cfg.eps_list) {
        const std::string tag = detail::eps_tag(eps);
        nlohmann::json entry;
        entry["eps"] = eps;
        try {
            const ShockData sd = build_shock(cfg.r_minus, cfg.r_minus - eps, cfg.s, cfg.gas);
            ProfileOptions po = cfg.profile;
            po.n_points = cfg.n;
            const ProfileGrid g = solve_profile(sd, po);

            const auto xi = uniform_xi_grid();
            const auto bm = fredholm_borders(sd.r_minus, sd.u_minus, cfg.gas, cfg.s, xi);
            const auto bp = fredholm_borders(sd.r_plus, sd.u_plus, cfg.gas, cfg.s, xi);
            {
                CsvWriter csv(std::filesystem::path(cfg.out_dir) / ("borders_eps" + tag + ".csv"),
                              shock_params(sd), {"xi", "re", "im", "tag"});
                for (std::size_t i = 0; i < xi.size(); ++i) {
                    csv.row_tagged({xi[i], bm.branch1[i].real(), bm.branch1[i].imag()}, "minus1");
                    csv.row_tagged({xi[i], bm.branch2[i].real(), bm.branch2[i].imag()}, "minus2");
                    csv.row_tagged({xi[i], bp.branch1[i].real(), bp.branch1[i].imag()}, "plus1");
                    csv.row_tagged({xi[i], bp.branch2[i].real(), bp.branch2[i].imag()}, "plus2");
                }
            }

            const auto psL = point_spectrum(g, OperatorKind::L, cfg.scheme, cfg.filter);
            const auto psA = point_spectrum(g, OperatorKind::A, cfg.scheme, cfg.filter);
            for (const auto* ps : {&psL, &psA}) {
                CsvWriter csv(std::filesystem::path(cfg.out_dir) /
                                  (std::string("eigenvalues_") + to_string(ps->kind) + "_eps" +
                                   tag + ".csv"),
                              shock_params(sd), {"re", "im", "tail_mass", "movement", "tag"});
                for (const auto& m : ps->modes)
                    csv.row_tagged({m.lambda.real(), m.lambda.imag(), m.tail_mass, m.movement},
                                   to_string(m.label));
            }

            const auto opL = assemble_L(g, cfg.scheme);
            const SpectrumReport rep = spectral_verdict(sd, bm, bp, psL, psA,
                                                        translation_residual(opL, g), cfg.filter);
            entry["report"] = to_json(rep);
            entry["ok"] = true;
            if (rep.verdict == Verdict::unstable) code = std::max(code, 1);
        } catch (const std::exception& e) {
            entry["ok"] = false;
            entry["error"] = e.what();
            code = 3;
            log << "spectrum: eps = " << eps << " failed: " << e.what() << "\n";
        }
        all["spectra"].push_back(entry);
    }
    detail::write_json(std::filesystem::path(cfg.out_dir) / "spectrum_report.json", all);
    return code;
}

/// Certificates for every amplitude at the family speed, the (eps, s) sweep
/// table, and (with spectrum enabled) identity residuals on filtered
/// eigenpairs of A plus a seeded synthetic negative control.
inline int cmd_certify(const RunConfig& cfg, std::ostream& log = std::cerr) {
    if (cfg.eps_list.empty()) {
        log << "certify: empty eps list\n";
        return 2;
    }
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::json all;
    all["config"] = serialize_config(cfg);
    int code = 0;
    for (double eps : cfg.eps_list) {
        nlohmann::json entry;
        entry["eps"] = eps;
        try {
            const ShockData sd = build_shock(cfg.r_minus, cfg.r_minus - eps, cfg.s, cfg.gas);
            ProfileOptions po = cfg.profile;
            po.n_points = cfg.n;
            const ProfileGrid g = solve_profile(sd, po);
            CertificateReport rep = ee_certificate(g);

            if (cfg.with_spectrum && rep.applicable) {
                const CoefficientFields cf = coefficient_fields(g);
                const auto psA = point_spectrum(g, OperatorKind::A, cfg.scheme, cfg.filter);
                for (const auto* m : psA.filtered()) {
                    Eigen::VectorXcd rho(g.n()), v(g.n());
                    for (int i = 0; i < g.n(); ++i) {
                        rho[i] = m->vector[2 * i];
                        v[i] = m->vector[2 * i + 1];
                    }
                    rep.identity_residuals.push_back(
                        energy_identity_residual(m->lambda, rho, v, cf, g));
                }
                // Synthetic negative control: a smooth decaying pair that does
                // not solve the spectral problem.
                std::mt19937_64 rng(cfg.seed);
                std::uniform_real_distribution<double> ud(0.5, 1.5);
                Eigen::VectorXcd rho(g.n()), v(g.n());
                const double amp1 = ud(rng), amp2 = ud(rng);
                const double width = 0.05 * (g.x.back() - g.x.front());
                for (int i = 0; i < g.n(); ++i) {
                    const double e = std::exp(-g.x[i] * g.x[i] / (2.0 * width * width));
                    rho[i] = amp1 * e;
                    v[i] = amp2 * e * g.x[i] / width;
                }
                entry["negative_control_residual"] =
                    energy_identity_residual({0.0, 0.0}, rho, v, coefficient_fields(g), g);
            }

            entry["certificate"] = to_json(rep);
            entry["ok"] = true;
            if (rep.applicable && !rep.pass && sd.s < speed_bound(cfg.r_minus, cfg.gas.gamma))
                code = std::max(code, 1);
        } catch (const std::exception& e) {
            entry["ok"] = false;
            entry["error"] = e.what();
            code = 3;
            log << "certify: eps = " << eps << " failed: " << e.what() << "\n";
        }
        all["certificates"].push_back(entry);
    }

    // Sweep over (eps, s).
    std::vector<double> s_list = cfg.s_list.empty() ? std::vector<double>{cfg.s} : cfg.s_list;
    SweepOptions so;
    so.profile = cfg.profile;
    so.profile.n_points = cfg.n;
    so.jobs = cfg.jobs;
    so.filter = cfg.filter;
    const auto cells = epsilon_sweep(cfg.r_minus, cfg.gas, cfg.eps_list, s_list, so);
    {
        CsvWriter csv(std::filesystem::path(cfg.out_dir) / "sweep.csv",
                      {{"gamma", io::fmt(cfg.gas.gamma)},
                       {"mu", io::fmt(cfg.gas.mu)},
                       {"k", io::fmt(cfg.gas.k)},
                       {"r_minus", io::fmt(cfg.r_minus)}},
                      {"eps", "s", "in_hypothesis", "monotone", "certificate_pass", "margin_rho",
                       "margin_v", "margin_rho_prime", "margin_v_prime", "status"});
        for (const auto& c : cells)
            csv.row_tagged({c.eps, c.s, static_cast<double>(c.in_hypothesis),
                            static_cast<double>(c.monotone),
                            static_cast<double>(c.certificate_pass), c.margin_rho, c.margin_v,
                            c.margin_rho_prime, c.margin_v_prime},
                           c.error.empty() ? (c.certificate_applicable ? "ok" : "not_applicable")
                                           : "error");
    }
    for (const auto& c : cells)
        if (c.in_hypothesis && c.error.empty() && c.certificate_applicable && !c.certificate_pass)
            code = std::max(code, 1);

    detail::write_json(std::filesystem::path(cfg.out_dir) / "certificate.json", all);
    return code;
}

/// kappa(gamma) against the linear-viscosity bound (gamma+1)/2.
inline int cmd_kappa(const RunConfig& cfg, std::ostream& log = std::cerr) {
    if (cfg.gamma_count < 2 || !(cfg.gamma_min > 1.0) || !(cfg.gamma_max < 3.0) ||
        !(cfg.gamma_min < cfg.gamma_max)) {
        log << "kappa: gamma grid must lie inside (1, 3)\n";
        return 2;
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<double> grid(cfg.gamma_count);
    for (int i = 0; i < cfg.gamma_count; ++i)
        grid[i] = cfg.gamma_min + (cfg.gamma_max - cfg.gamma_min) * i / (cfg.gamma_count - 1);
    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "kappa.csv",
                  {{"gamma_min", io::fmt(cfg.gamma_min)},
                   {"gamma_max", io::fmt(cfg.gamma_max)},
                   {"gamma_count", std::to_string(cfg.gamma_count)}},
                  {"gamma", "kappa", "linear_bound"});
    for (const auto& row : kappa_comparison_table(grid))
        csv.row({row.gamma, row.kappa_value, row.linear_viscosity_bound});
    return 0;
}

/// Standalone sweep (the sweep half of certify, optionally with per-cell
/// spectrum verdicts).
inline int cmd_sweep(const RunConfig& cfg, std::ostream& log = std::cerr) {
    if (cfg.eps_list.empty()) {
        log << "sweep: empty eps list\n";
        return 2;
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<double> s_list = cfg.s_list.empty() ? std::vector<double>{cfg.s} : cfg.s_list;
    SweepOptions so;
    so.profile = cfg.profile;
    so.profile.n_points = cfg.n;
    so.jobs = cfg.jobs;
    so.filter = cfg.filter;
    so.with_spectrum = cfg.with_spectrum;
    const auto cells = epsilon_sweep(cfg.r_minus, cfg.gas, cfg.eps_list, s_list, so);

    CsvWriter csv(std::filesystem::path(cfg.out_dir) / "sweep.csv",
                  {{"gamma", io::fmt(cfg.gas.gamma)},
                   {"mu", io::fmt(cfg.gas.mu)},
                   {"k", io::fmt(cfg.gas.k)},
                   {"r_minus", io::fmt(cfg.r_minus)}},
                  {"eps", "s", "in_hypothesis", "monotone", "certificate_pass", "margin_rho",
                   "margin_v", "margin_rho_prime", "margin_v_prime", "verdict"});
    nlohmann::json j;
    j["config"] = serialize_config(cfg);
    int code = 0;
    for (const auto& c : cells) {
        csv.row_tagged({c.eps, c.s, static_cast<double>(c.in_hypothesis),
                        static_cast<double>(c.monotone),
                        static_cast<double>(c.certificate_pass), c.margin_rho, c.margin_v,
                        c.margin_rho_prime, c.margin_v_prime},
                       c.error.empty() ? c.spectrum_verdict : ("error: " + c.error));
        nlohmann::json cj = {{"eps", c.eps},
                             {"s", c.s},
                             {"in_hypothesis", c.in_hypothesis},
                             {"monotone", c.monotone},
                             {"certificate_applicable", c.certificate_applicable},
                             {"certificate_pass", c.certificate_pass},
                             {"spectrum_verdict", c.spectrum_verdict}};
        if (!c.error.empty()) cj["error"] = c.error;
        j["cells"].push_back(cj);
        if (c.in_hypothesis && c.error.empty() && c.certificate_applicable && !c.certificate_pass)
            code = std::max(code, 1);
    }
    detail::write_json(std::filesystem::path(cfg.out_dir) / "sweep.json", j);
    (void)log;
    return code;
}

}  // namespace qhd
