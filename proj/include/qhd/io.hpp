// Run configuration (key-value text with sections), deterministic CSV export
// with self-describing parameter headers, and JSON report helpers.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qhd/certify.hpp"
#include "qhd/hydro.hpp"
#include "qhd/operators.hpp"
#include "qhd/profile.hpp"
#include "qhd/spectrum.hpp"

namespace qhd {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool operator==(const GasParams& a, const GasParams& b) {
    return a.gamma == b.gamma && a.mu == b.mu && a.k == b.k;
}
inline bool operator==(const ProfileOptions& a, const ProfileOptions& b) {
    return a.delta0_scale == b.delta0_scale && a.abs_tol == b.abs_tol && a.rel_tol == b.rel_tol &&
           a.tail_tol == b.tail_tol && a.n_points == b.n_points &&
           a.pad_fraction == b.pad_fraction && a.max_step == b.max_step &&
           a.max_length == b.max_length;
}
inline bool operator==(const FilterOptions& a, const FilterOptions& b) {
    return a.filter_tol == b.filter_tol && a.tail_mass_tol == b.tail_mass_tol &&
           a.boundary_frac == b.boundary_frac && a.re_window == b.re_window &&
           a.zero_window == b.zero_window && a.gap_tol == b.gap_tol &&
           a.border_tol == b.border_tol && a.trans_res_tol == b.trans_res_tol &&
           a.max_candidates == b.max_candidates;
}

struct RunConfig {
    GasParams gas{1.5, 1.0, std::sqrt(2.0)};
    double r_minus = 0.7;
    double s = 1.0;
    std::vector<double> eps_list{0.05};
    std::vector<double> s_list;  // sweep speeds; empty means {s}
    int n = 2000;
    Scheme scheme = Scheme::fd4;
    ProfileOptions profile;
    FilterOptions filter;
    bool with_spectrum = false;
    std::string out_dir = "out";
    unsigned long seed = 42;
    int jobs = 0;
    double gamma_min = 1.01;
    double gamma_max = 2.99;
    int gamma_count = 200;

    void validate() {
        gas.validate();
        if (!(r_minus > 0.0)) throw config_error("config: r_minus must be positive");
        if (!(s > 0.0)) throw config_error("config: s must be positive");
        if (n < 16) throw config_error("config: n too small");
        for (double t : {profile.abs_tol, profile.rel_tol, profile.tail_tol, filter.filter_tol,
                         filter.tail_mass_tol, filter.zero_window, filter.gap_tol,
                         filter.border_tol, filter.trans_res_tol})
            if (!(t > 0.0)) throw config_error("config: every tolerance must be positive");
        for (double e : eps_list)
            if (!(e > 0.0 && e < r_minus))
                throw config_error("config: eps values must lie in (0, r_minus)");
        std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
        std::sort(s_list.begin(), s_list.end());
        profile.n_points = n;
    }

    bool operator==(const RunConfig&) const = default;
};

namespace io {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out;
}

}  // namespace io

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[gas]\n";
    os << "gamma = " << io::fmt(c.gas.gamma) << "\n";
    os << "mu = " << io::fmt(c.gas.mu) << "\n";
    os << "k = " << io::fmt(c.gas.k) << "\n\n";
    os << "[family]\n";
    os << "r_minus = " << io::fmt(c.r_minus) << "\n";
    os << "s = " << io::fmt(c.s) << "\n";
    os << "eps_list = " << io::fmt_list(c.eps_list) << "\n";
    if (!c.s_list.empty()) os << "s_list = " << io::fmt_list(c.s_list) << "\n";
    os << "\n[discretization]\n";
    os << "n = " << c.n << "\n";
    os << "scheme = " << to_string(c.scheme) << "\n";
    os << "abs_tol = " << io::fmt(c.profile.abs_tol) << "\n";
    os << "rel_tol = " << io::fmt(c.profile.rel_tol) << "\n";
    os << "tail_tol = " << io::fmt(c.profile.tail_tol) << "\n";
    os << "delta0_scale = " << io::fmt(c.profile.delta0_scale) << "\n";
    os << "pad_fraction = " << io::fmt(c.profile.pad_fraction) << "\n";
    os << "max_step = " << io::fmt(c.profile.max_step) << "\n";
    os << "max_length = " << io::fmt(c.profile.max_length) << "\n";
    os << "\n[filter]\n";
    os << "filter_tol = " << io::fmt(c.filter.filter_tol) << "\n";
    os << "tail_mass_tol = " << io::fmt(c.filter.tail_mass_tol) << "\n";
    os << "boundary_frac = " << io::fmt(c.filter.boundary_frac) << "\n";
    os << "re_window = " << io::fmt(c.filter.re_window) << "\n";
    os << "zero_window = " << io::fmt(c.filter.zero_window) << "\n";
    os << "gap_tol = " << io::fmt(c.filter.gap_tol) << "\n";
    os << "border_tol = " << io::fmt(c.filter.border_tol) << "\n";
    os << "trans_res_tol = " << io::fmt(c.filter.trans_res_tol) << "\n";
    os << "max_candidates = " << c.filter.max_candidates << "\n";
    os << "\n[output]\n";
    os << "dir = " << c.out_dir << "\n";
    os << "seed = " << c.seed << "\n";
    os << "jobs = " << c.jobs << "\n";
    os << "with_spectrum = " << (c.with_spectrum ? "true" : "false") << "\n";
    os << "\n[kappa]\n";
    os << "gamma_min = " << io::fmt(c.gamma_min) << "\n";
    os << "gamma_max = " << io::fmt(c.gamma_max) << "\n";
    os << "gamma_count = " << c.gamma_count << "\n";
    return os.str();
}

namespace io {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw config_error("config parse error at line " + std::to_string(line) +
                           ": expected a number, got '" + v + "'");
    }
}

inline std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    return out;
}

}  // namespace io

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    c.eps_list.clear();
    std::istringstream is(text);
    std::string line, section;
    int ln = 0;
    bool saw_eps = false;
    while (std::getline(is, line)) {
        ++ln;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = io::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config parse error at line " + std::to_string(ln) +
                                   ": unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config parse error at line " + std::to_string(ln) +
                               ": expected 'key = value'");
        const std::string key = io::trim(line.substr(0, eq));
        const std::string val = io::trim(line.substr(eq + 1));
        const std::string sk = section + "." + key;

        if (sk == "gas.gamma") c.gas.gamma = io::parse_double(val, ln);
        else if (sk == "gas.mu") c.gas.mu = io::parse_double(val, ln);
        else if (sk == "gas.k") c.gas.k = io::parse_double(val, ln);
        else if (sk == "family.r_minus") c.r_minus = io::parse_double(val, ln);
        else if (sk == "family.s") c.s = io::parse_double(val, ln);
        else if (sk == "family.eps_list") { c.eps_list = io::parse_list(val, ln); saw_eps = true; }
        else if (sk == "family.r_plus_list") {
            c.eps_list.clear();
            for (double rp : io::parse_list(val, ln)) c.eps_list.push_back(c.r_minus - rp);
            saw_eps = true;
        }
        else if (sk == "family.s_list") c.s_list = io::parse_list(val, ln);
        else if (sk == "discretization.n") c.n = static_cast<int>(io::parse_double(val, ln));
        else if (sk == "discretization.scheme") {
            if (val == "fd4") c.scheme = Scheme::fd4;
            else if (val == "spectral") c.scheme = Scheme::spectral;
            else throw config_error("config parse error at line " + std::to_string(ln) +
                                    ": scheme must be fd4 or spectral");
        }
        else if (sk == "discretization.abs_tol") c.profile.abs_tol = io::parse_double(val, ln);
        else if (sk == "discretization.rel_tol") c.profile.rel_tol = io::parse_double(val, ln);
        else if (sk == "discretization.tail_tol") c.profile.tail_tol = io::parse_double(val, ln);
        else if (sk == "discretization.delta0_scale") c.profile.delta0_scale = io::parse_double(val, ln);
        else if (sk == "discretization.pad_fraction") c.profile.pad_fraction = io::parse_double(val, ln);
        else if (sk == "discretization.max_step") c.profile.max_step = io::parse_double(val, ln);
        else if (sk == "discretization.max_length") c.profile.max_length = io::parse_double(val, ln);
        else if (sk == "filter.filter_tol") c.filter.filter_tol = io::parse_double(val, ln);
        else if (sk == "filter.tail_mass_tol") c.filter.tail_mass_tol = io::parse_double(val, ln);
        else if (sk == "filter.boundary_frac") c.filter.boundary_frac = io::parse_double(val, ln);
        else if (sk == "filter.re_window") c.filter.re_window = io::parse_double(val, ln);
        else if (sk == "filter.zero_window") c.filter.zero_window = io::parse_double(val, ln);
        else if (sk == "filter.gap_tol") c.filter.gap_tol = io::parse_double(val, ln);
        else if (sk == "filter.border_tol") c.filter.border_tol = io::parse_double(val, ln);
        else if (sk == "filter.trans_res_tol") c.filter.trans_res_tol = io::parse_double(val, ln);
        else if (sk == "filter.max_candidates") c.filter.max_candidates = static_cast<int>(io::parse_double(val, ln));
        else if (sk == "output.dir") c.out_dir = val;
        else if (sk == "output.seed") c.seed = std::stoul(val);
        else if (sk == "output.jobs") c.jobs = static_cast<int>(io::parse_double(val, ln));
        else if (sk == "output.with_spectrum") c.with_spectrum = (val == "true" || val == "1");
        else if (sk == "kappa.gamma_min") c.gamma_min = io::parse_double(val, ln);
        else if (sk == "kappa.gamma_max") c.gamma_max = io::parse_double(val, ln);
        else if (sk == "kappa.gamma_count") c.gamma_count = static_cast<int>(io::parse_double(val, ln));
        else
            throw config_error("config parse error at line " + std::to_string(ln) +
                               ": unknown field '" + sk + "'");
    }
    if (!saw_eps) c.eps_list = {0.05};
    c.validate();
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// CSV file with a '#'-prefixed header block carrying the full parameter
/// record, then a column-name row.  All doubles are printed with %.17g so
/// identical runs produce identical bytes.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path,
              const std::vector<std::pair<std::string, std::string>>& params,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file " + path.string());
        out_ << "# qhdshock output\n";
        for (const auto& [k, v] : params) out_ << "# " << k << " = " << v << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            out_ << io::fmt(vals[i]) << (i + 1 < vals.size() ? "," : "\n");
    }
    void row_tagged(const std::vector<double>& vals, const std::string& tag) {
        for (double v : vals) out_ << io::fmt(v) << ",";
        out_ << tag << "\n";
    }

  private:
    std::ofstream out_;
};

inline std::vector<std::pair<std::string, std::string>> shock_params(const ShockData& sd) {
    return {{"gamma", io::fmt(sd.gas.gamma)}, {"mu", io::fmt(sd.gas.mu)},
            {"k", io::fmt(sd.gas.k)},         {"r_minus", io::fmt(sd.r_minus)},
            {"r_plus", io::fmt(sd.r_plus)},   {"s", io::fmt(sd.s)},
            {"a_const", io::fmt(sd.a_const)}, {"b_const", io::fmt(sd.b_const)},
            {"eps", io::fmt(sd.eps)}};
}

inline nlohmann::json to_json(const ShockData& sd) {
    return {{"gamma", sd.gas.gamma}, {"mu", sd.gas.mu},        {"k", sd.gas.k},
            {"r_minus", sd.r_minus}, {"r_plus", sd.r_plus},    {"u_minus", sd.u_minus},
            {"u_plus", sd.u_plus},   {"s", sd.s},              {"a_const", sd.a_const},
            {"b_const", sd.b_const}, {"eps", sd.eps},          {"lax", to_string(lax_classify(sd))}};
}

inline nlohmann::json to_json(const CertificateReport& r) {
    nlohmann::json j;
    j["shock"] = to_json(r.shock);
    j["applicable"] = r.applicable;
    if (!r.applicable) {
        j["not_applicable_reason"] = r.not_applicable_reason;
        return j;
    }
    j["eta"] = r.eta;
    j["f1g"] = {{"inf_f1", r.f1g.inf_f1},
                {"sup_f1", r.f1g.sup_f1},
                {"sup_df1_over_dR", r.f1g.sup_df1_over_dR},
                {"sup_d2f1_over_eps_dR", r.f1g.sup_d2f1_over_eps_dR},
                {"inf_g_over_dR", r.f1g.inf_g_over_dR},
                {"sup_dg_over_eps_dR", r.f1g.sup_dg_over_eps_dR},
                {"pass", r.f1g.pass}};
    j["hyperbolic"] = {{"c1", r.hyp.c1}, {"c2", r.hyp.c2}, {"pass", r.hyp.pass}};
    j["omega"] = {{"c3", r.omega.c3},
                  {"d_endpoint", r.omega.d_endpoint},
                  {"kappa_threshold", r.omega.kappa_threshold},
                  {"pass", r.omega.pass}};
    j["ratios"] = {{"r1", r.ratios.r1}, {"r2", r.ratios.r2}, {"r3", r.ratios.r3},
                   {"r4", r.ratios.r4}, {"r5", r.ratios.r5}, {"r6", r.ratios.r6},
                   {"r7", r.ratios.r7}, {"c_pert", r.ratios.c_pert}};
    j["margins"] = {{"rho", r.margin_rho},
                    {"v", r.margin_v},
                    {"rho_prime", r.margin_rho_prime},
                    {"v_prime", r.margin_v_prime}};
    if (!r.identity_residuals.empty()) j["identity_residuals"] = r.identity_residuals;
    j["pass"] = r.pass;
    return j;
}

inline nlohmann::json to_json(const SpectrumReport& r) {
    return {{"max_re_border", r.max_re_border},
            {"max_re_point", r.max_re_point},
            {"translation_residual", r.translation_residual},
            {"n_translation_modes", r.n_translation_modes},
            {"n_zero_modes_A", r.n_zero_modes_A},
            {"n_unresolved_right", r.n_unresolved_right},
            {"s_bar", r.s_bar},
            {"hypothesis_s", r.hypothesis_s},
            {"verdict", to_string(r.verdict)}};
}

}  // namespace qhd
