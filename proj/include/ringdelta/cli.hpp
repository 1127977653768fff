// Command-line front end: tables, wavefunction samples, characteristic-curve
// data and verification reports as CSV or JSON.
//
// Exit codes are the same for every subcommand: 0 success, 1 a verification
// check failed, 2 usage or validation error.
#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "charfn.hpp"
#include "core.hpp"
#include "oracle.hpp"
#include "states.hpp"
#include "verify.hpp"

namespace ringdelta::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

enum class EnergyFormula { Reduced, Hartree, PaperCompat };
enum class OutputFormat { Csv, Json, Text };

struct RunConfig {
    std::string subcommand;
    std::optional<double> q;
    std::optional<double> R0;
    std::optional<double> kappa;
    int n_max = 5;
    std::optional<double> eps_max;
    SignConvention convention = SignConvention::Derived;
    EnergyFormula energy = EnergyFormula::Hartree;
    OutputFormat format = OutputFormat::Csv;
    std::string out;  ///< empty: standard output
    int samples = 0;  ///< 0: per-command default

    // wavefunction
    std::string state = "bound";
    int n = 1;
    // charplot
    double d_min = 0.0;
    double d_max = 5.0;
    // verify
    int count = 6;
    long m_min = 250;
    int m_levels = 4;

    /// Physical parameters; with --kappa only R0 (default 1 bohr) is meaningful.
    SystemParams system() const {
        SystemParams p;
        if (q) p.q = *q;
        p.R0 = R0.value_or(1.0);
        return p;
    }

    double reduced_kappa() const { return kappa ? *kappa : reduce(system()).kappa; }
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

/// Shortest text that round-trips at 17 significant digits; no locale involved.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), r.ptr);
}

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> meta;  ///< CSV "# key: value" lines, JSON "meta"
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void write_csv(std::ostream& os) const {
        for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                std::visit([&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) os << format_number(v);
                    else os << v;
                }, row[i]);
            }
            os << '\n';
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        auto& m = j["meta"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : meta) m[k] = v;
        j["columns"] = columns;
        auto& rs = j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json r = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::visit([&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) r[columns[i]] = v;
                        else r[columns[i]] = format_number(v);
                    } else {
                        r[columns[i]] = v;
                    }
                }, row[i]);
            }
            rs.push_back(std::move(r));
        }
        return j;
    }

    void write(std::ostream& os, OutputFormat f) const {
        if (f == OutputFormat::Json) os << to_json().dump(2) << '\n';
        else write_csv(os);
    }
};

inline std::string join_numbers(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline double row_energy(const RunConfig& cfg, double eps, std::optional<double> bound_d) {
    const auto sys = cfg.system();
    switch (cfg.energy) {
        case EnergyFormula::Reduced: return eps;
        case EnergyFormula::Hartree: return physical_energy(eps, sys);
        case EnergyFormula::PaperCompat:
            return bound_d ? paper_compat_bound_energy(*bound_d, sys) : physical_energy(eps, sys);
    }
    return eps;
}

inline const char* to_string(EnergyFormula e) {
    switch (e) {
        case EnergyFormula::Reduced: return "reduced";
        case EnergyFormula::Hartree: return "hartree";
        case EnergyFormula::PaperCompat: return "paper-compat";
    }
    return "";
}

inline void add_common_meta(Table& t, const RunConfig& cfg, double kappa) {
    t.meta.emplace_back("kappa", format_number(kappa));
    t.meta.emplace_back("R0", format_number(cfg.system().R0));
    if (cfg.q) t.meta.emplace_back("q", format_number(*cfg.q));
}

/// Bound row (branch 0) followed by unbound branches 1..n_max, or every
/// branch whose energy stays below --eps-max.
inline Table cmd_solve(const RunConfig& cfg) {
    const double kappa = cfg.reduced_kappa();
    Table t;
    t.command = "solve";
    add_common_meta(t, cfg, kappa);
    t.meta.emplace_back("convention", to_string(cfg.convention));
    t.meta.emplace_back("energy", to_string(cfg.energy));
    t.columns = {"branch", "d_exact", "d_approx", "eps", "E_physical", "residual"};

    const auto b = solve_bound(kappa);
    const double eps_b = -b.d * b.d;
    t.rows.push_back({0L, b.d, approx_bound(kappa), eps_b, row_energy(cfg, eps_b, b.d), b.residual});
    for (int n = 1;; ++n) {
        if (cfg.eps_max) {
            if (double(n - 1) * double(n - 1) > *cfg.eps_max) break;
        } else if (n > cfg.n_max) {
            break;
        }
        const auto r = solve_unbound(kappa, n, cfg.convention);
        const double eps = r.d * r.d;
        if (cfg.eps_max && eps > *cfg.eps_max) continue;
        t.rows.push_back({long(n), r.d, approx_unbound(kappa, n), eps, row_energy(cfg, eps, std::nullopt), r.residual});
    }
    return t;
}

inline State select_state(const RunConfig& cfg, double kappa) {
    if (cfg.state == "bound") return make_bound(kappa);
    if (cfg.n < 1) throw UsageError("--n must be >= 1");
    if (cfg.state == "cos") return make_cos(kappa, cfg.n, cfg.convention);
    if (cfg.state == "sin") return make_sin(cfg.n);
    throw UsageError("unknown state selector '" + cfg.state + "' (expected bound, cos or sin)");
}

/// Samples theta_i = 2 pi i / samples with the ring coordinates
/// (R0 cos theta, R0 sin theta) alongside psi.
inline Table cmd_wavefunction(const RunConfig& cfg) {
    const double kappa = cfg.reduced_kappa();
    const State s = select_state(cfg, kappa);
    const int samples = cfg.samples ? cfg.samples : 360;
    const double R0 = cfg.system().R0;

    Table t;
    t.command = "wavefunction";
    add_common_meta(t, cfg, kappa);
    t.meta.emplace_back("state", label(s));
    t.meta.emplace_back("eps", format_number(energy(s)));
    t.columns = {"theta", "psi", "x", "y"};
    for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * pi * i / samples;
        t.rows.push_back({th, eval_psi(s, th), R0 * std::cos(th), R0 * std::sin(th)});
    }
    return t;
}

/// cot(pi d), coth(pi d) and the two straight lines -(2/kappa) d (derived)
/// and +(2/kappa) d (paper-compat) on a uniform d grid. Poles of cot inside
/// the range are listed in the header.
inline Table cmd_charplot(const RunConfig& cfg) {
    const double kappa = cfg.reduced_kappa();
    const int samples = cfg.samples ? cfg.samples : 1001;
    if (!(cfg.d_max > cfg.d_min)) throw UsageError("--d-max must exceed --d-min");

    std::vector<double> poles;
    for (double p = std::ceil(cfg.d_min); p <= cfg.d_max; p += 1.0) poles.push_back(p);

    Table t;
    t.command = "charplot";
    add_common_meta(t, cfg, kappa);
    t.meta.emplace_back("poles", join_numbers(poles));
    t.columns = {"d", "cot", "coth", "line_derived", "line_paper_compat"};
    for (int i = 0; i < samples; ++i) {
        const double d = cfg.d_min + (cfg.d_max - cfg.d_min) * i / (samples - 1);
        const double x = pi * d;
        const double coth = d > 0 ? safe_coth(x) : HUGE_VAL;
        t.rows.push_back({d, std::cos(x) / std::sin(x), coth, -2.0 / kappa * d, 2.0 / kappa * d});
    }
    return t;
}

inline std::vector<long> m_schedule(const RunConfig& cfg) {
    std::vector<long> Ms;
    for (int i = 0; i < cfg.m_levels; ++i) Ms.push_back(cfg.m_min << i);
    return Ms;
}

inline VerificationReport cmd_verify(const RunConfig& cfg) {
    return verify_all(cfg.reduced_kappa(), std::size_t(cfg.count), m_schedule(cfg), cfg.convention);
}

inline void write_report(std::ostream& os, const VerificationReport& rep, const RunConfig& cfg) {
    if (cfg.format == OutputFormat::Text) {
        os << rep.to_text();
        return;
    }
    Table t;
    t.command = "verify";
    add_common_meta(t, cfg, cfg.reduced_kappa());
    t.meta.emplace_back("convention", to_string(cfg.convention));
    t.meta.emplace_back("overall", rep.passed() ? "pass" : "FAIL");
    t.columns = {"check", "value", "tolerance", "pass"};
    for (const auto& c : rep.checks)
        t.rows.push_back({c.name, c.value, c.tolerance, std::string(c.pass ? "true" : "false")});
    t.write(os, cfg.format);
}

/// R0 at which the bound root is 1/2, and that state's energy. Under
/// --energy paper-compat the energy is the published table formula
/// -d^2 / (2 pi^2) at the table's 1 bohr reference radius.
inline Table cmd_smooth_radius(const RunConfig& cfg) {
    if (!cfg.q) throw UsageError("smooth-radius needs --q");
    if (!(*cfg.q > 0.0)) throw UsageError("q must be positive");
    const double q = *cfg.q;
    const double R0 = smooth_radius(q);
    SystemParams at{q, R0};
    const double d = solve_bound(reduce(at).kappa).d;
    double E = 0.0;
    switch (cfg.energy) {
        case EnergyFormula::Reduced: E = -d * d; break;
        case EnergyFormula::Hartree: E = physical_energy(-d * d, at); break;
        case EnergyFormula::PaperCompat: E = paper_compat_bound_energy(d, SystemParams{q, 1.0}); break;
    }
    Table t;
    t.command = "smooth-radius";
    t.meta.emplace_back("energy", to_string(cfg.energy));
    t.columns = {"q", "R0", "kappa", "d", "energy"};
    t.rows.push_back({q, R0, reduce(at).kappa, d, E});
    return t;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline void validate(const RunConfig& cfg) {
    const bool needs_system = cfg.subcommand != "smooth-radius";
    if (needs_system) {
        if (cfg.kappa && cfg.q) throw UsageError("--kappa and --q are mutually exclusive");
        if (!cfg.kappa && !cfg.q) throw UsageError("one of --kappa or --q is required");
        if (cfg.kappa && !(*cfg.kappa > 0.0 && std::isfinite(*cfg.kappa))) throw UsageError("kappa must be positive");
        if (cfg.q && !(*cfg.q > 0.0)) throw UsageError("q must be positive");
    }
    if (cfg.R0 && !(*cfg.R0 > 0.0)) throw UsageError("R0 must be positive");
    if (cfg.samples != 0 && cfg.samples < 2) throw UsageError("--samples must be >= 2");
    if (cfg.n_max < 0) throw UsageError("--n-max must be >= 0");
    if (cfg.count < 1) throw UsageError("--count must be >= 1");
    if (cfg.m_min < 1 || cfg.m_levels < 2 || cfg.m_levels > 12) throw UsageError("bad --m-min / --m-levels");
}

/// Parses args (without the program name), runs the subcommand and writes
/// its output to --out or to out. Diagnostics go to err.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Particle on a ring with an attractive delta well"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string convention = "derived", energy = "hartree", format;

    const std::map<std::string, SignConvention> conventions{{"derived", SignConvention::Derived},
                                                            {"paper-compat", SignConvention::PaperCompat}};
    const std::map<std::string, EnergyFormula> energies{{"reduced", EnergyFormula::Reduced},
                                                        {"hartree", EnergyFormula::Hartree},
                                                        {"paper-compat", EnergyFormula::PaperCompat}};

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--q", cfg.q, "well charge in units of e");
        sc->add_option("--R0", cfg.R0, "ring radius in bohr (default 1)");
        sc->add_option("--kappa", cfg.kappa, "dimensionless well strength, bypasses q/R0");
        sc->add_option("--convention", convention, "unbound sign convention")
            ->check(CLI::IsMember({"derived", "paper-compat"}));
        sc->add_option("--energy", energy, "energy column convention")
            ->check(CLI::IsMember({"reduced", "hartree", "paper-compat"}));
        sc->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json", "text"}));
        sc->add_option("--out", cfg.out, "output file (default: standard output)");
        sc->add_option("--samples", cfg.samples, "sample count for curves");
    };

    auto* solve = app.add_subcommand("solve", "bound and unbound roots table");
    add_common(solve);
    solve->add_option("--n-max", cfg.n_max, "number of unbound branches");
    solve->add_option("--eps-max", cfg.eps_max, "energy ceiling instead of --n-max");

    auto* wave = app.add_subcommand("wavefunction", "wavefunction samples on the ring");
    add_common(wave);
    wave->add_option("--state", cfg.state, "bound | cos | sin");
    wave->add_option("--n", cfg.n, "branch index for cos / sin states");

    auto* chart = app.add_subcommand("charplot", "characteristic-equation curves");
    add_common(chart);
    chart->add_option("--d-min", cfg.d_min, "lower end of the d range");
    chart->add_option("--d-max", cfg.d_max, "upper end of the d range");

    auto* ver = app.add_subcommand("verify", "run the verification suite");
    add_common(ver);
    ver->add_option("--count", cfg.count, "number of lowest states checked");
    ver->add_option("--m-min", cfg.m_min, "smallest oracle truncation M");
    ver->add_option("--m-levels", cfg.m_levels, "number of M doublings");

    auto* smooth = app.add_subcommand("smooth-radius", "ring radius giving d = 1/2");
    add_common(smooth);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    for (auto* sc : app.get_subcommands()) cfg.subcommand = sc->get_name();
    cfg.convention = conventions.at(convention);
    cfg.energy = energies.at(energy);
    if (format.empty()) cfg.format = cfg.subcommand == "verify" ? OutputFormat::Text : OutputFormat::Csv;
    else cfg.format = format == "json" ? OutputFormat::Json : format == "text" ? OutputFormat::Text : OutputFormat::Csv;

    try {
        validate(cfg);
        if (cfg.format == OutputFormat::Text && cfg.subcommand != "verify")
            throw UsageError("--format text is only available for verify");

        std::ofstream file;
        if (!cfg.out.empty()) {
            file.open(cfg.out, std::ios::binary);
            if (!file) throw UsageError("cannot open " + cfg.out);
        }
        std::ostream& os = cfg.out.empty() ? out : file;

        if (cfg.subcommand == "verify") {
            const auto rep = cmd_verify(cfg);
            write_report(os, rep, cfg);
            if (!rep.passed()) {
                err << "verification failed\n";
                return kCheckFailed;
            }
            return kOk;
        }
        Table t = cfg.subcommand == "solve"          ? cmd_solve(cfg)
                  : cfg.subcommand == "wavefunction" ? cmd_wavefunction(cfg)
                  : cfg.subcommand == "charplot"     ? cmd_charplot(cfg)
                                                     : cmd_smooth_radius(cfg);
        t.write(os, cfg.format);
        return kOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace ringdelta::cli
