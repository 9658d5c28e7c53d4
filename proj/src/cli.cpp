#include "casimir/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "casimir/dispersion.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/scenarios.hpp"
#include "casimir/units.hpp"

namespace casimir::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t begin = 0;
    while (true) {
        const auto pos = s.find(sep, begin);
        parts.push_back(trim(s.substr(begin, pos - begin)));
        if (pos == std::string_view::npos) break;
        begin = pos + 1;
    }
    return parts;
}

// Splits "12.5nm" into 12.5 and "nm".
std::pair<double, std::string_view> number_and_unit(std::string_view text, std::string_view what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || !std::isfinite(value))
        throw UsageError(fmt::format("malformed {} '{}'", what, text));
    return {value, trim(std::string_view(ptr, text.data() + text.size() - ptr))};
}

}  // namespace

double parse_length(std::string_view text) {
    const auto [value, unit] = number_and_unit(text, "length");
    double scale = 0.0;
    if (unit == "nm") scale = 1e-9;
    else if (unit == "um" || unit == "\xC2\xB5m" || unit == "\xCE\xBCm") scale = 1e-6;
    else if (unit == "mm") scale = 1e-3;
    else if (unit == "m") scale = 1.0;
    else throw UsageError(fmt::format("length '{}' needs a unit of nm, um or m", text));
    const double meters = value * scale;
    if (!(meters > 0.0)) throw UsageError(fmt::format("length '{}' must be positive", text));
    return meters;
}

double parse_temperature(std::string_view text) {
    const auto [value, unit] = number_and_unit(text, "temperature");
    if (!unit.empty() && unit != "K") throw UsageError(fmt::format("temperature '{}' must be in K", text));
    if (!(value > 0.0)) throw UsageError(fmt::format("temperature '{}' must be positive", text));
    return value;
}

double parse_frequency(std::string_view text) {
    const auto [value, unit] = number_and_unit(text, "frequency");
    double rad_per_s = 0.0;
    if (unit == "eV") rad_per_s = si::eV(value);
    else if (unit == "meV") rad_per_s = si::meV(value);
    else if (unit == "rad/s") rad_per_s = value;
    else throw UsageError(fmt::format("frequency '{}' needs a unit of eV, meV or rad/s", text));
    if (!(rad_per_s > 0.0)) throw UsageError(fmt::format("frequency '{}' must be positive", text));
    return rad_per_s;
}

std::vector<double> parse_gaps(std::string_view text) {
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 4)
            throw UsageError(fmt::format("gap grid '{}' must be start:stop:lin|log:count", text));
        GapGrid grid;
        grid.start = parse_length(parts[0]);
        grid.stop = parse_length(parts[1]);
        if (parts[2] == "lin") grid.spacing = GapSpacing::linear;
        else if (parts[2] == "log") grid.spacing = GapSpacing::logarithmic;
        else throw UsageError(fmt::format("gap grid spacing '{}' must be lin or log", parts[2]));
        auto [ptr, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), grid.count);
        if (ec != std::errc{} || ptr != parts[3].data() + parts[3].size() || grid.count < 1)
            throw UsageError(fmt::format("gap grid count '{}' must be a positive integer", parts[3]));
        return grid.values();
    }
    std::vector<double> gaps;
    for (auto part : split(text, ',')) gaps.push_back(parse_length(part));
    return gaps;
}

namespace {

std::vector<double> parse_temperatures(std::string_view text) {
    std::vector<double> temps;
    for (auto part : split(text, ',')) temps.push_back(parse_temperature(part));
    return temps;
}

struct CommonFlags {
    std::vector<std::string> drude;
    std::vector<std::string> tables;
    std::string format = "text";
    std::string output;
    double tolerance = 1e-10;
    double truncation_relative = 1e-9;
    int truncation_consecutive = 3;
    unsigned jobs = 1;

    SolverOptions solver() const {
        SolverOptions opts;
        opts.quadrature_tolerance = tolerance;
        opts.truncation_relative = truncation_relative;
        opts.truncation_consecutive = truncation_consecutive;
        opts.jobs = jobs;
        return opts;
    }
};

void add_common(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--drude", flags.drude, "Custom Drude material NAME:OMEGA_P:NU (e.g. Ag:9.0eV:21meV)");
    sub->add_option("--table", flags.tables,
                    "Tabulated material NAME:PATH[:FALLBACK] from a zeta_rad_per_s,eps CSV");
    sub->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
    sub->add_option("--output,-o", flags.output, "Write to this file instead of standard output");
    sub->add_option("--tol", flags.tolerance, "Quadrature tolerance per Matsubara term")
        ->check(CLI::PositiveNumber);
    sub->add_option("--trunc-rel", flags.truncation_relative, "Relative size below which a term counts as negligible")
        ->check(CLI::PositiveNumber);
    sub->add_option("--trunc-count", flags.truncation_consecutive, "Consecutive negligible terms before stopping")
        ->check(CLI::PositiveNumber);
    sub->add_option("--jobs,-j", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

class MaterialRegistry {
public:
    explicit MaterialRegistry(const CommonFlags& flags) {
        for (const auto& spec : flags.drude) add_drude(spec);
        for (const auto& spec : flags.tables) add_table(spec);
    }

    Material resolve(std::string_view name, std::string_view flag) const {
        if (auto it = custom_.find(std::string(name)); it != custom_.end()) return it->second;
        try {
            return material_preset(name);
        } catch (const LookupError&) {
            std::string known = "Au, Cu, Al";
            for (const auto& [n, m] : custom_) known += ", " + n;
            throw UsageError(fmt::format("{}: unknown material '{}'; available: {}", flag, name, known));
        }
    }

    MaterialPair pair(std::string_view text, std::string_view flag) const {
        const auto names = split(text, ',');
        if (names.size() != 2 || names[0].empty() || names[1].empty())
            throw UsageError(fmt::format("{}: pair '{}' must be two names separated by a comma", flag, text));
        return {resolve(names[0], flag), resolve(names[1], flag)};
    }

private:
    void add_drude(std::string_view spec) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3 || parts[0].empty())
            throw UsageError(fmt::format("--drude: '{}' must be NAME:OMEGA_P:NU", spec));
        try {
            custom_.insert_or_assign(std::string(parts[0]),
                                     Material::drude(std::string(parts[0]),
                                                     DrudeParams(parse_frequency(parts[1]), parse_frequency(parts[2]))));
        } catch (const Error& e) {
            throw UsageError(fmt::format("--drude: {}", e.what()));
        }
    }

    void add_table(std::string_view spec) {
        const auto first = spec.find(':');
        if (first == std::string_view::npos || first == 0)
            throw UsageError(fmt::format("--table: '{}' must be NAME:PATH[:FALLBACK]", spec));
        const std::string name(spec.substr(0, first));
        std::string_view rest = spec.substr(first + 1);
        std::optional<AnalyticModel> fallback;
        if (const auto last = rest.rfind(':'); last != std::string_view::npos) {
            const Material fb = resolve(rest.substr(last + 1), "--table");
            if (std::holds_alternative<TabulatedModel>(fb.model()))
                throw UsageError(fmt::format("--table: fallback '{}' must be an analytic model", fb.name()));
            fallback = fb.low_frequency_model();
            rest = rest.substr(0, last);
        }
        try {
            custom_.insert_or_assign(name, Material::tabulated(name, load_permittivity_table_file(std::string(rest)),
                                                               fallback));
        } catch (const Error& e) {
            throw UsageError(fmt::format("--table {}: {}", rest, e.what()));
        }
    }

    std::map<std::string, Material> custom_;
};

std::string format_gap(double meters) {
    if (meters < 1e-6) return fmt::format("{:g} nm", meters * 1e9);
    return fmt::format("{:g} um", meters * 1e6);
}

// Owns the output file when --output is given.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw UsageError(fmt::format("--output: cannot open '{}' for writing", path));
        stream_ = file_.get();
    }
    std::ostream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void list_materials(std::ostream& out, const std::string& format) {
    if (format == "csv") {
        out << "name,model,omega_p_rad_per_s,nu_rad_per_s\n";
        for (auto name : preset_names()) {
            const Material mat = material_preset(name);
            const auto& p = std::get<DrudeParams>(mat.model());
            fmt::print(out, "{},drude,{:.10g},{:.10g}\n", name, p.omega_p(), p.nu());
        }
        return;
    }
    fmt::print(out, "{:<6}{:<8}{:>14}{:>14}{:>18}{:>18}\n", "name", "model", "omega_p [eV]", "nu [meV]",
               "omega_p [rad/s]", "nu [rad/s]");
    for (auto name : preset_names()) {
        const Material mat = material_preset(name);
        const auto& p = std::get<DrudeParams>(mat.model());
        fmt::print(out, "{:<6}{:<8}{:>14.4g}{:>14.4g}{:>18.5e}{:>18.5e}\n", name, "drude",
                   p.omega_p() / si::rad_per_s_per_eV, p.nu() / si::rad_per_s_per_eV * 1e3, p.omega_p(), p.nu());
    }
    fmt::print(out, "(1 eV = {:.4g} rad/s)\n", si::rad_per_s_per_eV);
}

void print_pressure_text(std::ostream& out, const MaterialPair& pair, double gap, double kelvin,
                         const PressureResult& r) {
    const double magnitude = std::abs(r.pressure);
    fmt::print(out, "{}  a = {}  T = {:g} K\n", pair.label(), format_gap(gap), kelvin);
    fmt::print(out, "|F| = {:.6g} mPa  ({:.6e} Pa, attractive)\n", magnitude * 1e3, magnitude);
    fmt::print(out, "TM {:.3f} %  TE {:.3f} %  Matsubara terms: {} (ceiling {})\n",
               100.0 * r.modes.tm / r.pressure, 100.0 * r.modes.te / r.pressure, r.m_used, r.m_ceiling);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Casimir pressure between parallel metal half-spaces at finite temperature", "casimir"};
    app.require_subcommand(1);

    CommonFlags common;

    auto* pressure = app.add_subcommand("pressure", "Pressure for one pair, gap and temperature");
    std::string pair_text, gap_text, temp_text;
    pressure->add_option("--pair", pair_text, "Material pair, e.g. Au,Cu")->required();
    pressure->add_option("--gap", gap_text, "Gap width, e.g. 200nm")->required();
    pressure->add_option("--temp", temp_text, "Temperature, e.g. 300K")->required();
    add_common(pressure, common);

    auto* sweep_cmd = app.add_subcommand("sweep", "Pressure over a grid of pairs, gaps and temperatures");
    std::vector<std::string> pairs_text;
    std::string sweep_gaps, sweep_temps;
    auto* pairs_opt = sweep_cmd->add_option("--pairs", pairs_text, "Pairs such as Au,Au Al,Cu, or 'all'");
    auto* single_pair_opt = sweep_cmd->add_option("--pair", pair_text, "A single pair");
    pairs_opt->excludes(single_pair_opt);
    sweep_cmd->add_option("--gaps", sweep_gaps, "start:stop:lin|log:count or a comma list")->required();
    sweep_cmd->add_option("--temps", sweep_temps, "Comma-separated temperatures in K")->required();
    add_common(sweep_cmd, common);

    auto* diff = app.add_subcommand("diff", "Pressure difference |F(T1)| - |F(T2)| over gaps");
    std::string diff_pair, diff_gaps, diff_temps;
    diff->add_option("--pair", diff_pair, "Material pair, e.g. Au,Au")->required();
    diff->add_option("--gaps", diff_gaps, "start:stop:lin|log:count or a comma list")->required();
    diff->add_option("--temps", diff_temps, "Two temperatures T1,T2; relative is taken against T1")->required();
    add_common(diff, common);

    auto* materials = app.add_subcommand("materials", "List built-in material presets");
    materials->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "csv"}));

    auto* import = app.add_subcommand("import-table", "Validate a permittivity CSV");
    std::string table_path;
    import->add_option("file", table_path, "CSV with header zeta_rad_per_s,eps")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*materials) {
            list_materials(out, common.format);
            return kExitOk;
        }

        if (*import) {
            const PermittivityTable table = load_permittivity_table_file(table_path);
            // Also enforces eps non-increasing in zeta.
            Material::tabulated(table_path, table);
            fmt::print(out, "{}: {} points, zeta in [{:g}, {:g}] rad/s, eps in [{:g}, {:g}]\n", table_path,
                       table.size(), table.zeta_min(), table.zeta_max(), table.points().back().eps,
                       table.points().front().eps);
            return kExitOk;
        }

        // Everything below validates flags fully before any computation starts.
        const MaterialRegistry registry(common);
        const SolverOptions opts = common.solver();

        if (*pressure) {
            const MaterialPair pair = registry.pair(pair_text, "--pair");
            const double gap = parse_length(gap_text);
            const double kelvin = parse_temperature(temp_text);
            OutputTarget target(common.output, out);

            const PlateSystem system(pair.first, pair.second, gap);
            const PressureResult r = casimir_pressure(system, ThermalState(kelvin), opts);
            if (common.format == "csv") {
                SweepTable table;
                table.solver = opts;
                table.rows.push_back({pair.label(), pair.first.name(), pair.second.name(), gap, kelvin,
                                      std::abs(r.pressure), r.modes.tm / r.pressure, r.modes.te / r.pressure,
                                      r.m_used});
                write_sweep_csv(target.stream(), table);
            } else {
                print_pressure_text(target.stream(), pair, gap, kelvin, r);
            }
            return kExitOk;
        }

        if (*sweep_cmd) {
            SweepSpec spec;
            if (!pair_text.empty()) {
                spec.pairs.push_back(registry.pair(pair_text, "--pair"));
            } else if (pairs_text.empty() || (pairs_text.size() == 1 && pairs_text[0] == "all")) {
                spec.pairs = preset_pairs();
            } else {
                for (const auto& p : pairs_text) spec.pairs.push_back(registry.pair(p, "--pairs"));
            }
            spec.gaps = parse_gaps(sweep_gaps);
            spec.temperatures = parse_temperatures(sweep_temps);
            OutputTarget target(common.output, out);

            const SweepTable table = sweep(spec, opts, common.jobs);
            if (common.format == "csv") {
                write_sweep_csv(target.stream(), table);
            } else {
                auto& os = target.stream();
                fmt::print(os, "{:<8}{:>12}{:>10}{:>16}{:>10}{:>10}{:>8}\n", "pair", "gap", "T [K]", "|F| [mPa]",
                           "TM %", "TE %", "m");
                for (const auto& row : table.rows)
                    fmt::print(os, "{:<8}{:>12}{:>10g}{:>16.6g}{:>10.3f}{:>10.3f}{:>8}\n", row.pair,
                               format_gap(row.gap_m), row.temperature_K, row.pressure_Pa * 1e3,
                               100.0 * row.tm_share, 100.0 * row.te_share, row.m_used);
            }
            return kExitOk;
        }

        if (*diff) {
            const MaterialPair pair = registry.pair(diff_pair, "--pair");
            const auto gaps = parse_gaps(diff_gaps);
            const auto temps = parse_temperatures(diff_temps);
            if (temps.size() != 2) throw UsageError("--temps: diff needs exactly two temperatures");
            if (temps[0] == temps[1]) throw UsageError("--temps: the two temperatures must differ");
            OutputTarget target(common.output, out);

            const auto rows = relative_correction_curve(pair, gaps, temps[0], temps[1], opts);
            if (common.format == "csv") {
                write_diff_csv(target.stream(), pair, rows, opts);
            } else {
                auto& os = target.stream();
                fmt::print(os, "{}  T1 = {:g} K  T2 = {:g} K  (relative = delta / |F(T1)|)\n", pair.label(),
                           temps[0], temps[1]);
                fmt::print(os, "{:>12}{:>16}{:>16}{:>16}{:>12}\n", "gap", "|F(T1)| [mPa]", "|F(T2)| [mPa]",
                           "delta [mPa]", "relative %");
                for (const auto& r : rows)
                    fmt::print(os, "{:>12}{:>16.6g}{:>16.6g}{:>16.6g}{:>12.4f}\n", format_gap(r.gap),
                               r.f_low_T * 1e3, r.f_high_T * 1e3, r.delta * 1e3, 100.0 * r.relative);
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitComputation;
    }
    return kExitUsage;
}

}  // namespace casimir::cli
