#include "casimir/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"

namespace casimir {

std::vector<MaterialPair> preset_pairs() {
    const auto al = material_preset("Al");
    const auto au = material_preset("Au");
    const auto cu = material_preset("Cu");
    return {{al, al}, {al, au}, {al, cu}, {au, au}, {au, cu}, {cu, cu}};
}

namespace {

std::string cell_context(const std::string& pair, double gap, double kelvin) {
    return fmt::format("{} at a = {:g} m, T = {:g} K", pair, gap, kelvin);
}

PressureResult tagged_pressure(const PlateSystem& system, double kelvin, const SolverOptions& opts,
                               const std::string& label) {
    const ThermalState thermal(kelvin);
    try {
        return casimir_pressure(system, thermal, opts);
    } catch (const Error& e) {
        throw ScenarioError(cell_context(label, system.gap(), kelvin), e.what());
    }
}

}  // namespace

DiffResult temperature_difference(const PlateSystem& system, double t_low, double t_high,
                                  const SolverOptions& opts) {
    if (!(t_low > 0.0) || !(t_high > 0.0))
        throw DomainError(fmt::format("temperatures must be positive (got {} K, {} K)", t_low, t_high));
    if (t_low == t_high)
        throw DomainError(fmt::format("temperatures must differ (both {} K)", t_low));

    const std::string label = system.mat1().name() + "-" + system.mat3().name();
    const PressureResult low = tagged_pressure(system, t_low, opts, label);
    const PressureResult high = tagged_pressure(system, t_high, opts, label);

    DiffResult r;
    r.gap = system.gap();
    r.t_low = t_low;
    r.t_high = t_high;
    r.f_low_T = std::abs(low.pressure);
    r.f_high_T = std::abs(high.pressure);
    r.delta = r.f_low_T - r.f_high_T;
    r.relative = r.delta / r.f_low_T;
    r.m_used_low = low.m_used;
    r.m_used_high = high.m_used;
    return r;
}

std::vector<DiffResult> relative_correction_curve(const MaterialPair& pair, std::span<const double> gaps,
                                                  double t_low, double t_high, const SolverOptions& opts) {
    if (gaps.empty()) throw DomainError("gap grid is empty");
    std::vector<DiffResult> out;
    out.reserve(gaps.size());
    for (double a : gaps) out.push_back(temperature_difference(PlateSystem(pair.first, pair.second, a), t_low, t_high, opts));
    return out;
}

std::vector<double> GapGrid::values() const {
    if (count < 1) throw DomainError(fmt::format("gap grid needs at least one point (got {})", count));
    if (!(start > 0.0) || !(stop > 0.0))
        throw DomainError(fmt::format("gap grid bounds must be positive (got {} m, {} m)", start, stop));
    if (count == 1) return {start};

    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        out[i] = spacing == GapSpacing::linear
                     ? start + t * (stop - start)
                     : std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

void SweepSpec::validate() const {
    if (gaps.empty()) throw DomainError("sweep needs at least one gap");
    if (temperatures.empty()) throw DomainError("sweep needs at least one temperature");
    if (pairs.empty()) throw DomainError("sweep needs at least one material pair");
    for (double a : gaps)
        if (!(a > 0.0)) throw DomainError(fmt::format("gap widths must be positive (got {} m)", a));
    for (double t : temperatures)
        if (!(t > 0.0)) throw DomainError(fmt::format("temperatures must be positive (got {} K)", t));
}

SweepTable sweep(const SweepSpec& spec, const SolverOptions& opts, unsigned jobs) {
    spec.validate();

    std::vector<double> gaps = spec.gaps;
    std::vector<double> temps = spec.temperatures;
    std::sort(gaps.begin(), gaps.end());
    std::sort(temps.begin(), temps.end());

    struct Cell {
        std::size_t pair;
        double kelvin;
        double gap;
    };
    std::vector<Cell> cells;
    for (std::size_t p = 0; p < spec.pairs.size(); ++p)
        for (double t : temps)
            for (double a : gaps) cells.push_back({p, t, a});

    SweepTable table;
    table.solver = opts;
    table.rows.resize(cells.size());
    std::vector<std::exception_ptr> failures(cells.size());

    SolverOptions cell_opts = opts;
    if (jobs > 1) cell_opts.jobs = 1;

    auto run_cell = [&](std::size_t i) {
        const Cell& cell = cells[i];
        const MaterialPair& pair = spec.pairs[cell.pair];
        const std::string label = pair.label();
        try {
            const PlateSystem system(pair.first, pair.second, cell.gap);
            const PressureResult r = tagged_pressure(system, cell.kelvin, cell_opts, label);
            SweepRow& row = table.rows[i];
            row.pair = label;
            row.material_1 = pair.first.name();
            row.material_2 = pair.second.name();
            row.gap_m = cell.gap;
            row.temperature_K = cell.kelvin;
            row.pressure_Pa = std::abs(r.pressure);
            row.tm_share = r.modes.tm / r.pressure;
            row.te_share = r.modes.te / r.pressure;
            row.m_used = r.m_used;
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < jobs; ++t)
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
            });
    }

    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);
    return table;
}

namespace {

constexpr std::string_view kSweepHeader =
    "pair,material_1,material_2,gap_m,temperature_K,pressure_Pa,tm_share,te_share,m_used";

void write_metadata(std::ostream& out, const SolverOptions& opts) {
    fmt::print(out, "# solver: quadrature_tolerance={:g} truncation_relative={:g} truncation_consecutive={} "
                    "ceiling_factor={:g} cutoff_span={:g} split_offset={:g}\n",
               opts.quadrature_tolerance, opts.truncation_relative, opts.truncation_consecutive,
               opts.ceiling_factor, opts.cutoff_span, opts.split_offset);
    fmt::print(out, "# constants: hbar={:.10g} J*s c={:.10g} m/s k_B={:.10g} J/K eV={:.4g} rad/s\n", si::hbar,
               si::c, si::k_B, si::rad_per_s_per_eV);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        fields.push_back(line.substr(begin, comma - begin));
        if (comma == std::string_view::npos) break;
        begin = comma + 1;
    }
    return fields;
}

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError(line_no, fmt::format("malformed number '{}'", s));
    return value;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    write_metadata(out, table.solver);
    out << "# pressure_Pa is |F|, the magnitude of the attractive pressure; shares are TM/TE fractions of it\n";
    out << kSweepHeader << '\n';
    for (const auto& r : table.rows)
        fmt::print(out, "{},{},{},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{}\n", r.pair, r.material_1,
                   r.material_2, r.gap_m, r.temperature_K, r.pressure_Pa, r.tm_share, r.te_share, r.m_used);
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::vector<SweepRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kSweepHeader) throw ParseError(line_no, fmt::format("unexpected header '{}'", line));
            header_seen = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 9) throw ParseError(line_no, fmt::format("expected 9 fields, got {}", f.size()));
        SweepRow r;
        r.pair = std::string(f[0]);
        r.material_1 = std::string(f[1]);
        r.material_2 = std::string(f[2]);
        r.gap_m = parse_number<double>(f[3], line_no);
        r.temperature_K = parse_number<double>(f[4], line_no);
        r.pressure_Pa = parse_number<double>(f[5], line_no);
        r.tm_share = parse_number<double>(f[6], line_no);
        r.te_share = parse_number<double>(f[7], line_no);
        r.m_used = parse_number<long>(f[8], line_no);
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError(line_no, "missing sweep header");
    return rows;
}

void write_diff_csv(std::ostream& out, const MaterialPair& pair, std::span<const DiffResult> rows,
                    const SolverOptions& opts) {
    write_metadata(out, opts);
    out << "# delta_Pa = f_low_T_Pa - f_high_T_Pa; relative = delta_Pa / f_low_T_Pa (|F| at t_low_K)\n";
    out << "pair,material_1,material_2,gap_m,t_low_K,t_high_K,f_low_T_Pa,f_high_T_Pa,delta_Pa,relative\n";
    for (const auto& r : rows)
        fmt::print(out, "{},{},{},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g}\n", pair.label(),
                   pair.first.name(), pair.second.name(), r.gap, r.t_low, r.t_high, r.f_low_T, r.f_high_T,
                   r.delta, r.relative);
}

namespace {

Material grouping_preset(const std::string& name) {
    try {
        return material_preset(name);
    } catch (const LookupError&) {
        throw UnsupportedError(fmt::format("group ordering supports preset materials only (got '{}')", name));
    }
}

}  // namespace

std::vector<PairGroup> group_ordering(double gap, double kelvin,
                                      std::span<const std::pair<std::string, std::string>> pairs,
                                      const SolverOptions& opts) {
    std::vector<std::pair<std::string, std::string>> requested(pairs.begin(), pairs.end());
    if (requested.empty())
        requested = {{"Al", "Al"}, {"Al", "Au"}, {"Al", "Cu"}, {"Au", "Au"}, {"Au", "Cu"}, {"Cu", "Cu"}};

    std::vector<PairGroup> groups{{"I", {}, 0.0}, {"II", {}, 0.0}, {"III", {}, 0.0}};
    for (const auto& [n1, n3] : requested) {
        Material m1 = grouping_preset(n1);
        Material m3 = grouping_preset(n3);
        if (m3.name() < m1.name()) std::swap(m1, m3);
        const int aluminium = (m1.name() == "Al") + (m3.name() == "Al");

        const PlateSystem system(m1, m3, gap);
        const std::string label = m1.name() + "-" + m3.name();
        const double magnitude = std::abs(tagged_pressure(system, kelvin, opts, label).pressure);
        groups[2 - aluminium].members.push_back({label, magnitude});
    }

    std::erase_if(groups, [](const PairGroup& g) { return g.members.empty(); });
    for (auto& g : groups) {
        double total = 0.0;
        for (const auto& m : g.members) total += m.magnitude;
        g.mean = total / static_cast<double>(g.members.size());
    }
    return groups;
}

}  // namespace casimir
