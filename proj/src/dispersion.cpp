#include "casimir/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"

namespace casimir {

namespace {

void require_positive_frequency(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(fmt::format("{} must be positive and finite (got {})", what, value));
}

void require_zeta(double zeta) {
    if (!(zeta > 0.0))
        throw DomainError(fmt::format("zeta must be positive (got {})", zeta));
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double analytic_eps(const AnalyticModel& model, double zeta) {
    return std::visit(overloaded{[zeta](const DrudeParams& p) { return drude_eps(zeta, p); },
                                 [zeta](const PlasmaParams& p) { return plasma_eps(zeta, p); }},
                      model);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

}  // namespace

DrudeParams::DrudeParams(double omega_p, double nu) : omega_p_(omega_p), nu_(nu) {
    require_positive_frequency(omega_p, "Drude plasma frequency");
    require_positive_frequency(nu, "Drude relaxation frequency");
}

PlasmaParams::PlasmaParams(double omega_p) : omega_p_(omega_p) {
    require_positive_frequency(omega_p, "plasma frequency");
}

double drude_eps(double zeta, const DrudeParams& params) {
    require_zeta(zeta);
    const double wp = params.omega_p();
    return 1.0 + wp * wp / (zeta * (zeta + params.nu()));
}

double plasma_eps(double zeta, const PlasmaParams& params) {
    require_zeta(zeta);
    const double ratio = params.omega_p() / zeta;
    return 1.0 + ratio * ratio;
}

PermittivityTable::PermittivityTable(std::vector<PermittivitySample> points)
    : points_(std::move(points)) {
    if (points_.size() < 2)
        throw ValidationError(points_.size(), "a permittivity table needs at least 2 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.zeta > 0.0) || !std::isfinite(p.zeta))
            throw ValidationError(i + 1, fmt::format("zeta must be positive (got {})", p.zeta));
        if (!(p.eps > 1.0) || !std::isfinite(p.eps))
            throw ValidationError(i + 1, fmt::format("eps must exceed 1 (got {})", p.eps));
        if (i > 0 && !(p.zeta > points_[i - 1].zeta))
            throw ValidationError(i + 1, fmt::format("zeta not strictly increasing ({} after {})",
                                                     p.zeta, points_[i - 1].zeta));
    }
}

double tabulated_eps(const PermittivityTable& table, double zeta) {
    require_zeta(zeta);
    if (zeta < table.zeta_min())
        throw RangeError(fmt::format("zeta = {:g} rad/s is below the table minimum zeta_min = {:g}",
                                     zeta, table.zeta_min()));
    if (zeta > table.zeta_max())
        throw RangeError(fmt::format("zeta = {:g} rad/s is above the table maximum zeta_max = {:g}",
                                     zeta, table.zeta_max()));

    const auto pts = table.points();
    auto hi = std::lower_bound(pts.begin(), pts.end(), zeta,
                               [](const PermittivitySample& s, double z) { return s.zeta < z; });
    if (hi->zeta == zeta) return hi->eps;
    auto lo = hi - 1;

    const double t = (std::log(zeta) - std::log(lo->zeta)) / (std::log(hi->zeta) - std::log(lo->zeta));
    const double l0 = std::log(lo->eps - 1.0);
    const double l1 = std::log(hi->eps - 1.0);
    return 1.0 + std::exp(l0 + t * (l1 - l0));
}

PermittivityTable load_permittivity_table(std::istream& source) {
    std::vector<PermittivitySample> points;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(source, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        if (!header_seen) {
            if (line != "zeta_rad_per_s,eps")
                throw ParseError(line_no, fmt::format("expected header 'zeta_rad_per_s,eps', got '{}'", line));
            header_seen = true;
            continue;
        }

        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw ParseError(line_no, "expected exactly two comma-separated fields");
        const auto zeta = parse_double(line.substr(0, comma));
        const auto eps = parse_double(line.substr(comma + 1));
        if (!zeta || !eps) throw ParseError(line_no, fmt::format("malformed number in '{}'", line));
        points.push_back({*zeta, *eps});
    }
    if (!header_seen) throw ParseError(line_no, "missing header 'zeta_rad_per_s,eps'");
    return PermittivityTable(std::move(points));
}

PermittivityTable load_permittivity_table_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LookupError(fmt::format("cannot open permittivity table '{}'", path));
    return load_permittivity_table(in);
}

Material::Material(std::string name, DispersionModel model)
    : name_(std::move(name)), model_(std::move(model)) {}

Material Material::drude(std::string name, DrudeParams params) {
    return Material(std::move(name), params);
}

Material Material::plasma(std::string name, PlasmaParams params) {
    return Material(std::move(name), params);
}

Material Material::tabulated(std::string name, PermittivityTable table,
                             std::optional<AnalyticModel> fallback) {
    const auto pts = table.points();
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].eps > pts[i - 1].eps)
            throw ValidationError(i + 1, fmt::format("eps increases with zeta ({} after {})",
                                                     pts[i].eps, pts[i - 1].eps));
    }
    return Material(std::move(name),
                    TabulatedModel{std::make_shared<const PermittivityTable>(std::move(table)),
                                   std::move(fallback)});
}

double Material::eps(double zeta) const {
    return std::visit(
        overloaded{[zeta](const DrudeParams& p) { return drude_eps(zeta, p); },
                   [zeta](const PlasmaParams& p) { return plasma_eps(zeta, p); },
                   [zeta](const TabulatedModel& t) {
                       if (t.fallback && !t.table->contains(zeta) && zeta > 0.0)
                           return analytic_eps(*t.fallback, zeta);
                       return tabulated_eps(*t.table, zeta);
                   }},
        model_);
}

bool Material::metallic() const noexcept { return low_frequency_model().has_value(); }

std::optional<AnalyticModel> Material::low_frequency_model() const {
    return std::visit(overloaded{[](const DrudeParams& p) -> std::optional<AnalyticModel> { return p; },
                                 [](const PlasmaParams& p) -> std::optional<AnalyticModel> { return p; },
                                 [](const TabulatedModel& t) { return t.fallback; }},
                      model_);
}

std::optional<double> Material::zeta_floor() const {
    if (const auto* t = std::get_if<TabulatedModel>(&model_)) return t->table->zeta_min();
    return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, 3> kPresetNames{"Au", "Cu", "Al"};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::span<const std::string_view> preset_names() { return kPresetNames; }

Material material_preset(std::string_view name) {
    using si::eV;
    using si::meV;
    if (iequals(name, "Au")) return Material::drude("Au", DrudeParams(eV(9.0), meV(35.0)));
    if (iequals(name, "Cu")) return Material::drude("Cu", DrudeParams(eV(9.05), meV(30.0)));
    if (iequals(name, "Al")) return Material::drude("Al", DrudeParams(eV(11.5), meV(50.0)));
    throw LookupError(fmt::format("unknown material preset '{}'; available presets: Au, Cu, Al", name));
}

}  // namespace casimir
