#pragma once

// Permittivity models on the imaginary frequency axis, eps(i*zeta).
// All frequencies are angular, in rad/s.

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace casimir {

/// Drude metal: eps = 1 + wp^2 / (zeta (zeta + nu)).
class DrudeParams {
public:
    /// Throws DomainError unless both frequencies are positive and finite.
    DrudeParams(double omega_p, double nu);

    double omega_p() const noexcept { return omega_p_; }
    double nu() const noexcept { return nu_; }

private:
    double omega_p_;
    double nu_;
};

/// Dissipationless plasma: eps = 1 + wp^2 / zeta^2.
class PlasmaParams {
public:
    explicit PlasmaParams(double omega_p);
    double omega_p() const noexcept { return omega_p_; }

private:
    double omega_p_;
};

double drude_eps(double zeta, const DrudeParams& params);
double plasma_eps(double zeta, const PlasmaParams& params);

struct PermittivitySample {
    double zeta;
    double eps;
};

/// Tabulated eps(i zeta): strictly increasing zeta, eps > 1, at least two knots.
class PermittivityTable {
public:
    /// Validates the invariants; ValidationError carries the 1-based offending row.
    explicit PermittivityTable(std::vector<PermittivitySample> points);

    std::span<const PermittivitySample> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    double zeta_min() const noexcept { return points_.front().zeta; }
    double zeta_max() const noexcept { return points_.back().zeta; }
    bool contains(double zeta) const noexcept { return zeta >= zeta_min() && zeta <= zeta_max(); }

private:
    std::vector<PermittivitySample> points_;
};

/// Linear interpolation in (ln zeta, ln(eps - 1)); exact at knots.
/// Throws RangeError naming the violated bound when zeta lies outside the table.
double tabulated_eps(const PermittivityTable& table, double zeta);

/// Reads `zeta_rad_per_s,eps` CSV. `#` lines and blank lines are skipped, CRLF accepted.
PermittivityTable load_permittivity_table(std::istream& source);
PermittivityTable load_permittivity_table_file(const std::string& path);

using AnalyticModel = std::variant<DrudeParams, PlasmaParams>;

struct TabulatedModel {
    std::shared_ptr<const PermittivityTable> table;
    std::optional<AnalyticModel> fallback;
};

using DispersionModel = std::variant<DrudeParams, PlasmaParams, TabulatedModel>;

/// A named half-space material. Immutable; cheap to copy.
class Material {
public:
    static Material drude(std::string name, DrudeParams params);
    static Material plasma(std::string name, PlasmaParams params);
    /// Tabulated data with an optional analytic model used outside the table.
    /// Knot eps values must be non-increasing in zeta (ValidationError otherwise).
    static Material tabulated(std::string name, PermittivityTable table,
                              std::optional<AnalyticModel> fallback = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    const DispersionModel& model() const noexcept { return model_; }

    /// eps(i zeta) for zeta > 0.
    double eps(double zeta) const;

    /// True when eps diverges as zeta -> 0 (Drude, plasma, or a table with such a fallback).
    bool metallic() const noexcept;

    /// Model governing the zeta -> 0 limit, if analytic.
    std::optional<AnalyticModel> low_frequency_model() const;

    /// Lowest frequency at which eps is known from data; nullopt for analytic models.
    std::optional<double> zeta_floor() const;

private:
    Material(std::string name, DispersionModel model);

    std::string name_;
    DispersionModel model_;
};

/// Case-insensitive lookup of the Au, Cu and Al Drude presets.
Material material_preset(std::string_view name);

/// Canonical preset names, in display order.
std::span<const std::string_view> preset_names();

}  // namespace casimir
