#pragma once

// Lifshitz pressure between two half-spaces across a vacuum gap at finite
// temperature, summed over Matsubara frequencies.
//
// Dimensionless variables per Matsubara index m >= 1:
//   y = q a  with q^2 = k_perp^2 + zeta_m^2 / c^2,  y in [m gamma, inf)
//   p = y / (m gamma) >= 1
//   s_i = sqrt(eps_i - 1 + p^2)
//   gamma = 2 pi a k_B T / (hbar c)
// The pressure is  F = -(k_B T / (pi a^3)) [ |I0| + sum_{m>=1} integral_m ],
// where I0 already carries the half weight of the m = 0 term.

#include <vector>

#include "casimir/dispersion.hpp"

namespace casimir {

/// A (TM, TE) pair. Used both for integrals and for their pressure contributions.
struct ModeSplit {
    double tm = 0.0;
    double te = 0.0;

    double total() const noexcept { return tm + te; }

    friend ModeSplit operator+(ModeSplit a, ModeSplit b) noexcept { return {a.tm + b.tm, a.te + b.te}; }
    friend ModeSplit operator-(ModeSplit a, ModeSplit b) noexcept { return {a.tm - b.tm, a.te - b.te}; }
    friend ModeSplit operator*(ModeSplit a, double s) noexcept { return {a.tm * s, a.te * s}; }
    friend bool operator==(const ModeSplit&, const ModeSplit&) = default;
};

double magnitude(const ModeSplit& v);

class ThermalState {
public:
    /// Throws DomainError unless kelvin > 0.
    explicit ThermalState(double kelvin);

    double temperature() const noexcept { return kelvin_; }
    /// 1 / (k_B T), in 1/J.
    double beta() const noexcept;
    /// zeta_m = 2 pi m k_B T / hbar, rad/s.
    double matsubara_frequency(long m) const noexcept;
    /// gamma = 2 pi a k_B T / (hbar c); about 2744 a T for a in m, T in K.
    double gamma(double gap) const noexcept;
    /// k_B T / (pi a^3), Pa.
    double prefactor(double gap) const noexcept;

private:
    double kelvin_;
};

/// Two half-spaces (z < 0 and z > a) with vacuum in between.
class PlateSystem {
public:
    /// Throws DomainError unless gap > 0.
    PlateSystem(Material mat1, Material mat3, double gap);

    const Material& mat1() const noexcept { return mat1_; }
    const Material& mat3() const noexcept { return mat3_; }
    double gap() const noexcept { return gap_; }

private:
    Material mat1_;
    Material mat3_;
    double gap_;
};

/// Products of the two interfaces' reflection coefficients.
struct ReflectionProduct {
    double tm = 0.0;
    double te = 0.0;
};

/// Requires eps1, eps3 >= 1 and p >= 1 (DomainError otherwise).
ReflectionProduct reflection_product(double eps1, double eps3, double p);

/// y^2 [tm e^{-2y}/(1 - tm e^{-2y}) + te e^{-2y}/(1 - te e^{-2y})], split by mode.
ModeSplit integrand_modes(double y, const ReflectionProduct& rp);
double integrand(double y, const ReflectionProduct& rp);

struct SolverOptions {
    double quadrature_tolerance = 1e-10;
    /// Stop once `truncation_consecutive` successive terms each fall below
    /// truncation_relative times the running sum.
    double truncation_relative = 1e-9;
    int truncation_consecutive = 3;
    /// Hard ceiling m_max = ceil(ceiling_factor * hbar c / (2 a k_B T)).
    double ceiling_factor = 10.0;
    /// Integration runs over [m gamma, m gamma + cutoff_span], split at m gamma + split_offset.
    double cutoff_span = 50.0;
    double split_offset = 10.0;
    /// Worker threads for independent Matsubara terms; 1 runs inline.
    unsigned jobs = 1;
};

struct MatsubaraTerm {
    long m = 0;
    double zeta = 0.0;       // rad/s
    ModeSplit integral;      // dimensionless
    double y_lower = 0.0;
    double y_max = 0.0;
    double quadrature_error = 0.0;
    int intervals = 0;
};

/// Integral for index m >= 1 with eps values already evaluated at zeta_m.
MatsubaraTerm matsubara_integral(long m, double gamma, double eps1, double eps3,
                                 const SolverOptions& opts = {});

/// Integral for index m >= 1; material failures surface as EvaluationError.
MatsubaraTerm matsubara_term(long m, const PlateSystem& system, const ThermalState& thermal,
                             const SolverOptions& opts = {});

/// Half-weighted m = 0 term, -1/8 Li3(Delta) for TM. Negative by convention.
ModeSplit zero_frequency_term(const PlateSystem& system);

/// -1/8 Li3(delta) for 0 <= delta <= 1.
double zero_frequency_tm(double delta);

struct PressureResult {
    double pressure = 0.0;  // Pa, negative = attractive
    ModeSplit modes;        // Pa, TM/TE parts of `pressure`
    double prefactor = 0.0; // k_B T / (pi a^3), Pa
    ModeSplit zero_frequency;   // I0 convention, dimensionless
    std::vector<MatsubaraTerm> terms;
    long m_used = 0;        // highest Matsubara index summed
    long m_ceiling = 0;

    /// Signed pressure contribution of one term, Pa.
    ModeSplit contribution(const MatsubaraTerm& term) const noexcept {
        return term.integral * (-prefactor);
    }
};

/// Matsubara ceiling for the given geometry and temperature.
long matsubara_ceiling(double gap, const ThermalState& thermal, const SolverOptions& opts = {});

PressureResult casimir_pressure(const PlateSystem& system, const ThermalState& thermal,
                                const SolverOptions& opts = {});

/// -pi^2 hbar c / (240 a^4): perfect conductors at zero temperature.
double ideal_metal_pressure_T0(double gap);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace casimir
