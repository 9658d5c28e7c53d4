#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/special.hpp"
#include "casimir/units.hpp"

namespace casimir {

double magnitude(const ModeSplit& v) { return std::abs(v.tm) + std::abs(v.te); }

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        compensation_ += (sum_ - t) + x;
    else
        compensation_ += (x - t) + sum_;
    sum_ = t;
}

ThermalState::ThermalState(double kelvin) : kelvin_(kelvin) {
    if (!(kelvin > 0.0) || !std::isfinite(kelvin))
        throw DomainError(fmt::format("temperature must be positive (got {} K)", kelvin));
}

double ThermalState::beta() const noexcept { return 1.0 / (si::k_B * kelvin_); }

double ThermalState::matsubara_frequency(long m) const noexcept {
    return 2.0 * si::pi * static_cast<double>(m) * si::k_B * kelvin_ / si::hbar;
}

double ThermalState::gamma(double gap) const noexcept {
    return 2.0 * si::pi * gap * si::k_B * kelvin_ / si::hbar_c;
}

double ThermalState::prefactor(double gap) const noexcept {
    return si::k_B * kelvin_ / (si::pi * gap * gap * gap);
}

PlateSystem::PlateSystem(Material mat1, Material mat3, double gap)
    : mat1_(std::move(mat1)), mat3_(std::move(mat3)), gap_(gap) {
    if (!(gap > 0.0) || !std::isfinite(gap))
        throw DomainError(fmt::format("gap width must be positive (got {} m)", gap));
}

namespace {

struct Interface {
    double tm;
    double te;
};

// s - p and eps p - s are rewritten as ratios so that p >> sqrt(eps) keeps
// full precision.
Interface interface_coefficients(double eps, double p) {
    const double em1 = eps - 1.0;
    const double s = std::sqrt(em1 + p * p);
    const double te_den = s + p;
    const double tm_den = eps * p + s;
    const double te = em1 / (te_den * te_den);
    const double tm = em1 * ((eps + 1.0) * p * p - 1.0) / (tm_den * tm_den);
    return {tm, te};
}

}  // namespace

ReflectionProduct reflection_product(double eps1, double eps3, double p) {
    if (!(p >= 1.0))
        throw DomainError(fmt::format("p must be >= 1 (got {})", p));
    if (!(eps1 >= 1.0) || !(eps3 >= 1.0))
        throw DomainError(fmt::format("permittivities must be >= 1 (got {}, {})", eps1, eps3));
    const Interface r1 = interface_coefficients(eps1, p);
    const Interface r3 = eps3 == eps1 ? r1 : interface_coefficients(eps3, p);
    return {r1.tm * r3.tm, r1.te * r3.te};
}

ModeSplit integrand_modes(double y, const ReflectionProduct& rp) {
    const double decay = std::exp(-2.0 * y);
    const double tm = rp.tm * decay;
    const double te = rp.te * decay;
    if (tm >= 1.0 || te >= 1.0)
        throw SingularityError(fmt::format("integrand singular at y = {} (tm = {}, te = {})", y, rp.tm, rp.te));
    const double y2 = y * y;
    return {y2 * tm / (1.0 - tm), y2 * te / (1.0 - te)};
}

double integrand(double y, const ReflectionProduct& rp) { return integrand_modes(y, rp).total(); }

MatsubaraTerm matsubara_integral(long m, double gamma, double eps1, double eps3, const SolverOptions& opts) {
    if (m < 1) throw DomainError(fmt::format("Matsubara index must be >= 1 (got {})", m));
    if (!(gamma > 0.0)) throw DomainError(fmt::format("gamma must be positive (got {})", gamma));

    MatsubaraTerm term;
    term.m = m;
    term.y_lower = static_cast<double>(m) * gamma;
    term.y_max = term.y_lower + opts.cutoff_span;

    const double lower = term.y_lower;
    auto f = [lower, eps1, eps3](double y) {
        return integrand_modes(y, reflection_product(eps1, eps3, y / lower));
    };

    std::vector<double> breakpoints{lower};
    if (opts.split_offset > 0.0 && opts.split_offset < opts.cutoff_span) breakpoints.push_back(lower + opts.split_offset);
    breakpoints.push_back(term.y_max);
    const auto quad = integrate_adaptive<ModeSplit>(f, std::span<const double>(breakpoints),
                                                    {opts.quadrature_tolerance, 1e-300});
    if (!quad.converged)
        throw Error(fmt::format("quadrature did not reach tolerance {} for m = {} (error estimate {})",
                                opts.quadrature_tolerance, m, quad.error));
    term.integral = quad.value;
    term.quadrature_error = quad.error;
    term.intervals = quad.intervals;
    return term;
}

MatsubaraTerm matsubara_term(long m, const PlateSystem& system, const ThermalState& thermal,
                             const SolverOptions& opts) {
    const double zeta = thermal.matsubara_frequency(m);
    double eps1 = 0.0;
    double eps3 = 0.0;
    try {
        eps1 = system.mat1().eps(zeta);
        eps3 = system.mat3().eps(zeta);
    } catch (const Error& e) {
        throw EvaluationError(m, zeta, fmt::format("permittivity evaluation failed at m = {}, zeta = {:g} rad/s: {}",
                                                   m, zeta, e.what()));
    }
    MatsubaraTerm term = matsubara_integral(m, thermal.gamma(system.gap()), eps1, eps3, opts);
    term.zeta = zeta;
    return term;
}

double zero_frequency_tm(double delta) { return -polylog3(delta) / 8.0; }

namespace {

double static_reflection(const Material& mat) {
    if (mat.metallic()) return 1.0;
    const double eps = mat.eps(*mat.zeta_floor());
    return (eps - 1.0) / (eps + 1.0);
}

// TE at zeta -> 0 survives only when both sides stay dissipationless; the
// interface coefficient becomes (sqrt(y^2 + k^2) - y)/(sqrt(y^2 + k^2) + y)
// with k = omega_p a / c.
double plasma_zero_frequency_te(double kappa1, double kappa3) {
    auto coefficient = [](double y, double kappa) {
        const double den = std::hypot(y, kappa) + y;
        return kappa * kappa / (den * den);
    };
    auto f = [&](double y) {
        const double r = coefficient(y, kappa1) * coefficient(y, kappa3) * std::exp(-2.0 * y);
        return y * y * r / (1.0 - r);
    };
    const std::array<double, 3> bp{0.0, 10.0, 50.0};
    const auto quad = integrate_adaptive<double>(f, std::span<const double>(bp), {1e-12, 1e-300});
    return -0.5 * quad.value;
}

}  // namespace

ModeSplit zero_frequency_term(const PlateSystem& system) {
    const Material& m1 = system.mat1();
    const Material& m3 = system.mat3();
    ModeSplit result;
    result.tm = zero_frequency_tm(static_reflection(m1) * static_reflection(m3));

    const auto low1 = m1.low_frequency_model();
    const auto low3 = m3.low_frequency_model();
    if (low1 && low3 && std::holds_alternative<PlasmaParams>(*low1) &&
        std::holds_alternative<PlasmaParams>(*low3)) {
        const double k1 = std::get<PlasmaParams>(*low1).omega_p() * system.gap() / si::c;
        const double k3 = std::get<PlasmaParams>(*low3).omega_p() * system.gap() / si::c;
        result.te = plasma_zero_frequency_te(k1, k3);
    }
    return result;
}

long matsubara_ceiling(double gap, const ThermalState& thermal, const SolverOptions& opts) {
    const double ceiling = std::ceil(opts.ceiling_factor * si::hbar_c / (2.0 * gap * si::k_B * thermal.temperature()));
    return std::max<long>(static_cast<long>(ceiling), opts.truncation_consecutive);
}

PressureResult casimir_pressure(const PlateSystem& system, const ThermalState& thermal,
                                const SolverOptions& opts) {
    PressureResult result;
    result.prefactor = thermal.prefactor(system.gap());
    result.zero_frequency = zero_frequency_term(system);
    result.m_ceiling = matsubara_ceiling(system.gap(), thermal, opts);

    CompensatedSum sum_tm;
    CompensatedSum sum_te;
    CompensatedSum sum_all;
    sum_tm.add(-result.zero_frequency.tm);
    sum_te.add(-result.zero_frequency.te);
    sum_all.add(-result.zero_frequency.total());

    const unsigned jobs = std::max(1u, opts.jobs);
    const long block = jobs == 1 ? 1 : static_cast<long>(jobs) * 4;

    int quiet = 0;
    double last_relative = 1.0;
    long m = 1;
    while (m <= result.m_ceiling) {
        const long count = std::min(block, result.m_ceiling - m + 1);
        std::vector<MatsubaraTerm> batch(static_cast<std::size_t>(count));
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));

        auto work = [&](long first, long stride) {
            for (long i = first; i < count; i += stride) {
                try {
                    batch[i] = matsubara_term(m + i, system, thermal, opts);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        };
        if (jobs == 1) {
            work(0, 1);
        } else {
            std::vector<std::jthread> workers;
            for (unsigned t = 0; t < jobs; ++t) workers.emplace_back(work, static_cast<long>(t), static_cast<long>(jobs));
        }

        // Reduce in ascending m regardless of which worker finished first.
        for (long i = 0; i < count; ++i) {
            if (failures[i]) std::rethrow_exception(failures[i]);
            const MatsubaraTerm& term = batch[i];
            sum_tm.add(term.integral.tm);
            sum_te.add(term.integral.te);
            sum_all.add(term.integral.total());
            result.terms.push_back(term);

            last_relative = term.integral.total() / sum_all.value();
            quiet = last_relative < opts.truncation_relative ? quiet + 1 : 0;
            if (quiet >= opts.truncation_consecutive) {
                result.m_used = term.m;
                result.modes = ModeSplit{sum_tm.value(), sum_te.value()} * (-result.prefactor);
                result.pressure = -result.prefactor * sum_all.value();
                return result;
            }
        }
        m += count;
    }
    throw ConvergenceError(result.m_ceiling, last_relative,
                           fmt::format("Matsubara sum not converged at ceiling m_max = {} "
                                       "(last relative contribution {:.3g})",
                                       result.m_ceiling, last_relative));
}

double ideal_metal_pressure_T0(double gap) {
    if (!(gap > 0.0)) throw DomainError(fmt::format("gap width must be positive (got {} m)", gap));
    const double a2 = gap * gap;
    return -si::pi * si::pi * si::hbar_c / (240.0 * a2 * a2);
}

}  // namespace casimir
