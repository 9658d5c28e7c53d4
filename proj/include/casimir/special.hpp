#pragma once

namespace casimir {

/// Apery's constant, zeta(3).
inline constexpr double zeta3 = 1.2020569031595942853997381615114;

/// Trilogarithm Li_3(z) = sum_{n>=1} z^n / n^3 on 0 <= z <= 1, absolute error below 1e-15.
/// Throws DomainError outside [0, 1].
double polylog3(double z);

}  // namespace casimir
