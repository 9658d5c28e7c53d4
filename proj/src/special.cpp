#include "casimir/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

double series(double z) {
    double sum = 0.0;
    double power = z;
    for (int n = 1; n < 200; ++n) {
        const double term = power / (double(n) * n * n);
        sum += term;
        if (term < 1e-18) break;
        power *= z;
    }
    return sum;
}

// Li3(e^mu) = zeta(3) + zeta(2) mu + mu^2/2 (3/2 - ln(-mu)) + sum_{k>=3} zeta(3-k) mu^k / k!
// for mu = ln z in [-ln 2, 0). Only odd negative arguments of zeta survive past zeta(0).
double log_expansion(double z) {
    const double mu = std::log(z);
    constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;

    // {k, zeta(3 - k)}
    constexpr std::array<std::pair<int, double>, 10> coeffs{{
        {3, -0.5},
        {4, -1.0 / 12.0},
        {6, 1.0 / 120.0},
        {8, -1.0 / 252.0},
        {10, 1.0 / 240.0},
        {12, -1.0 / 132.0},
        {14, 691.0 / 32760.0},
        {16, -1.0 / 12.0},
        {18, 3617.0 / 8160.0},
        {20, -43867.0 / 14364.0},
    }};

    double sum = zeta3 + zeta2 * mu + 0.5 * mu * mu * (1.5 - std::log(-mu));
    double power = mu * mu;  // mu^k
    double factorial = 2.0;  // k!
    int k = 2;
    for (const auto& [order, zeta_value] : coeffs) {
        while (k < order) {
            ++k;
            power *= mu;
            factorial *= k;
        }
        sum += zeta_value * power / factorial;
    }
    return sum;
}

}  // namespace

double polylog3(double z) {
    if (!(z >= 0.0 && z <= 1.0))
        throw DomainError(fmt::format("polylog3 requires 0 <= z <= 1 (got {})", z));
    if (z == 1.0) return zeta3;
    if (z <= 0.5) return series(z);
    return log_expansion(z);
}

}  // namespace casimir
