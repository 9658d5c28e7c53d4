#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for scalar or small
// vector-valued integrands. The interval with the largest error estimate is
// bisected until the summed estimate meets the tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace casimir {

inline double magnitude(double v) { return std::abs(v); }

template <class V>
concept Integrable = std::regular<V> && requires(V a, V b, double s) {
    { a + b } -> std::convertible_to<V>;
    { a - b } -> std::convertible_to<V>;
    { a * s } -> std::convertible_to<V>;
    { magnitude(a) } -> std::convertible_to<double>;
};

struct QuadratureTolerance {
    double relative = 1e-10;
    double absolute = 1e-300;
};

template <Integrable V>
struct QuadratureResult {
    V value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

// Kronrod abscissae; odd indices are the embedded 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <Integrable V>
struct Segment {
    double a;
    double b;
    V value;
    double error;
    std::size_t order;  // creation order, breaks ties deterministically
};

template <Integrable V, class F>
Segment<V> gauss_kronrod15(F& f, double a, double b, std::size_t order) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const V fc = f(center);
    V kronrod = fc * kWgk[7];
    V gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const V pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * kWgk[j];
        if (j % 2 == 1) gauss = gauss + pair * kWg[j / 2];
    }
    const V value = kronrod * half;
    const double error = magnitude((kronrod - gauss) * half);
    return {a, b, value, error, order};
}

}  // namespace detail

/// Integrates f over the consecutive intervals defined by `breakpoints`
/// (at least two, increasing). Returns the best estimate even when the
/// interval budget runs out; check `converged`.
template <Integrable V, class F>
QuadratureResult<V> integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                       QuadratureTolerance tol = {}, int max_intervals = 4000) {
    using Seg = detail::Segment<V>;
    auto less_urgent = [](const Seg& x, const Seg& y) {
        return x.error < y.error || (x.error == y.error && x.order > y.order);
    };

    std::vector<Seg> segs;
    std::size_t order = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        segs.push_back(detail::gauss_kronrod15<V>(f, breakpoints[i], breakpoints[i + 1], order++));
    std::make_heap(segs.begin(), segs.end(), less_urgent);

    V value{};
    double error = 0.0;
    for (const auto& s : segs) {
        value = value + s.value;
        error += s.error;
    }

    QuadratureResult<V> result;
    while (true) {
        if (error <= std::max(tol.absolute, tol.relative * magnitude(value))) {
            result.converged = true;
            break;
        }
        if (static_cast<int>(segs.size()) >= max_intervals) break;

        std::pop_heap(segs.begin(), segs.end(), less_urgent);
        const Seg worst = segs.back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            std::push_heap(segs.begin(), segs.end(), less_urgent);
            break;
        }
        const Seg left = detail::gauss_kronrod15<V>(f, worst.a, mid, order++);
        const Seg right = detail::gauss_kronrod15<V>(f, mid, worst.b, order++);
        segs.back() = left;
        std::push_heap(segs.begin(), segs.end(), less_urgent);
        segs.push_back(right);
        std::push_heap(segs.begin(), segs.end(), less_urgent);

        // Running totals steer refinement only; the returned sum is recomputed below.
        value = value - worst.value + left.value + right.value;
        error += left.error + right.error - worst.error;
    }

    // Sum left to right so the result does not depend on heap layout.
    std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    result.value = V{};
    result.error = 0.0;
    for (const auto& s : segs) {
        result.value = result.value + s.value;
        result.error += s.error;
    }
    result.intervals = static_cast<int>(segs.size());
    return result;
}

/// Convenience overload for a single interval [a, b].
template <Integrable V, class F>
QuadratureResult<V> integrate_adaptive(F&& f, double a, double b, QuadratureTolerance tol = {},
                                       int max_intervals = 4000) {
    const std::array<double, 2> bp{a, b};
    return integrate_adaptive<V>(std::forward<F>(f), std::span<const double>(bp), tol, max_intervals);
}

}  // namespace casimir
