#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gperm {

/// ln(1 - e^{-t}) for t > 0, without cancellation near either end.
inline double log1mexp(double t) {
    if (t <= 0.0) return -std::numeric_limits<double>::infinity();
    // Split at ln 2 (Maechler's rule): below it expm1 is exact, above it exp is tiny.
    return t > 0.6931471805599453 ? std::log1p(-std::exp(-t)) : std::log(-std::expm1(-t));
}

namespace quad {

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; rule is symmetric).
inline constexpr std::array<double, 8> kGL16Nodes = {
    0.0950125098376374401853, 0.2816035507792589132305,
    0.4580167776572273863424, 0.6178762444026437484467,
    0.7554044083550030338951, 0.8656312023878317438805,
    0.9445750230732325760780, 0.9894009349916499325962,
};
inline constexpr std::array<double, 8> kGL16Weights = {
    0.1894506104550684962854, 0.1826034150449235888667,
    0.1691565193950025381893, 0.1495959888165767320815,
    0.1246289712555338720525, 0.0951585116824927848099,
    0.0622535239386478928628, 0.0271524594117540948518,
};

template <class F>
double gl16(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < kGL16Nodes.size(); ++i) {
        const double d = h * kGL16Nodes[i];
        sum += kGL16Weights[i] * (f(c - d) + f(c + d));
    }
    return h * sum;
}

namespace detail {
template <class F>
double integrate_rec(F& f, double a, double b, double whole, double rel_tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gl16(f, a, mid);
    const double right = gl16(f, mid, b);
    const double refined = left + right;
    if (depth <= 0 || std::abs(refined - whole) <= rel_tol * (std::abs(refined) + 1e-300)) {
        return refined;
    }
    return integrate_rec(f, a, mid, left, rel_tol, depth - 1) +
           integrate_rec(f, mid, b, right, rel_tol, depth - 1);
}
}  // namespace detail

/// Panel integration with one-level Richardson acceptance; bisects until the
/// halved estimate agrees with the whole-panel estimate to rel_tol.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10, int max_depth = 24) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    if (a == b) return 0.0;
    return detail::integrate_rec(f, a, b, gl16(f, a, b), rel_tol, max_depth);
}

}  // namespace quad
}  // namespace gperm
