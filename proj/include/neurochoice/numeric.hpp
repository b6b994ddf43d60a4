#ifndef NEUROCHOICE_NUMERIC_HPP
#define NEUROCHOICE_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace neurochoice
{

/// The rectifier [x]_+.
template <typename T>
constexpr T rectify(T x)
{
    return x > T(0) ? x : T(0);
}

/// ln(1 - e^{-x}) for x > 0, accurate at both ends of the range.
inline double log1mexp(double x)
{
    // Switch point from Maechler, "Accurately computing log(1 - exp(-|a|))".
    constexpr double ln2 = 0.693147180559945309417;
    return x <= ln2 ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x));
}

/// ln(1 + e^{x}) without overflow.
inline double log1pexp(double x)
{
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Maximum absolute element.
inline double max_abs(std::span<const double> values)
{
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::abs(v));
    return m;
}

/// Index of the largest element; the first one on ties.
inline std::size_t argmax(std::span<const double> values)
{
    return static_cast<std::size_t>(std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

/// Bisection on a sign change of an increasing function. Runs until the bracket
/// can no longer be split in double precision or `abs_tol` is reached.
template <typename F>
double bisect_increasing(F&& f, double lo, double hi, double abs_tol = 0.0, int max_iter = 2000)
{
    for (int it = 0; it < max_iter; ++it)
    {
        double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi || hi - lo <= abs_tol)
            break;
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return lo + 0.5 * (hi - lo);
}

} // namespace neurochoice

#endif // NEUROCHOICE_NUMERIC_HPP
