#pragma once

// Independent reference computations for the unit tests. Nothing here calls the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Composite Simpson on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000)
{
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// 4 pi \int_0^R phi(r) r^2 dr for a radial profile.
inline double radial(const std::function<double(double)>& phi, double R = 40.0)
{
    return 4.0 * std::numbers::pi * simpson([&](double r) { return phi(r) * r * r; }, 0.0, R);
}

inline double fd_profile(double a, double b, double eps, double r)
{
    const double e = a * std::exp(-b * r * r);
    return e / (1.0 + eps * e);
}

} // namespace oracle
