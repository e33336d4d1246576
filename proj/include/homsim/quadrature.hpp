#pragma once

#include <cmath>
#include <complex>
#include <utility>

namespace homsim {

namespace detail {

// Recursive adaptive Simpson step with Richardson extrapolation. Works for
// double and std::complex<double> through std::abs on the error estimate.
template <typename T, typename F>
T simpson_adapt(F& f, double a, T fa, double b, T fb, double m, T fm, T whole,
                double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const T left = T((m - a) / 6.0) * (fa + T(4.0) * flm + fm);
    const T right = T((b - m) / 6.0) * (fm + T(4.0) * frm + fb);
    const T delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / T(15.0);
    }
    return simpson_adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <typename T, typename F>
T integrate_panels(F&& f, double a, double b, double tol, int panels) {
    if (panels < 1) panels = 1;
    const double h = (b - a) / panels;
    T total{};
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = (i + 1 == panels) ? b : a + (i + 1) * h;
        const double mid = 0.5 * (lo + hi);
        const T flo = f(lo);
        const T fhi = f(hi);
        const T fmid = f(mid);
        const T whole = T((hi - lo) / 6.0) * (flo + T(4.0) * fmid + fhi);
        total += simpson_adapt(f, lo, flo, hi, fhi, mid, fmid, whole,
                               tol / panels, 48);
    }
    return total;
}

}  // namespace detail

/// Adaptive Simpson quadrature of a real integrand with absolute tolerance
/// `tol`. The interval is pre-split into `panels` sections so oscillatory
/// integrands cannot alias the initial coarse estimate.
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-10, int panels = 16) {
    return detail::integrate_panels<double>(std::forward<F>(f), a, b, tol, panels);
}

/// Same for complex-valued integrands (error measured in modulus).
template <typename F>
std::complex<double> integrate_complex(F&& f, double a, double b,
                                       double tol = 1e-10, int panels = 16) {
    return detail::integrate_panels<std::complex<double>>(std::forward<F>(f), a,
                                                          b, tol, panels);
}

}  // namespace homsim
