#pragma once

#include <complex>

#include "openarc/geometry.hpp"

namespace openarc {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Values of the order-0 and order-1 Bessel functions at one argument.
struct BesselValues {
    double j0;
    double y0;
    double j1;
    double y1;
};

// Power series for x < 2, Miller backward recurrence with Neumann series for
// 2 <= x <= 25, Hankel asymptotic expansion above. Absolute accuracy is near
// machine precision on (0, 1e4].
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);
BesselValues bessel_01(double x);

/// H_0^(1)(x) = J0(x) + i Y0(x), x > 0.
std::complex<double> hankel1_0(double x);
/// H_1^(1)(x) = J1(x) + i Y1(x), x > 0.
std::complex<double> hankel1_1(double x);

/**
 * Split of the Helmholtz Green function along the periodized arc,
 *   G_k(r(cos t), r(cos t')) = a1 ln|cos t - cos t'| + a2,
 * with a1 = -J0(kR)/(2 pi) and a2 = (i/4) H0(kR) + J0(kR) ln|cos t - cos t'| / (2 pi).
 * On the diagonal a1 = -1/(2 pi) and
 *   a2 = i/4 - (gamma_E + ln(k tau(cos t) / 2)) / (2 pi).
 */
struct KernelSplit {
    std::complex<double> a1;
    std::complex<double> a2;
};

KernelSplit kernel_split(double k, const Arc& arc, double theta, double theta_p);

/// Same split given precomputed points; `tau` is only used when `t == t_p`.
KernelSplit kernel_split(double k, Vec2 r, Vec2 r_p, double t, double t_p, double tau);

}  // namespace openarc
