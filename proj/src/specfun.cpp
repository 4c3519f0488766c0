#include "openarc/specfun.hpp"

#include <numbers>
#include <stdexcept>

namespace openarc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double series_limit = 2.0;
constexpr double asymptotic_limit = 25.0;

void check_argument(double x)
{
    if (!std::isfinite(x)) {
        throw std::domain_error("Bessel argument must be finite");
    }
    if (x < 0.0) {
        throw std::domain_error("Bessel argument must be non-negative");
    }
}

BesselValues small_argument(double x)
{
    const double q = 0.25 * x * x;
    const double log_half = std::log(0.5 * x);

    // J0, and Y0 via harmonic numbers H_k.
    double term = 1.0;
    double j0 = 1.0;
    double y0_sum = 0.0;
    double harmonic = 0.0;
    // J1 = (x/2) sum (-q)^k / (k! (k+1)!), Y1 needs psi(k+1) + psi(k+2).
    double term1 = 0.5 * x;
    double j1 = term1;
    double y1_sum = (2.0 * -euler_gamma + 1.0) * term1;
    double harmonic1 = 1.0;  // H_{k+1}
    for (int k = 1; k < 40; ++k) {
        term *= -q / (double(k) * k);
        harmonic += 1.0 / k;
        j0 += term;
        y0_sum -= harmonic * term;

        term1 *= -q / (double(k) * (k + 1));
        const double harmonic_k = harmonic1;  // H_k
        harmonic1 += 1.0 / (k + 1);
        j1 += term1;
        y1_sum += (harmonic_k + harmonic1 - 2.0 * euler_gamma) * term1;
        if (std::abs(term) < 1e-18 && std::abs(term1) < 1e-18) {
            break;
        }
    }
    BesselValues v;
    v.j0 = j0;
    v.j1 = j1;
    v.y0 = 2.0 / pi * ((log_half + euler_gamma) * j0 + y0_sum);
    v.y1 = 2.0 / pi * log_half * j1 - 2.0 / (pi * x) - y1_sum / pi;
    return v;
}

// Miller's algorithm: backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1},
// normalized by J0 + 2 sum J_{2k} = 1. Y0 and Y1 follow from the Neumann series
//   Y0 = (2/pi)(ln(x/2) + gamma) J0 - (4/pi) sum_k (-1)^k J_{2k} / k
//   Y1 = -(2/(pi x)) J0 + (2/pi)(ln(x/2) + gamma) J1
//        + (2/pi) sum_k (-1)^k (J_{2k-1} - J_{2k+1}) / k.
BesselValues miller(double x)
{
    const int start = 2 * ((static_cast<int>(1.3 * x) + 40) / 2);
    double next = 0.0;  // J_{n+1}
    double cur = 1e-300;  // J_n, n = start
    double norm = 0.0;
    double y0_sum = 0.0;
    double y1_sum = 0.0;
    // Weight of J_m (m odd) in the Y1 series: it enters as J_{2k-1} with
    // k = (m + 1) / 2 and as -J_{2k+1} with k = (m - 1) / 2.
    auto odd_weight = [](int m) {
        double w = 0.0;
        const int ka = (m + 1) / 2;
        w += ((ka % 2) ? -1.0 : 1.0) / ka;
        const int kb = (m - 1) / 2;
        if (kb >= 1) {
            w -= ((kb % 2) ? -1.0 : 1.0) / kb;
        }
        return w;
    };
    double j1 = 0.0;
    for (int n = start; n >= 1; --n) {
        const double prev = 2.0 * n / x * cur - next;  // J_{n-1}
        next = cur;
        cur = prev;
        const int m = n - 1;
        if (m > 0 && m % 2 == 0) {
            norm += 2.0 * cur;
            const int k = m / 2;
            y0_sum += ((k % 2) ? -1.0 : 1.0) * cur / k;
        } else if (m % 2 == 1) {
            y1_sum += odd_weight(m) * cur;
            if (m == 1) {
                j1 = cur;
            }
        }
        if (std::abs(cur) > 1e250) {
            constexpr double s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            y0_sum *= s;
            y1_sum *= s;
            j1 *= s;
        }
    }
    norm += cur;
    const double scale = 1.0 / norm;
    BesselValues v;
    v.j0 = cur * scale;
    v.j1 = j1 * scale;
    const double log_term = std::log(0.5 * x) + euler_gamma;
    v.y0 = 2.0 / pi * log_term * v.j0 - 4.0 / pi * y0_sum * scale;
    v.y1 = -2.0 / (pi * x) * v.j0 + 2.0 / pi * log_term * v.j1 + 2.0 / pi * y1_sum * scale;
    return v;
}

// Hankel expansion: P and Q series with a_k(nu) = prod (4nu^2 - (2j-1)^2) / (k! 8^k).
void hankel_pq(double x, double mu, double& p, double& q)
{
    p = 1.0;
    q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
        const double magnitude = std::abs(term);
        if (magnitude > last) {
            break;
        }
        last = magnitude;
        const int r = k % 4;
        if (r == 1) q += term;
        else if (r == 2) p -= term;
        else if (r == 3) q -= term;
        else p += term;
        if (magnitude < 1e-17) {
            break;
        }
    }
}

BesselValues large_argument(double x)
{
    const double amplitude = std::sqrt(2.0 / (pi * x));
    const double c = std::cos(x);
    const double s = std::sin(x);
    // chi0 = x - pi/4, chi1 = x - 3 pi/4
    const double r2 = std::numbers::sqrt2 / 2.0;
    const double cos0 = r2 * (c + s);
    const double sin0 = r2 * (s - c);
    const double cos1 = r2 * (s - c);
    const double sin1 = -r2 * (c + s);

    double p0, q0, p1, q1;
    hankel_pq(x, 0.0, p0, q0);
    hankel_pq(x, 4.0, p1, q1);
    BesselValues v;
    v.j0 = amplitude * (p0 * cos0 - q0 * sin0);
    v.y0 = amplitude * (p0 * sin0 + q0 * cos0);
    v.j1 = amplitude * (p1 * cos1 - q1 * sin1);
    v.y1 = amplitude * (p1 * sin1 + q1 * cos1);
    return v;
}

}  // namespace

BesselValues bessel_01(double x)
{
    check_argument(x);
    if (x == 0.0) {
        return {1.0, -HUGE_VAL, 0.0, -HUGE_VAL};
    }
    if (x < series_limit) {
        return small_argument(x);
    }
    if (x <= asymptotic_limit) {
        return miller(x);
    }
    return large_argument(x);
}

double bessel_j0(double x) { return bessel_01(x).j0; }
double bessel_j1(double x) { return bessel_01(x).j1; }
double bessel_y0(double x) { return bessel_01(x).y0; }
double bessel_y1(double x) { return bessel_01(x).y1; }

std::complex<double> hankel1_0(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("hankel1_0 requires x > 0");
    }
    const BesselValues v = bessel_01(x);
    return {v.j0, v.y0};
}

std::complex<double> hankel1_1(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("hankel1_1 requires x > 0");
    }
    const BesselValues v = bessel_01(x);
    return {v.j1, v.y1};
}

KernelSplit kernel_split(double k, Vec2 r, Vec2 r_p, double t, double t_p, double tau)
{
    constexpr double inv_two_pi = 1.0 / (2.0 * pi);
    if (t == t_p) {
        return {-inv_two_pi,
                {-inv_two_pi * (euler_gamma + std::log(0.5 * k * tau)), 0.25}};
    }
    const BesselValues v = bessel_01(k * norm(r - r_p));
    const double log_dt = std::log(std::abs(t - t_p));
    return {-inv_two_pi * v.j0,
            {-0.25 * v.y0 + inv_two_pi * v.j0 * log_dt, 0.25 * v.j0}};
}

KernelSplit kernel_split(double k, const Arc& arc, double theta, double theta_p)
{
    const double t = std::cos(theta);
    const double t_p = std::cos(theta_p);
    const ArcPoint p = arc.eval(t);
    return kernel_split(k, p.point, arc.point(t_p), t, t_p, p.tau);
}

}  // namespace openarc
