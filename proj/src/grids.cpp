#include "openarc/grids.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace openarc {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t checked_fft_length(int n)
{
    if (!is_admissible_grid_size(n)) {
        throw std::invalid_argument("grid size " + std::to_string(n) +
                                    " is not admissible (need n >= 4 with prime factors 2, 3, 5)");
    }
    return static_cast<std::size_t>(2 * n);
}

}  // namespace

bool is_admissible_grid_size(int n)
{
    return n >= 4 && is_five_smooth(static_cast<std::size_t>(n));
}

int largest_admissible_at_most(int n)
{
    if (n < 4) {
        throw std::invalid_argument("grid size must be at least 4");
    }
    while (!is_admissible_grid_size(n)) {
        --n;
    }
    return n;
}

ThetaGrid::ThetaGrid(int n)
    : n_(n), fft_(checked_fft_length(n))
{
    nodes_.resize(n);
    cos_.resize(n);
    sin_.resize(n);
    for (int j = 0; j < n; ++j) {
        nodes_[j] = pi * (2.0 * j + 1.0) / (2.0 * n);
        cos_[j] = std::cos(nodes_[j]);
        sin_[j] = std::sin(nodes_[j]);
    }
}

// D_m = sum_j v_j cos(m theta_j) from the even extension of v to length 2n:
// FFT(y)_m = 2 exp(i pi m / 2n) D_m.
CVector ThetaGrid::raw_dct(const CVector& samples) const
{
    if (samples.size() != n_) {
        throw std::invalid_argument("sample vector does not match grid size");
    }
    std::vector<std::complex<double>> y(2 * n_);
    for (int j = 0; j < n_; ++j) {
        y[j] = samples[j];
        y[2 * n_ - 1 - j] = samples[j];
    }
    fft_.forward(y);
    CVector d(n_);
    for (int m = 0; m < n_; ++m) {
        const double angle = -pi * m / (2.0 * n_);
        d[m] = 0.5 * std::complex<double>(std::cos(angle), std::sin(angle)) * y[m];
    }
    return d;
}

CVector ThetaGrid::cosine_coeffs(const CVector& samples) const
{
    CVector c = raw_dct(samples);
    c[0] /= static_cast<double>(n_);
    c.tail(n_ - 1) *= 2.0 / n_;
    return c;
}

CVector ThetaGrid::cosine_synthesis(const CVector& coeffs) const
{
    std::vector<std::complex<double>> z(2 * n_, 0.0);
    const int modes = std::min<int>(static_cast<int>(coeffs.size()), n_);
    if (modes > 0) {
        z[0] = coeffs[0];
    }
    for (int m = 1; m < modes; ++m) {
        const double angle = pi * m / (2.0 * n_);
        const std::complex<double> shift(std::cos(angle), std::sin(angle));
        z[m] = 0.5 * coeffs[m] * shift;
        z[2 * n_ - m] = 0.5 * coeffs[m] * std::conj(shift);
    }
    fft_.backward(z);
    CVector v(n_);
    for (int j = 0; j < n_; ++j) {
        v[j] = z[j];
    }
    return v;
}

// sin(m theta_j) = (-1)^j cos((n - m) theta_j), so the sine coefficients are
// the cosine coefficients of (-1)^j g_j read backwards.
CVector ThetaGrid::sine_coeffs(const CVector& samples) const
{
    CVector alternating = samples;
    for (int j = 1; j < n_; j += 2) {
        alternating[j] = -alternating[j];
    }
    const CVector a = cosine_coeffs(alternating);
    CVector b(n_);
    for (int m = 1; m <= n_; ++m) {
        b[m - 1] = a[n_ - m];
    }
    return b;
}

CVector cosine_coeffs(const DensityVector& v) { return v.grid->cosine_coeffs(v.values); }

CVector chebyshev_derivative(const CVector& c)
{
    const Eigen::Index m = c.size();
    CVector d = CVector::Zero(m);
    if (m < 2) {
        return d;
    }
    d[m - 2] = 2.0 * static_cast<double>(m - 1) * c[m - 1];
    for (Eigen::Index k = m - 2; k >= 1; --k) {
        d[k - 1] = d[k + 1] + 2.0 * static_cast<double>(k) * c[k];
    }
    d[0] *= 0.5;
    return d;
}

CVector apply_T0(const ThetaGrid& grid, const CVector& v)
{
    const int n = grid.size();
    CVector g(n);
    for (int j = 0; j < n; ++j) {
        g[j] = v[j] * grid.sin_nodes()[j];
    }
    const CVector b = grid.sine_coeffs(g);
    // d/dtheta sum b_m sin(m theta) = sum m b_m cos(m theta); the m = n term
    // vanishes at every node.
    CVector d = CVector::Zero(n);
    for (int m = 1; m < n; ++m) {
        d[m] = static_cast<double>(m) * b[m - 1];
    }
    return grid.cosine_synthesis(d);
}

CVector apply_T0_tau(const ThetaGrid& grid, std::span<const double> tau, const CVector& v)
{
    CVector out = apply_T0(grid, v);
    for (int j = 0; j < grid.size(); ++j) {
        out[j] /= tau[j];
    }
    return out;
}

CVector apply_D0(const ThetaGrid& grid, const CVector& v)
{
    return -grid.cosine_synthesis(chebyshev_derivative(grid.cosine_coeffs(v)));
}

DensityVector apply_T0(const DensityVector& v) { return {v.grid, apply_T0(*v.grid, v.values)}; }

DensityVector apply_T0_tau(const Arc& arc, const DensityVector& v)
{
    const auto tau = node_speeds(arc, *v.grid);
    return {v.grid, apply_T0_tau(*v.grid, tau, v.values)};
}

DensityVector apply_D0(const DensityVector& v) { return {v.grid, apply_D0(*v.grid, v.values)}; }

std::vector<double> node_speeds(const Arc& arc, const ThetaGrid& grid)
{
    std::vector<double> tau(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        tau[j] = arc.eval(grid.cos_nodes()[j]).tau;
    }
    return tau;
}

}  // namespace openarc
