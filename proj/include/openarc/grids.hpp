#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "openarc/fft.hpp"
#include "openarc/geometry.hpp"

namespace openarc {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// n >= 4 with prime factors in {2, 3, 5}.
bool is_admissible_grid_size(int n);
/// Largest admissible size not exceeding n (n >= 4).
int largest_admissible_at_most(int n);

/**
 * Cosine-node grid theta_j = pi (2j + 1) / (2n), j = 0..n-1, together with the
 * FFT plan behind its cosine/sine transforms.
 *
 * Coefficients use the convention v(theta) = sum_{m<n} c_m cos(m theta) with
 * c_m = (2 - delta_{m0}) / n * sum_j v(theta_j) cos(m theta_j).
 */
class ThetaGrid {
public:
    explicit ThetaGrid(int n);

    int size() const { return n_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> cos_nodes() const { return cos_; }
    std::span<const double> sin_nodes() const { return sin_; }

    /// Samples -> cosine coefficients c_0..c_{n-1}.
    CVector cosine_coeffs(const CVector& samples) const;
    /// Cosine coefficients -> samples. Modes m >= n are ignored; cos(n theta_j) = 0.
    CVector cosine_synthesis(const CVector& coeffs) const;
    /// Samples of an odd function -> sine coefficients b_1..b_n (entry m-1 holds b_m).
    CVector sine_coeffs(const CVector& samples) const;

private:
    CVector raw_dct(const CVector& samples) const;

    int n_;
    std::vector<double> nodes_;
    std::vector<double> cos_;
    std::vector<double> sin_;
    Fft fft_;  // length 2n
};

using GridPtr = std::shared_ptr<const ThetaGrid>;

inline GridPtr make_grid(int n) { return std::make_shared<const ThetaGrid>(n); }

/// Samples at the grid nodes of an even 2 pi-periodic density.
struct DensityVector {
    GridPtr grid;
    CVector values;
};

CVector cosine_coeffs(const DensityVector& v);

// Vector-level forms are what the operator pipelines use; the DensityVector
// overloads wrap them.

/// d/dtheta (v sin theta) via the sine series of v sin theta.
CVector apply_T0(const ThetaGrid& grid, const CVector& v);
/// apply_T0 divided pointwise by tau(cos theta_j).
CVector apply_T0_tau(const ThetaGrid& grid, std::span<const double> tau, const CVector& v);
/// (1/sin theta) d/dtheta v = -d phi/dx for v = phi(cos theta), by Chebyshev differentiation.
CVector apply_D0(const ThetaGrid& grid, const CVector& v);

DensityVector apply_T0(const DensityVector& v);
DensityVector apply_T0_tau(const Arc& arc, const DensityVector& v);
DensityVector apply_D0(const DensityVector& v);

/// Chebyshev derivative in coefficient space: given c (length M) of
/// sum c_m T_m(x), returns d (length M) of the derivative, d_{M-1} = 0.
CVector chebyshev_derivative(const CVector& c);

/// tau(cos theta_j) for every node.
std::vector<double> node_speeds(const Arc& arc, const ThetaGrid& grid);

}  // namespace openarc
