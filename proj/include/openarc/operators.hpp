#pragma once

#include <functional>
#include <span>
#include <vector>

#include "openarc/geometry.hpp"
#include "openarc/grids.hpp"

namespace openarc {

// ---------------------------------------------------------------------------
// Flat-arc, zero-frequency operators. All act exactly in cosine-coefficient
// space: S0 is diagonal there, J0 and C are upper triangular.
// ---------------------------------------------------------------------------

/// Eigenvalue of S0 on cos(m theta): ln2/2 for m = 0, 1/(2m) otherwise.
double s0_eigenvalue(int m);

CVector apply_S0(const ThetaGrid& grid, const CVector& v);
CVector apply_S0_inverse(const ThetaGrid& grid, const CVector& v);

/// S0^tau = S0 Z0 with Z0 multiplication by tau(cos theta).
CVector apply_S0tau(const ThetaGrid& grid, std::span<const double> tau, const CVector& v);
/// (S0^tau)^{-1} v = S0^{-1}[v] / tau.
CVector apply_S0tau_inverse(const ThetaGrid& grid, std::span<const double> tau, const CVector& v);

/// J0 = N0 S0: e_0 -> -(ln2/4) e_0,
/// e_n -> -cos(theta) sin(n theta) / (4 n sin theta) - cos(n theta) / 4.
CVector apply_J0(const ThetaGrid& grid, const CVector& v);
/// The same action on cosine coefficients c_0..c_{n-1}. Assembling this map
/// gives an exactly upper-triangular matrix.
CVector j0_coefficients(const CVector& c);

/// e_0 -> 0, e_n -> sin(n theta) / (n sin theta).
CVector apply_C(const ThetaGrid& grid, const CVector& v);
CVector c_coefficients(const CVector& c);

/// N0 = D0 S0 T0 composed in coefficient space. The intermediate T0 image
/// keeps its degree-n mode, so N0 S0 reproduces J0 on the whole discrete space.
CVector apply_N0(const ThetaGrid& grid, const CVector& v);

DensityVector apply_S0(const DensityVector& v);
DensityVector apply_J0(const DensityVector& v);
DensityVector apply_C(const DensityVector& v);
DensityVector apply_S0tau_inverse(const Arc& arc, const DensityVector& v);

// ---------------------------------------------------------------------------
// Quadrature matrices.
// ---------------------------------------------------------------------------

/**
 * r[l] = -sum_{m<n} (2 - delta_{m0}) lambda_m cos(m pi l / n), l = 0..2n-1,
 * so that the log-kernel weights are R_j(theta_i) = r[|i - j|] + r[i + j + 1] and
 *   int_0^pi ln|cos t - cos t'| phi(t') dt' ~ (pi/n) sum_j phi(theta_j) R_j(t).
 */
struct LogQuadVector {
    std::vector<double> r;

    double weight(int i, int j) const { return r[std::abs(i - j)] + r[i + j + 1]; }
};

/// Built with a single length-2n FFT.
LogQuadVector build_log_quad(const ThetaGrid& grid);
/// Same vector for any 5-smooth n >= 1, without building a grid.
LogQuadVector build_log_quad(int n);

enum class OperatorKind { S, Ng, S0tau };

struct OperatorMatrix {
    OperatorKind kind;
    int n;
    double k;  // 0 only for S0tau
    Arc arc;
    CMatrix entries;
};

/// S_{ij} = (pi/n) tau_j (A1_{ij} R_j(theta_i) + A2_{ij}). Requires k > 0.
OperatorMatrix build_S_matrix(const Arc& arc, double k, const ThetaGrid& grid);

/// Ng_{ij} = k^2 sin^2(theta_j) (n_i . n_j) S_{ij}. When `s` is given (same arc,
/// k and grid) it is reused and assembly is O(n^2) without kernel evaluations.
OperatorMatrix build_Ng_matrix(const Arc& arc, double k, const ThetaGrid& grid,
                               const OperatorMatrix* s = nullptr);

/// Dense matrix of S0^tau, for spectrum studies.
OperatorMatrix build_S0tau_matrix(const Arc& arc, const ThetaGrid& grid);

/// N v = Ng v + (1/tau) D0 (S T0^tau v), evaluated as
/// Ng v + (1/tau) (N0 v + D0 (S - S0^tau) T0^tau v).
DensityVector apply_N(const Arc& arc, double k, const OperatorMatrix& s, const OperatorMatrix& ng,
                      const DensityVector& v);
/// N (S v).
DensityVector apply_NS(const Arc& arc, double k, const OperatorMatrix& s, const OperatorMatrix& ng,
                       const DensityVector& v);

/**
 * Discrete S, N and their compositions for one arc, wavenumber and grid.
 * Matrices are built once in the constructor; every apply_* is a pure matvec
 * pipeline and may be called concurrently.
 */
class ArcOperators {
public:
    ArcOperators(Arc arc, double k, GridPtr grid);

    const Arc& arc() const { return arc_; }
    double k() const { return k_; }
    const ThetaGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int size() const { return grid_->size(); }
    std::span<const double> tau() const { return tau_; }
    const OperatorMatrix& s_matrix() const { return s_; }
    const OperatorMatrix& ng_matrix() const { return ng_; }
    /// Seconds spent building S and Ng.
    double assembly_seconds() const { return assembly_seconds_; }

    CVector apply_S(const CVector& v) const;
    CVector apply_N(const CVector& v) const;
    CVector apply_NS(const CVector& v) const;
    /// S (S0^tau)^{-1} v.
    CVector apply_S_S0tau_inverse(const CVector& v) const;
    CVector apply_S0tau_inverse(const CVector& v) const;

private:
    struct Assembled;
    static Assembled assemble(Arc arc, double k, GridPtr grid);
    explicit ArcOperators(Assembled built);

    Arc arc_;
    double k_;
    GridPtr grid_;
    std::vector<double> tau_;
    OperatorMatrix s_;
    OperatorMatrix ng_;
    double assembly_seconds_ = 0.0;
};

using LinearMap = std::function<CVector(const CVector&)>;

/// Column j is op(e_j). Throws std::invalid_argument when n exceeds `cap`.
CMatrix assemble_dense(const LinearMap& op, int n, int cap = 4096);

}  // namespace openarc
