#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openarc/geometry.hpp"
#include "openarc/grids.hpp"
#include "openarc/linalg.hpp"
#include "openarc/operators.hpp"

namespace openarc {

enum class Formulation { TE_S, TE_NS, TM_N, TM_NS, TE_ATKINSON };

/// Accepts "TE_S", "TE_NS", "TM_N", "TM_NS", "TE_ATKINSON" (case-insensitive).
Formulation parse_formulation(std::string_view name);
std::string to_string(Formulation f);
bool is_te(Formulation f);

/// Plane wave u_inc = exp(i k d.r), d = (cos a, sin a) with a in degrees.
struct Incidence {
    double angle_deg = 0.0;
    double k = 1.0;

    Vec2 direction() const;
};

/// f(theta_j) = -u_inc(r(cos theta_j)).
DensityVector rhs_te(const Arc& arc, const Incidence& inc, const GridPtr& grid);
/// g(theta_j) = -i k (d.n_j) u_inc(r(cos theta_j)).
DensityVector rhs_tm(const Arc& arc, const Incidence& inc, const GridPtr& grid);

struct Solution {
    Formulation formulation;
    std::shared_ptr<const ArcOperators> ops;
    Incidence incidence;
    /// Solved periodic unknown: phi for TE, psi for TM. For TE_ATKINSON this is
    /// the physical phi = (S0^tau)^{-1} applied to the iterated unknown.
    DensityVector density;
    /// Iterated unknown of TE_ATKINSON; empty otherwise.
    CVector auxiliary;
    SolveReport report;
    /// Seconds spent assembling S and Ng (0 when the operators were reused).
    double mat_seconds = 0.0;

    const Arc& arc() const { return ops->arc(); }
    double k() const { return ops->k(); }
    const GridPtr& grid() const { return ops->grid_ptr(); }
};

/// Solves with prebuilt operators. Throws std::invalid_argument when the
/// incidence wavenumber differs from the operators'. Non-convergence is
/// reported through `report.converged`.
Solution solve(Formulation f, std::shared_ptr<const ArcOperators> ops, const Incidence& inc, double tol,
               int maxit);
Solution solve(Formulation f, const Arc& arc, const Incidence& inc, const GridPtr& grid, double tol,
               int maxit);

/// Applies the operator of the formulation's defining equation to x.
CVector apply_formulation(Formulation f, const ArcOperators& ops, const CVector& x);

/// mu(r(cos theta_j)) = phi(theta_j) / sin(theta_j). TE solutions only.
DensityVector recover_mu(const Solution& sol);
/// nu~ = sin(theta) psi (TM_N) or sin(theta) S[psi] (TM_NS). TM solutions only.
DensityVector recover_nu(const Solution& sol);

struct FarField {
    std::vector<double> angles;  // degrees, 360 i / m
    std::vector<std::complex<double>> values;
};

/// Far-field pattern with unit normalization:
///   TE  u(x) = int e^{-ik x.r'} mu ds'
///   TM  v(x) = int (-ik x.n') e^{-ik x.r'} nu ds'
/// using the (pi/n) node rule in theta.
FarField far_field(const Solution& sol, int m);

/// max |u - ref| / max |ref| over matching angles.
double relative_far_field_error(const FarField& u, const FarField& ref);

/// Default masking distance: twice the largest spacing between adjacent nodes.
double default_mask_distance(const Solution& sol);

/// Total field (incident plus scattered) at the given points; points within
/// `mask_distance` of a node give std::nullopt. A negative distance selects the
/// default.
std::vector<std::optional<std::complex<double>>> near_field(const Solution& sol, const std::vector<Vec2>& points,
                                                            double mask_distance = -1.0);
/// Scattered field only, no masking.
std::vector<std::complex<double>> scattered_field(const Solution& sol, const std::vector<Vec2>& points);

struct Rectangle {
    double x0, y0, x1, y1;
    int width, height;
};

/// Row-major samples at pixel centers, row 0 at y1 (top).
struct FieldMap {
    Rectangle rect;
    std::vector<Vec2> points;
    std::vector<std::optional<std::complex<double>>> values;
};

FieldMap near_field(const Solution& sol, const Rectangle& rect, double mask_distance = -1.0);

}  // namespace openarc
