#include "openarc/scattering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "openarc/specfun.hpp"
#include "parallel.hpp"

namespace openarc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::complex<double> I(0.0, 1.0);

std::vector<ArcPoint> node_points(const Arc& arc, const ThetaGrid& grid)
{
    std::vector<ArcPoint> pts(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        pts[j] = arc.eval(grid.cos_nodes()[j]);
    }
    return pts;
}

std::complex<double> plane_wave(const Incidence& inc, Vec2 r)
{
    const double phase = inc.k * dot(inc.direction(), r);
    return {std::cos(phase), std::sin(phase)};
}

// Quadrature weights w_j such that the boundary integral of a density sampled
// as `values` is sum_j w_j values_j. TE: (pi/n) tau_j phi_j. TM: (pi/n) tau_j sin_j nu_j.
CVector weighted_density(const Solution& sol)
{
    const ThetaGrid& grid = *sol.grid();
    const auto tau = sol.ops->tau();
    const double h = pi / grid.size();
    CVector w = is_te(sol.formulation) ? sol.density.values : recover_nu(sol).values;
    for (int j = 0; j < grid.size(); ++j) {
        w[j] *= h * tau[j];
        if (!is_te(sol.formulation)) {
            w[j] *= grid.sin_nodes()[j];
        }
    }
    return w;
}

}  // namespace

Formulation parse_formulation(std::string_view name)
{
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "TE_S") return Formulation::TE_S;
    if (upper == "TE_NS") return Formulation::TE_NS;
    if (upper == "TM_N") return Formulation::TM_N;
    if (upper == "TM_NS") return Formulation::TM_NS;
    if (upper == "TE_ATKINSON") return Formulation::TE_ATKINSON;
    throw std::invalid_argument("unknown formulation '" + std::string(name) + "'");
}

std::string to_string(Formulation f)
{
    switch (f) {
    case Formulation::TE_S: return "TE_S";
    case Formulation::TE_NS: return "TE_NS";
    case Formulation::TM_N: return "TM_N";
    case Formulation::TM_NS: return "TM_NS";
    case Formulation::TE_ATKINSON: return "TE_ATKINSON";
    }
    return "?";
}

bool is_te(Formulation f) { return f == Formulation::TE_S || f == Formulation::TE_NS || f == Formulation::TE_ATKINSON; }

Vec2 Incidence::direction() const
{
    const double a = angle_deg * pi / 180.0;
    return {std::cos(a), std::sin(a)};
}

DensityVector rhs_te(const Arc& arc, const Incidence& inc, const GridPtr& grid)
{
    CVector f(grid->size());
    for (int j = 0; j < grid->size(); ++j) {
        f[j] = -plane_wave(inc, arc.point(grid->cos_nodes()[j]));
    }
    return {grid, std::move(f)};
}

DensityVector rhs_tm(const Arc& arc, const Incidence& inc, const GridPtr& grid)
{
    const Vec2 d = inc.direction();
    CVector g(grid->size());
    for (int j = 0; j < grid->size(); ++j) {
        const ArcPoint p = arc.eval(grid->cos_nodes()[j]);
        g[j] = -I * inc.k * dot(d, p.normal) * plane_wave(inc, p.point);
    }
    return {grid, std::move(g)};
}

CVector apply_formulation(Formulation f, const ArcOperators& ops, const CVector& x)
{
    switch (f) {
    case Formulation::TE_S: return ops.apply_S(x);
    case Formulation::TM_N: return ops.apply_N(x);
    case Formulation::TE_NS:
    case Formulation::TM_NS: return ops.apply_NS(x);
    case Formulation::TE_ATKINSON: return ops.apply_S_S0tau_inverse(x);
    }
    throw std::invalid_argument("unknown formulation");
}

Solution solve(Formulation f, std::shared_ptr<const ArcOperators> ops, const Incidence& inc, double tol,
               int maxit)
{
    if (!ops) {
        throw std::invalid_argument("solve: operators are null");
    }
    if (inc.k != ops->k()) {
        throw std::invalid_argument("solve: incidence wavenumber does not match the operators");
    }
    const GridPtr& grid = ops->grid_ptr();
    CVector b = is_te(f) ? rhs_te(ops->arc(), inc, grid).values : rhs_tm(ops->arc(), inc, grid).values;
    if (f == Formulation::TE_NS) {
        b = ops->apply_N(b);
    }

    Solution sol{f, ops, inc, {grid, CVector::Zero(grid->size())}, {}, {}, 0.0};
    if (b.norm() == 0.0) {
        // Zero excitation: the unique solution is zero.
        sol.report.converged = true;
        sol.report.n = grid->size();
        return sol;
    }
    const ArcOperators& op = *ops;
    GmresResult result = gmres([&op, f](const CVector& x) { return apply_formulation(f, op, x); }, b, tol, maxit);
    sol.report = std::move(result.report);
    if (f == Formulation::TE_ATKINSON) {
        sol.density.values = ops->apply_S0tau_inverse(result.x);
        sol.auxiliary = std::move(result.x);
    } else {
        sol.density.values = std::move(result.x);
    }
    return sol;
}

Solution solve(Formulation f, const Arc& arc, const Incidence& inc, const GridPtr& grid, double tol, int maxit)
{
    auto ops = std::make_shared<const ArcOperators>(arc, inc.k, grid);
    Solution sol = solve(f, ops, inc, tol, maxit);
    sol.mat_seconds = ops->assembly_seconds();
    return sol;
}

DensityVector recover_mu(const Solution& sol)
{
    if (!is_te(sol.formulation)) {
        throw std::invalid_argument("recover_mu requires a TE solution");
    }
    DensityVector mu = sol.density;
    for (int j = 0; j < mu.grid->size(); ++j) {
        mu.values[j] /= mu.grid->sin_nodes()[j];
    }
    return mu;
}

DensityVector recover_nu(const Solution& sol)
{
    if (is_te(sol.formulation)) {
        throw std::invalid_argument("recover_nu requires a TM solution");
    }
    DensityVector nu = sol.density;
    if (sol.formulation == Formulation::TM_NS) {
        nu.values = sol.ops->apply_S(nu.values);
    }
    for (int j = 0; j < nu.grid->size(); ++j) {
        nu.values[j] *= nu.grid->sin_nodes()[j];
    }
    return nu;
}

FarField far_field(const Solution& sol, int m)
{
    if (m < 1) {
        throw std::invalid_argument("far_field needs at least one observation angle");
    }
    const ThetaGrid& grid = *sol.grid();
    const auto pts = node_points(sol.arc(), grid);
    const CVector w = weighted_density(sol);
    const double k = sol.k();
    const bool te = is_te(sol.formulation);

    FarField out;
    out.angles.resize(m);
    out.values.resize(m);
    detail::parallel_blocks(m, 16, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const double deg = 360.0 * i / m;
            const double a = deg * pi / 180.0;
            const Vec2 xhat{std::cos(a), std::sin(a)};
            std::complex<double> sum = 0.0;
            for (int j = 0; j < grid.size(); ++j) {
                const double phase = -k * dot(xhat, pts[j].point);
                std::complex<double> term = std::complex<double>(std::cos(phase), std::sin(phase)) * w[j];
                if (!te) {
                    term *= -I * k * dot(xhat, pts[j].normal);
                }
                sum += term;
            }
            out.angles[i] = deg;
            out.values[i] = sum;
        }
    });
    return out;
}

double relative_far_field_error(const FarField& u, const FarField& ref)
{
    if (u.values.size() != ref.values.size()) {
        throw std::invalid_argument("far fields have different observation counts");
    }
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        err = std::max(err, std::abs(u.values[i] - ref.values[i]));
        scale = std::max(scale, std::abs(ref.values[i]));
    }
    if (scale == 0.0) {
        throw std::invalid_argument("reference far field is identically zero");
    }
    return err / scale;
}

double default_mask_distance(const Solution& sol)
{
    const auto pts = node_points(sol.arc(), *sol.grid());
    double spacing = 0.0;
    for (std::size_t j = 1; j < pts.size(); ++j) {
        spacing = std::max(spacing, norm(pts[j].point - pts[j - 1].point));
    }
    return 2.0 * spacing;
}

std::vector<std::complex<double>> scattered_field(const Solution& sol, const std::vector<Vec2>& points)
{
    const ThetaGrid& grid = *sol.grid();
    const auto pts = node_points(sol.arc(), grid);
    const CVector w = weighted_density(sol);
    const double k = sol.k();
    const bool te = is_te(sol.formulation);

    std::vector<std::complex<double>> out(points.size());
    detail::parallel_blocks(static_cast<int>(points.size()), 16, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            std::complex<double> sum = 0.0;
            for (int j = 0; j < grid.size(); ++j) {
                const Vec2 diff = points[i] - pts[j].point;
                const double r = norm(diff);
                if (r == 0.0) {
                    continue;
                }
                if (te) {
                    sum += 0.25 * I * hankel1_0(k * r) * w[j];
                } else {
                    sum += 0.25 * I * k * hankel1_1(k * r) * (dot(pts[j].normal, diff) / r) * w[j];
                }
            }
            out[i] = sum;
        }
    });
    return out;
}

std::vector<std::optional<std::complex<double>>> near_field(const Solution& sol, const std::vector<Vec2>& points,
                                                            double mask_distance)
{
    const double mask = mask_distance < 0.0 ? default_mask_distance(sol) : mask_distance;
    const auto pts = node_points(sol.arc(), *sol.grid());
    std::vector<Vec2> kept;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double nearest = INFINITY;
        for (const ArcPoint& p : pts) {
            nearest = std::min(nearest, norm(points[i] - p.point));
        }
        if (nearest >= mask) {
            kept.push_back(points[i]);
            index.push_back(i);
        }
    }
    const auto scattered = scattered_field(sol, kept);
    std::vector<std::optional<std::complex<double>>> out(points.size());
    for (std::size_t q = 0; q < kept.size(); ++q) {
        out[index[q]] = scattered[q] + plane_wave(sol.incidence, kept[q]);
    }
    return out;
}

FieldMap near_field(const Solution& sol, const Rectangle& rect, double mask_distance)
{
    if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0) || rect.width < 1 || rect.height < 1) {
        throw std::invalid_argument("invalid field-map rectangle");
    }
    FieldMap map{rect, {}, {}};
    map.points.reserve(static_cast<std::size_t>(rect.width) * rect.height);
    const double dx = (rect.x1 - rect.x0) / rect.width;
    const double dy = (rect.y1 - rect.y0) / rect.height;
    for (int row = 0; row < rect.height; ++row) {
        for (int col = 0; col < rect.width; ++col) {
            map.points.push_back({rect.x0 + (col + 0.5) * dx, rect.y1 - (row + 0.5) * dy});
        }
    }
    map.values = near_field(sol, map.points, mask_distance);
    return map;
}

}  // namespace openarc
