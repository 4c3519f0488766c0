#include "openarc/operators.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>
#include <stdexcept>
#include <string>

#include "openarc/specfun.hpp"
#include "parallel.hpp"

namespace openarc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double ln2 = std::numbers::ln2;

void check_size(const ThetaGrid& grid, const CVector& v)
{
    if (v.size() != grid.size()) {
        throw std::invalid_argument("density length does not match grid size");
    }
}

double j0_diagonal(int m) { return m == 0 ? -ln2 / 4.0 : -0.25 - 0.25 / m; }

}  // namespace

double s0_eigenvalue(int m)
{
    if (m < 0) {
        throw std::invalid_argument("s0_eigenvalue requires m >= 0");
    }
    return m == 0 ? ln2 / 2.0 : 0.5 / m;
}

CVector apply_S0(const ThetaGrid& grid, const CVector& v)
{
    check_size(grid, v);
    CVector c = grid.cosine_coeffs(v);
    for (int m = 0; m < grid.size(); ++m) {
        c[m] *= s0_eigenvalue(m);
    }
    return grid.cosine_synthesis(c);
}

CVector apply_S0_inverse(const ThetaGrid& grid, const CVector& v)
{
    check_size(grid, v);
    CVector c = grid.cosine_coeffs(v);
    for (int m = 0; m < grid.size(); ++m) {
        c[m] /= s0_eigenvalue(m);
    }
    return grid.cosine_synthesis(c);
}

CVector apply_S0tau(const ThetaGrid& grid, std::span<const double> tau, const CVector& v)
{
    CVector weighted = v;
    for (int j = 0; j < grid.size(); ++j) {
        weighted[j] *= tau[j];
    }
    return apply_S0(grid, weighted);
}

CVector apply_S0tau_inverse(const ThetaGrid& grid, std::span<const double> tau, const CVector& v)
{
    CVector out = apply_S0_inverse(grid, v);
    for (int j = 0; j < grid.size(); ++j) {
        out[j] /= tau[j];
    }
    return out;
}

// Upper-triangular form: J0 e_n = lambda_n e_n - (1/2n) sum e_m over m < n with
// m = n mod 2, the e_0 term carrying an extra factor 1/2.
CVector j0_coefficients(const CVector& c)
{
    const Eigen::Index n = c.size();
    CVector tail = CVector::Zero(n + 2);  // tail[m] = sum_{p >= m, p = m mod 2} c_p / (2p)
    for (Eigen::Index m = n - 1; m >= 1; --m) {
        tail[m] = tail[m + 2] + c[m] / (2.0 * m);
    }
    CVector d(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        const double weight = m == 0 ? 0.5 : 1.0;
        d[m] = j0_diagonal(static_cast<int>(m)) * c[m] - weight * tail[m + 2];
    }
    return d;
}

CVector apply_J0(const ThetaGrid& grid, const CVector& v)
{
    check_size(grid, v);
    return grid.cosine_synthesis(j0_coefficients(grid.cosine_coeffs(v)));
}

// sin(n theta) / sin(theta) = sum of cos(m theta) over m < n, m = n-1 mod 2,
// with weight 2 (weight 1 for m = 0).
CVector c_coefficients(const CVector& c)
{
    const Eigen::Index n = c.size();
    CVector tail = CVector::Zero(n + 2);  // tail[p] = sum_{q >= p, q = p mod 2} c_q / q
    for (Eigen::Index p = n - 1; p >= 1; --p) {
        tail[p] = tail[p + 2] + c[p] / static_cast<double>(p);
    }
    CVector d(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        d[m] = (m == 0 ? 1.0 : 2.0) * tail[m + 1];
    }
    return d;
}

CVector apply_C(const ThetaGrid& grid, const CVector& v)
{
    check_size(grid, v);
    return grid.cosine_synthesis(c_coefficients(grid.cosine_coeffs(v)));
}

CVector apply_N0(const ThetaGrid& grid, const CVector& v)
{
    check_size(grid, v);
    const int n = grid.size();
    const CVector c = grid.cosine_coeffs(v);
    // T0 cos(m theta) = ((m+1) cos((m+1) theta) - (m-1) cos((m-1) theta)) / 2; T0 1 = cos theta.
    CVector t0 = CVector::Zero(n + 1);
    t0[1] += c[0];
    for (int m = 1; m < n; ++m) {
        t0[m + 1] += 0.5 * (m + 1) * c[m];
        if (m >= 2) {
            t0[m - 1] -= 0.5 * (m - 1) * c[m];
        }
    }
    for (int m = 0; m <= n; ++m) {
        t0[m] *= s0_eigenvalue(m);
    }
    const CVector d = chebyshev_derivative(t0);
    return -grid.cosine_synthesis(d.head(n));
}

DensityVector apply_S0(const DensityVector& v) { return {v.grid, apply_S0(*v.grid, v.values)}; }
DensityVector apply_J0(const DensityVector& v) { return {v.grid, apply_J0(*v.grid, v.values)}; }
DensityVector apply_C(const DensityVector& v) { return {v.grid, apply_C(*v.grid, v.values)}; }

DensityVector apply_S0tau_inverse(const Arc& arc, const DensityVector& v)
{
    const auto tau = node_speeds(arc, *v.grid);
    return {v.grid, apply_S0tau_inverse(*v.grid, tau, v.values)};
}

LogQuadVector build_log_quad(const ThetaGrid& grid) { return build_log_quad(grid.size()); }

LogQuadVector build_log_quad(int n)
{
    if (n < 1 || !is_five_smooth(static_cast<std::size_t>(n))) {
        throw std::invalid_argument("log quadrature needs n >= 1 with prime factors 2, 3, 5");
    }
    std::vector<std::complex<double>> w(2 * n, 0.0);
    for (int m = 0; m < n; ++m) {
        w[m] = (m == 0 ? 1.0 : 2.0) * s0_eigenvalue(m);
    }
    Fft(2 * n).forward(w);
    LogQuadVector q;
    q.r.resize(2 * n);
    for (int l = 0; l < 2 * n; ++l) {
        q.r[l] = -w[l].real();
    }
    return q;
}

OperatorMatrix build_S_matrix(const Arc& arc, double k, const ThetaGrid& grid)
{
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("build_S_matrix requires a finite k > 0");
    }
    const int n = grid.size();
    const LogQuadVector quad = build_log_quad(grid);
    std::vector<ArcPoint> pts(n);
    for (int j = 0; j < n; ++j) {
        pts[j] = arc.eval(grid.cos_nodes()[j]);
    }
    const auto t = grid.cos_nodes();
    const double h = pi / n;

    OperatorMatrix s{OperatorKind::S, n, k, arc, CMatrix(n, n)};
    CMatrix& a = s.entries;
    // The kernel A1 R + A2 is symmetric; fill the lower triangle and mirror.
    detail::parallel_blocks(n, 64, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            for (int j = 0; j <= i; ++j) {
                const KernelSplit ks = kernel_split(k, pts[i].point, pts[j].point, t[i], t[j], pts[i].tau);
                const std::complex<double> kernel = ks.a1 * quad.weight(i, j) + ks.a2;
                a(i, j) = h * pts[j].tau * kernel;
                a(j, i) = h * pts[i].tau * kernel;
            }
        }
    });
    return s;
}

OperatorMatrix build_Ng_matrix(const Arc& arc, double k, const ThetaGrid& grid, const OperatorMatrix* s)
{
    OperatorMatrix built_s = s ? *s : build_S_matrix(arc, k, grid);
    if (built_s.kind != OperatorKind::S || built_s.n != grid.size() || built_s.k != k) {
        throw std::invalid_argument("S matrix does not match the requested Ng matrix");
    }
    const int n = grid.size();
    std::vector<Vec2> normal(n);
    for (int j = 0; j < n; ++j) {
        normal[j] = arc.eval(grid.cos_nodes()[j]).normal;
    }
    const auto sn = grid.sin_nodes();
    OperatorMatrix ng{OperatorKind::Ng, n, k, arc, std::move(built_s.entries)};
    for (int j = 0; j < n; ++j) {
        const double col = k * k * sn[j] * sn[j];
        for (int i = 0; i < n; ++i) {
            ng.entries(i, j) *= col * dot(normal[i], normal[j]);
        }
    }
    return ng;
}

OperatorMatrix build_S0tau_matrix(const Arc& arc, const ThetaGrid& grid)
{
    const auto tau = node_speeds(arc, grid);
    CMatrix m = assemble_dense([&](const CVector& v) { return apply_S0tau(grid, tau, v); }, grid.size());
    return {OperatorKind::S0tau, grid.size(), 0.0, arc, std::move(m)};
}

namespace {

// N v = Ng v + (1/tau) (N0 v + D0 (S - S0^tau) T0^tau v). The leading part N0
// is applied in coefficient space, where the degree-n mode of T0 v survives;
// through the node samples it would vanish and N0 would lose its last mode.
CVector n_pipeline(const ThetaGrid& grid, std::span<const double> tau, const CMatrix& s, const CMatrix& ng,
                   const CVector& v)
{
    check_size(grid, v);
    const CVector t0 = apply_T0_tau(grid, tau, v);
    const CVector smooth = s * t0 - apply_S0tau(grid, tau, t0);
    CVector out = apply_D0(grid, smooth) + apply_N0(grid, v);
    for (int j = 0; j < grid.size(); ++j) {
        out[j] /= tau[j];
    }
    out.noalias() += ng * v;
    return out;
}

void check_pair(const OperatorMatrix& s, const OperatorMatrix& ng, const DensityVector& v, double k)
{
    if (s.kind != OperatorKind::S || ng.kind != OperatorKind::Ng) {
        throw std::invalid_argument("apply_N expects an S and an Ng matrix");
    }
    if (s.n != v.grid->size() || ng.n != v.grid->size() || v.values.size() != v.grid->size()) {
        throw std::invalid_argument("apply_N dimension mismatch");
    }
    if (s.k != k || ng.k != k) {
        throw std::invalid_argument("apply_N wavenumber mismatch");
    }
}

}  // namespace

DensityVector apply_N(const Arc& arc, double k, const OperatorMatrix& s, const OperatorMatrix& ng,
                      const DensityVector& v)
{
    check_pair(s, ng, v, k);
    const auto tau = node_speeds(arc, *v.grid);
    return {v.grid, n_pipeline(*v.grid, tau, s.entries, ng.entries, v.values)};
}

DensityVector apply_NS(const Arc& arc, double k, const OperatorMatrix& s, const OperatorMatrix& ng,
                       const DensityVector& v)
{
    check_pair(s, ng, v, k);
    const auto tau = node_speeds(arc, *v.grid);
    return {v.grid, n_pipeline(*v.grid, tau, s.entries, ng.entries, s.entries * v.values)};
}

struct ArcOperators::Assembled {
    Arc arc;
    double k;
    GridPtr grid;
    OperatorMatrix s;
    OperatorMatrix ng;
    double seconds;
};

ArcOperators::Assembled ArcOperators::assemble(Arc arc, double k, GridPtr grid)
{
    const auto start = std::chrono::steady_clock::now();
    OperatorMatrix s = build_S_matrix(arc, k, *grid);
    OperatorMatrix ng = build_Ng_matrix(arc, k, *grid, &s);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return {std::move(arc), k, std::move(grid), std::move(s), std::move(ng), elapsed.count()};
}

ArcOperators::ArcOperators(Arc arc, double k, GridPtr grid)
    : ArcOperators(assemble(std::move(arc), k, std::move(grid)))
{
}

ArcOperators::ArcOperators(Assembled built)
    : arc_(std::move(built.arc)),
      k_(built.k),
      grid_(std::move(built.grid)),
      tau_(node_speeds(arc_, *grid_)),
      s_(std::move(built.s)),
      ng_(std::move(built.ng)),
      assembly_seconds_(built.seconds)
{
}

CVector ArcOperators::apply_S(const CVector& v) const
{
    check_size(*grid_, v);
    return s_.entries * v;
}

CVector ArcOperators::apply_N(const CVector& v) const
{
    return n_pipeline(*grid_, tau_, s_.entries, ng_.entries, v);
}

CVector ArcOperators::apply_NS(const CVector& v) const { return apply_N(apply_S(v)); }

CVector ArcOperators::apply_S0tau_inverse(const CVector& v) const
{
    return openarc::apply_S0tau_inverse(*grid_, tau_, v);
}

CVector ArcOperators::apply_S_S0tau_inverse(const CVector& v) const
{
    return apply_S(apply_S0tau_inverse(v));
}

CMatrix assemble_dense(const LinearMap& op, int n, int cap)
{
    if (n > cap) {
        throw std::invalid_argument("dense assembly of size " + std::to_string(n) + " exceeds cap " +
                                    std::to_string(cap));
    }
    CMatrix m(n, n);
    CVector unit = CVector::Zero(n);
    for (int j = 0; j < n; ++j) {
        unit[j] = 1.0;
        const CVector column = op(unit);
        if (column.size() != n) {
            throw std::invalid_argument("operator output has the wrong length");
        }
        m.col(j) = column;
        unit[j] = 0.0;
    }
    return m;
}

}  // namespace openarc
