#include "openarc/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace openarc {

namespace {

using Complex = std::complex<double>;

// Givens rotation zeroing b in (a, b): [c s; -conj(s) c] with real c.
void make_rotation(Complex a, Complex b, double& c, Complex& s)
{
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (abs_a == 0.0) {
        c = 0.0;
        s = std::conj(b) / abs_b;
        return;
    }
    const double r = std::hypot(abs_a, abs_b);
    c = abs_a / r;
    s = (a / abs_a) * std::conj(b) / r;
}

}  // namespace

GmresResult gmres(const LinearAction& apply, const Eigen::VectorXcd& b, double tol, int maxit)
{
    const auto start = std::chrono::steady_clock::now();
    const double b_norm = b.norm();
    if (!(b_norm > 0.0)) {
        throw std::invalid_argument("gmres: right-hand side must be nonzero");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::invalid_argument("gmres: tolerance must lie in (0, 1)");
    }
    if (maxit < 1) {
        throw std::invalid_argument("gmres: maxit must be positive");
    }
    const Eigen::Index n = b.size();

    std::vector<Eigen::VectorXcd> basis;
    basis.reserve(std::min<Eigen::Index>(maxit, n) + 1);
    basis.push_back(b / b_norm);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(maxit + 1, maxit);
    std::vector<double> cs(maxit);
    std::vector<Complex> sn(maxit);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(maxit + 1);
    g[0] = b_norm;

    SolveReport report;
    report.n = static_cast<int>(n);
    int k = 0;
    for (; k < maxit; ++k) {
        Eigen::VectorXcd w = apply(basis[k]);
        if (w.size() != n || !w.allFinite()) {
            throw std::runtime_error("gmres: operator produced non-finite values at iteration " +
                                     std::to_string(k + 1));
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= k; ++i) {
                const Complex proj = basis[i].dot(w);
                h(i, k) += proj;
                w -= proj * basis[i];
            }
        }
        const double w_norm = w.norm();
        h(k + 1, k) = w_norm;

        for (int i = 0; i < k; ++i) {
            const Complex upper = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
            h(i + 1, k) = -std::conj(sn[i]) * h(i, k) + cs[i] * h(i + 1, k);
            h(i, k) = upper;
        }
        make_rotation(h(k, k), h(k + 1, k), cs[k], sn[k]);
        h(k, k) = cs[k] * h(k, k) + sn[k] * h(k + 1, k);
        h(k + 1, k) = 0.0;
        g[k + 1] = -std::conj(sn[k]) * g[k];
        g[k] = cs[k] * g[k];

        const double residual = std::abs(g[k + 1]) / b_norm;
        report.residuals.push_back(residual);
        const bool breakdown = w_norm <= 1e-14 * b_norm;
        if (residual <= tol || breakdown) {
            report.converged = true;
            ++k;
            break;
        }
        basis.push_back(w / w_norm);
    }
    report.iterations = k;

    // Back substitution on the rotated upper-triangular system.
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(k);
    for (int i = k - 1; i >= 0; --i) {
        Complex sum = g[i];
        for (int j = i + 1; j < k; ++j) {
            sum -= h(i, j) * y[j];
        }
        y[i] = sum / h(i, i);
    }
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < k; ++i) {
        x += y[i] * basis[i];
    }
    report.true_residual = (b - apply(x)).norm() / b_norm;
    if (!report.converged && report.true_residual <= tol) {
        report.converged = true;
    }
    report.elapsed = std::chrono::steady_clock::now() - start;
    return {std::move(x), std::move(report)};
}

std::vector<std::complex<double>> eig_dense(const Eigen::MatrixXcd& a, int cap)
{
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("eig_dense: matrix must be square");
    }
    if (a.rows() > cap) {
        throw std::invalid_argument("eig_dense: size exceeds cap");
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_dense: QR iteration did not converge");
    }
    const Eigen::VectorXcd values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

}  // namespace openarc
