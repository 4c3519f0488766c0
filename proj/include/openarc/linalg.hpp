#pragma once

#include <chrono>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace openarc {

struct SolveReport {
    int iterations = 0;
    /// Relative residual ||b - A x_i|| / ||b|| after each iteration, from the
    /// least-squares recurrence.
    std::vector<double> residuals;
    bool converged = false;
    /// Explicitly recomputed relative residual of the returned x.
    double true_residual = 0.0;
    std::chrono::duration<double> elapsed{0.0};
    int n = 0;
};

struct GmresResult {
    Eigen::VectorXcd x;
    SolveReport report;
};

using LinearAction = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/**
 * Full (non-restarted) GMRES from x0 = 0. Arnoldi uses modified Gram-Schmidt
 * with one reorthogonalization pass; the Hessenberg least-squares problem is
 * updated with Givens rotations.
 *
 * Stops when the relative residual is <= tol, after maxit iterations, or on
 * happy breakdown. Throws std::invalid_argument for b = 0 or tol outside
 * (0, 1), and std::runtime_error when the action produces non-finite values.
 */
GmresResult gmres(const LinearAction& apply, const Eigen::VectorXcd& b, double tol, int maxit);

/// All eigenvalues of a square complex matrix (Hessenberg reduction and
/// shifted QR). Throws std::runtime_error if QR does not converge.
std::vector<std::complex<double>> eig_dense(const Eigen::MatrixXcd& a, int cap = 4096);

}  // namespace openarc
