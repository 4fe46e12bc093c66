#pragma once

// Independent reference computations used by unit and acceptance tests.
// None of these call into the library's linear-algebra paths.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

// Minimum-norm solution of the normal equations A^T A x = A^T b without an
// SVD: a particular solution from full-pivot LU, then projection of that
// point onto the orthogonal complement of null(A^T A).
inline Eigen::VectorXd min_norm_by_projection(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::MatrixXd M = A.transpose() * A;
    const Eigen::VectorXd d = A.transpose() * b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-10);
    const Eigen::VectorXd xp = lu.solve(d);
    const Eigen::MatrixXd N = lu.kernel();
    if (lu.rank() == M.cols()) return xp;
    const Eigen::MatrixXd NtN = N.transpose() * N;
    return xp - N * NtN.ldlt().solve(N.transpose() * xp);
}

// KKT system for min ||x||^2 s.t. A x = b, valid when A has full row rank.
inline Eigen::VectorXd min_norm_by_kkt(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const auto m = A.rows();
    const auto n = A.cols();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = 2.0 * Eigen::MatrixXd::Identity(n, n);
    K.topRightCorner(n, m) = A.transpose();
    K.bottomLeftCorner(m, n) = A;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
    rhs.tail(m) = b;
    return K.fullPivLu().solve(rhs).head(n);
}

// Scalar recursion for f(x) = 0.5 * mu * (x - t)^2 in one dimension,
// written out from the update formula with no library code.
struct ScalarRun {
    double alpha, q, c, p, lambda, delta;
    double mu, target;

    // Returns x_k for k = 0..n.
    std::vector<double> iterate(double x0, double x1, long n) const {
        std::vector<double> xs{x0, x1};
        for (long k = 1; k < n; ++k) {
            const double kd = static_cast<double>(k);
            const double ak = 1.0 - alpha / std::pow(kd, q);
            const double ck = c / std::pow(kd, p);
            const double lk = lambda * std::pow(kd, delta);
            const double xk = xs[k];
            const double z = xk + ak * (xk - xs[k - 1]) - ck * xk;
            xs.push_back((z + lk * mu * target) / (1.0 + lk * mu));
        }
        return xs;
    }
};

inline Eigen::MatrixXd random_rank_deficient(std::mt19937_64& rng, int rows, int cols, int rank) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd B(rows, rank), C(rank, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rank; ++j) B(i, j) = nd(rng);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < cols; ++j) C(i, j) = nd(rng);
    return B * C;
}

} // namespace oracle
