#pragma once

// Thin LAPACKE helpers local to the library. Column-major throughout.

#include <lapacke.h>

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace wavelab::lina {

// all eigenvalues of a symmetric matrix, ascending; A is not modified
inline std::vector<double> sym_eigenvalues(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd work = A;
    const lapack_int n = static_cast<lapack_int>(A.rows());
    std::vector<double> w(n);
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
    return w;
}

// smallest eigenvalue of the symmetric-definite pencil (A, B), B > 0
inline double sym_generalized_min_eig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::MatrixXd wa = A, wb = B;
    const lapack_int n = static_cast<lapack_int>(A.rows());
    std::vector<double> w(n);
    lapack_int info = LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'N', 'L', n, wa.data(), n,
                                     wb.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsygvd failed, info=" + std::to_string(info));
    return w[0];
}

// dense LU with partial pivoting; reusable solves
class Lu {
  public:
    explicit Lu(Eigen::MatrixXd A) : a_(std::move(A)), piv_(a_.rows()) {
        const lapack_int n = static_cast<lapack_int>(a_.rows());
        lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, a_.data(), n, piv_.data());
        if (info != 0) throw std::runtime_error("dgetrf failed, info=" + std::to_string(info));
    }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = b;
        const lapack_int n = static_cast<lapack_int>(a_.rows());
        lapack_int info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, a_.data(), n,
                                         piv_.data(), x.data(), n);
        if (info != 0) throw std::runtime_error("dgetrs failed, info=" + std::to_string(info));
        return x;
    }

  private:
    Eigen::MatrixXd a_;
    std::vector<lapack_int> piv_;
};

// orthonormal basis of the complement of the column span of U (full QR)
inline Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& U) {
    const lapack_int m = static_cast<lapack_int>(U.rows());
    const lapack_int k = static_cast<lapack_int>(U.cols());
    Eigen::MatrixXd q(m, m);
    q.setZero();
    q.leftCols(k) = U;
    std::vector<double> tau(k);
    lapack_int info = LAPACKE_dgeqrf(LAPACK_COL_MAJOR, m, k, q.data(), m, tau.data());
    if (info != 0) throw std::runtime_error("dgeqrf failed");
    info = LAPACKE_dorgqr(LAPACK_COL_MAJOR, m, m, k, q.data(), m, tau.data());
    if (info != 0) throw std::runtime_error("dorgqr failed");
    return q.rightCols(m - k);
}

}  // namespace wavelab::lina
