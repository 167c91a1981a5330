#include "bt/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace bt {

namespace {

Mat bordered(const Mat& A, const Vec& col, const Vec& row) {
    const int n = static_cast<int>(A.rows());
    Mat M = Mat::Zero(n + 1, n + 1);
    M.topLeftCorner(n, n) = A;
    M.block(0, n, n, 1) = col;
    M.block(n, 0, 1, n) = row.transpose();
    return M;
}

void fix_sign(Vec& q) {
    const double thr = 1e-10 * q.norm();
    for (int i = 0; i < q.size(); ++i) {
        if (std::abs(q[i]) > thr) {
            if (q[i] < 0) q = -q;
            return;
        }
    }
}

}  // namespace

EigenStructure bt_eigenstructure(const Mat& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || n < 2) throw std::invalid_argument("square matrix of size >= 2 required");
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const double nA = sv[0];
    if (!(nA > 0)) throw NotBT("zero matrix: rank deficiency beyond two");
    if (sv[n - 1] > 1e-6 * nA) throw NotBT("no zero eigenvalue (smallest singular value " + std::to_string(sv[n - 1]) + ")");
    if (sv[n - 2] < 1e-6 * nA) throw NotBT("zero eigenvalue is semisimple or kernel has dimension > 1");

    // Jordan chain: A^2 must lose exactly one more rank than A.
    Eigen::JacobiSVD<Mat> svd2(A * A);
    const Vec& s2 = svd2.singularValues();
    const double tol2 = 1e-8 * nA * nA;
    if (s2[n - 2] > tol2) throw NotBT("zero eigenvalue is simple (no Jordan block)");
    if (n >= 3 && s2[n - 3] < tol2) throw NotBT("degenerate: zero eigenvalue of multiplicity > 2");

    EigenStructure e;
    e.q0 = svd.matrixV().col(n - 1);
    fix_sign(e.q0);
    e.p1 = svd.matrixU().col(n - 1);

    Eigen::PartialPivLU<Mat> lu(bordered(A, e.p1, e.q0));
    Vec rhs = Vec::Zero(n + 1);
    rhs.head(n) = e.q0;
    e.q1 = lu.solve(rhs).head(n);
    double pq = e.p1.dot(e.q1);
    if (std::abs(pq) < 1e-14) throw NotBT("no generalized eigenvector");
    e.p1 /= pq;

    Eigen::PartialPivLU<Mat> lut(bordered(A.transpose(), e.q0, e.p1));
    rhs.head(n) = e.p1;
    e.p0 = lut.solve(rhs).head(n);
    e.p0 -= e.p0.dot(e.q1) * e.p1;
    return e;
}

BorderedSolver::BorderedSolver(const Mat& A, const Vec& p1, const Vec& q0) : n_(static_cast<int>(A.rows())) {
    Mat M = bordered(A, p1, q0);
    lu_.compute(M);
    if (!(lu_.rcond() > 1e-14)) throw SingularSystem("bordered matrix is singular");
}

BorderedResult BorderedSolver::solve(const Vec& y) const {
    Vec rhs = Vec::Zero(n_ + 1);
    rhs.head(n_) = y;
    Vec z = lu_.solve(rhs);
    return {z.head(n_), z[n_]};
}

Vec BorderedSolver::solve_checked(const Vec& y, double tol) const {
    BorderedResult r = solve(y);
    if (std::abs(r.s) > tol * std::max(y.norm(), 1e-300) && std::abs(r.s) > 1e-300)
        throw InconsistentSystem("right-hand side violates the solvability condition (s = " + std::to_string(r.s) +
                                 ", |y| = " + std::to_string(y.norm()) + ")");
    return r.x;
}

BorderedResult bordered_solve_raw(const Mat& A, const Vec& p1, const Vec& q0, const Vec& y) {
    return BorderedSolver(A, p1, q0).solve(y);
}

Vec bordered_solve(const Mat& A, const Vec& p1, const Vec& q0, const Vec& y, double tol) {
    return BorderedSolver(A, p1, q0).solve_checked(y, tol);
}

EigenResiduals eigen_residuals(const Mat& A, const EigenStructure& e) {
    EigenResiduals r;
    r.Aq0 = (A * e.q0).norm();
    r.Aq1 = (A * e.q1 - e.q0).norm();
    r.p1A = (A.transpose() * e.p1).norm();
    r.p0A = (A.transpose() * e.p0 - e.p1).norm();
    r.biorth = std::max({std::abs(e.p0.dot(e.q0) - 1), std::abs(e.p0.dot(e.q1)), std::abs(e.p1.dot(e.q0)),
                         std::abs(e.p1.dot(e.q1) - 1)});
    r.norm = std::max(std::abs(e.q0.squaredNorm() - 1), std::abs(e.q1.dot(e.q0)));
    return r;
}

}  // namespace bt
