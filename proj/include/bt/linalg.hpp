#pragma once

#include "bt/errors.hpp"
#include "bt/model.hpp"

namespace bt {

struct BTData {
    Vec x0;
    Vec2 alpha0;
    Vec q0, q1, p1, p0;  // p's stored as column vectors, used as rows
    double a = 0, b = 0;
};

struct EigenStructure {
    Vec q0, q1, p1, p0;
};

// Throws NotBT when the zero eigenvalue is simple, semisimple or of
// higher algebraic multiplicity than two.
EigenStructure bt_eigenstructure(const Mat& A);

struct BorderedResult {
    Vec x;
    double s = 0;
};

// Factors [[A, p1^T], [q0^T, 0]] once for repeated right-hand sides.
class BorderedSolver {
public:
    BorderedSolver(const Mat& A, const Vec& p1, const Vec& q0);
    BorderedResult solve(const Vec& y) const;
    Vec solve_checked(const Vec& y, double tol = 1e-6) const;

private:
    Eigen::PartialPivLU<Mat> lu_;
    int n_;
};

// Solve [[A, p1^T], [q0^T, 0]] [x; s] = [y; 0].
BorderedResult bordered_solve_raw(const Mat& A, const Vec& p1, const Vec& q0, const Vec& y);
// Same, but throws InconsistentSystem when |s| > tol*|y|.
Vec bordered_solve(const Mat& A, const Vec& p1, const Vec& q0, const Vec& y, double tol = 1e-6);

// Residual certificates for BTData (max of the listed invariants).
struct EigenResiduals {
    double Aq0, Aq1, p1A, p0A, biorth, norm;
};
EigenResiduals eigen_residuals(const Mat& A, const EigenStructure& e);

}  // namespace bt
