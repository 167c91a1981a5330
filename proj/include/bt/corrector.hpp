#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

#include "bt/predictor.hpp"

namespace bt {

using SpMat = Eigen::SparseMatrix<double>;

// Truncated homoclinic defining system on [0,1] with time scaled by 2T.
// Unknown layout: fine-mesh orbit values, s0, alpha, Y_U (nS x nU, column
// major), Y_S (nU x nS), eps0, eps1.
struct HomBvp {
    OdeModel model;
    Mesh mesh;
    int n = 0, nU = 0, nS = 0;
    double T = 0;
    // reference orbit for the phase condition, at Gauss points
    std::vector<Vec> ref_g, ref_dot_g;
    // orthonormal bases, unstable (resp. stable) directions first
    Mat Q0, QS0;
    // Lagrange values and derivatives of the ncol+1 equidistant nodes at the Gauss points
    Mat Lv, Ld;

    int npts() const { return mesh.npoints(); }
    int ix(int i) const { return i * n; }
    int is0() const { return npts() * n; }
    int ialpha() const { return is0() + n; }
    int iYU() const { return ialpha() + 2; }
    int iYS() const { return iYU() + nS * nU; }
    int ieps() const { return iYS() + nU * nS; }
    int unknowns() const { return ieps() + 2; }
    int equations() const { return unknowns() - 1; }
};

// Splits the spectrum of f_x(s0, alpha) at the predicted saddle.
HomBvp build_bvp(const OdeModel& model, const HomPredictor& pred);
// Unknown vector of the predictor with Y_U = Y_S = 0.
Vec predictor_unknowns(const HomBvp& bvp, const HomPredictor& pred);

Vec bvp_residual(const HomBvp& bvp, const Vec& z);
SpMat bvp_jacobian(const HomBvp& bvp, const Vec& z);

std::vector<Vec> bvp_orbit(const HomBvp& bvp, const Vec& z);
Vec2 bvp_alpha(const HomBvp& bvp, const Vec& z);
Vec bvp_saddle(const HomBvp& bvp, const Vec& z);

struct NewtonOptions {
    int max_iter = 20;
    double tol = 1e-10;
};

struct NewtonResult {
    Vec z;
    Vec tangent;  // unit null vector of the Jacobian at z
    int iterations = 0;
    double residual = 0;  // max norm
};

// Moore-Penrose Newton onto the one-dimensional solution set. Throws NoConvergence.
NewtonResult newton_correct(const HomBvp& bvp, const Vec& z0, const NewtonOptions& opt = {});

// Tangent flipped so that its alpha1 component follows d alpha1/d eps.
Vec oriented_tangent(const HomBvp& bvp, const NewtonResult& r, const CmExpansion& cm, const PredictorOptions& opt,
                     double eps);

struct AutoCorrectOptions {
    double eps = 0.1;
    double k_factor = 1e-4;  // k = k_factor * eps
    int max_tries = 8;
    Mesh mesh = Mesh::uniform(40, 4);
    NewtonOptions newton;
};

struct HomSolution {
    HomPredictor predictor;
    HomBvp bvp;
    NewtonResult newton;
    Vec tangent;
    int halvings = 0;
};

// Predict and correct, halving eps on failure.
HomSolution predict_and_correct(const OdeModel& model, const CmExpansion& cm, const PredictorOptions& opt,
                                const AutoCorrectOptions& ao = {});

// ||X_pred - X_corr|| / ||X_corr|| over all fine-mesh orbit values.
double relative_orbit_error(const std::vector<Vec>& pred, const std::vector<Vec>& corr);

struct ConvergenceRecord {
    std::string model, method, variant;
    int order = 0;
    double amplitude = 0, eps = 0, delta = 0;
    int iterations = 0;
    bool converged = false;
};

struct StudyCell {
    std::string label;  // method column of the CSV
    PredictorOptions options;
};

struct StudyOptions {
    Mesh mesh = Mesh::uniform(40, 4);
    double k_ratio = 1e-4;  // k = k_ratio * A0
    NewtonOptions newton;
    int threads = 0;  // 0: hardware concurrency
};

std::vector<ConvergenceRecord> convergence_study(const OdeModel& model, const CmExpansion& cm,
                                                 const std::vector<StudyCell>& cells,
                                                 const std::vector<double>& amplitudes, const StudyOptions& so);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord>& recs);

// Least-squares slope of log(delta) against log(A0) over converged records.
double fitted_slope(const std::vector<ConvergenceRecord>& recs);

}  // namespace bt
