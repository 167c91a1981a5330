#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bt/expr.hpp"

namespace bt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

struct OdeModel {
    int dim = 0;
    std::vector<ExprPtr> rhs;
    std::array<std::string, 2> active_params;
    std::map<std::string, double> fixed_params;
    std::string name;
    std::vector<Program> programs;  // compiled rhs, same order
};

OdeModel parse_model(const std::string& text, const std::string& name = "model");
OdeModel load_model_file(const std::string& path);

Vec eval_rhs(const OdeModel& model, const Vec& x, const Vec2& alpha);

// Jacobians by fourth-order central differences at an arbitrary point.
Mat jacobian_x(const OdeModel& model, const Vec& x, const Vec2& alpha, double h = 0.0);
Mat jacobian_alpha(const OdeModel& model, const Vec& x, const Vec2& alpha, double h = 0.0);

// Built-in models. bt_nf is the smooth normal form with an optional
// c1*alpha2^3 term; a=b=1 and the rest zero gives the topological normal form.
struct BtNfParams {
    double a = 1, b = 1, c1 = 0, d = 0, e = 0, a1 = 0, b1 = 0;
};
OdeModel builtin_bt_nf(const BtNfParams& p);
OdeModel builtin_hh();

struct BtPoint {
    Vec x0;
    Vec2 alpha0;
};
// Refined BT point of the Hodgkin-Huxley model (see README).
BtPoint hh_bt_point();
// The point as printed in the literature; a fold, not BT, at this precision.
BtPoint hh_printed_point();

// Resolve "bt_nf" (with params), "hh", or a file path.
OdeModel resolve_model(const std::string& spec, const BtNfParams& p = {});

// Newton polish of an equilibrium in x only (alpha held fixed).
Vec polish_equilibrium(const OdeModel& model, const Vec& x0, const Vec2& alpha, double tol = 1e-14, int maxit = 30);

class MultilinearOracle {
public:
    MultilinearOracle(const OdeModel& model, const Vec& x0, const Vec2& alpha0,
                      std::optional<double> step = std::nullopt);

    const Vec& x0() const { return x0_; }
    const Vec2& alpha0() const { return alpha0_; }
    double h() const { return h_; }
    int dim() const { return n_; }
    const OdeModel& model() const { return *model_; }

    Mat A, J1;

    Vec B(const Vec& q, const Vec& r) const;
    Vec C(const Vec& q, const Vec& r, const Vec& s) const;
    Vec A1(const Vec& q, const Vec2& p) const;
    Vec J2(const Vec2& p, const Vec2& r) const;
    Vec B1(const Vec& q, const Vec& r, const Vec2& p) const;
    Vec A2(const Vec& q, const Vec2& p, const Vec2& r) const;
    Vec J3(const Vec2& p, const Vec2& r, const Vec2& s) const;

    Vec f(const Vec& x, const Vec2& alpha) const { return eval_rhs(*model_, x, alpha); }

    // Largest relative change of B(q,q) on pseudo-random probes when the
    // step is halved. Used for the accuracy warning.
    double step_halving_defect(int probes = 10, unsigned seed = 7) const;

private:
    Vec F(const Vec& z) const;  // joint (x, alpha) displacement
    Vec d2(const Vec& u) const;
    Vec d3(const Vec& u) const;
    Vec bil(const Vec& u, const Vec& v) const;
    Vec tri(const Vec& u, const Vec& v, const Vec& w) const;
    Vec jx(const Vec& q) const;
    Vec ja(const Vec2& p) const;

    std::shared_ptr<const OdeModel> model_;
    Vec x0_;
    Vec2 alpha0_;
    int n_;
    double h_, h2_, h3_, hj_;
};

}  // namespace bt
