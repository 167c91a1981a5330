#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "bt/model.hpp"

namespace bt {

// Fourth-order stencils throughout. The classic eps^(1/3) central step
// leaves about 1e-6 relative error in B, which swamps small quadratic
// coefficients (the Hodgkin-Huxley a is ~1e-3 against O(100) entries).
MultilinearOracle::MultilinearOracle(const OdeModel& model, const Vec& x0, const Vec2& alpha0,
                                     std::optional<double> step)
    : model_(std::make_shared<OdeModel>(model)), x0_(x0), alpha0_(alpha0), n_(model.dim) {
    if (x0.size() != n_) throw std::invalid_argument("x0 has wrong dimension");
    const double eps = std::numeric_limits<double>::epsilon();
    double h = step ? *step : std::pow(eps, 1.0 / 6.0) * (1.0 + x0.norm());
    if (!(h > 0)) throw std::invalid_argument("step must be positive");
    h_ = h;
    h2_ = h;
    h3_ = h * std::pow(eps, 1.0 / 7.0 - 1.0 / 6.0);
    hj_ = h * std::pow(eps, 1.0 / 5.0 - 1.0 / 6.0);

    Vec f0 = eval_rhs(model, x0, alpha0);
    if (f0.norm() > 1e-6 * (1.0 + x0.norm()))
        throw std::invalid_argument("base point is not an equilibrium: |f| = " + std::to_string(f0.norm()));

    A.resize(n_, n_);
    for (int j = 0; j < n_; ++j) A.col(j) = jx(Vec::Unit(n_, j));
    J1.resize(n_, 2);
    for (int j = 0; j < 2; ++j) J1.col(j) = ja(Vec2::Unit(j));
}

Vec MultilinearOracle::F(const Vec& z) const {
    Vec2 a = alpha0_ + z.tail<2>();
    return eval_rhs(*model_, x0_ + z.head(n_), a);
}

Vec MultilinearOracle::jx(const Vec& q) const {
    Vec z = Vec::Zero(n_ + 2);
    z.head(n_) = q;
    const double h = hj_;
    return (-F(2 * h * z) + 8 * F(h * z) - 8 * F(-h * z) + F(-2 * h * z)) / (12 * h);
}

Vec MultilinearOracle::ja(const Vec2& p) const {
    Vec z = Vec::Zero(n_ + 2);
    z.tail<2>() = p;
    const double h = hj_;
    return (-F(2 * h * z) + 8 * F(h * z) - 8 * F(-h * z) + F(-2 * h * z)) / (12 * h);
}

// Second directional derivative along u in joint space.
Vec MultilinearOracle::d2(const Vec& u) const {
    double nu = u.norm();
    if (nu == 0) return Vec::Zero(n_);
    Vec d = u / nu;
    const double h = h2_;
    Vec r = (-F(2 * h * d) + 16 * F(h * d) - 30 * F(0 * d) + 16 * F(-h * d) - F(-2 * h * d)) / (12 * h * h);
    return nu * nu * r;
}

Vec MultilinearOracle::d3(const Vec& u) const {
    double nu = u.norm();
    if (nu == 0) return Vec::Zero(n_);
    Vec d = u / nu;
    const double h = h3_;
    Vec r = (-F(3 * h * d) + 8 * F(2 * h * d) - 13 * F(h * d) + 13 * F(-h * d) - 8 * F(-2 * h * d) + F(-3 * h * d)) /
            (8 * h * h * h);
    return nu * nu * nu * r;
}

namespace {
// Lexicographic order on directions; polarizing in sorted order makes the
// forms symmetric bit for bit.
bool before(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}
}  // namespace

Vec MultilinearOracle::bil(const Vec& u0, const Vec& v0) const {
    if (u0.isZero(0) || v0.isZero(0)) return Vec::Zero(n_);
    const Vec& u = before(u0, v0) ? u0 : v0;
    const Vec& v = before(u0, v0) ? v0 : u0;
    return (d2(u + v) - d2(u - v)) / 4.0;
}

Vec MultilinearOracle::tri(const Vec& a, const Vec& b, const Vec& c) const {
    if (a.isZero(0) || b.isZero(0) || c.isZero(0)) return Vec::Zero(n_);
    const Vec* s[3] = {&a, &b, &c};
    std::sort(s, s + 3, [](const Vec* x, const Vec* y) { return before(*x, *y); });
    const Vec &u = *s[0], &v = *s[1], &w = *s[2];
    return (d3(u + v + w) - d3(u + v - w) - d3(u - v + w) + d3(u - v - w)) / 24.0;
}

namespace {
Vec xs(const Vec& q) {
    Vec z = Vec::Zero(q.size() + 2);
    z.head(q.size()) = q;
    return z;
}
Vec ps(int n, const Vec2& p) {
    Vec z = Vec::Zero(n + 2);
    z.tail<2>() = p;
    return z;
}
}  // namespace

Vec MultilinearOracle::B(const Vec& q, const Vec& r) const { return bil(xs(q), xs(r)); }
Vec MultilinearOracle::C(const Vec& q, const Vec& r, const Vec& s) const { return tri(xs(q), xs(r), xs(s)); }
Vec MultilinearOracle::A1(const Vec& q, const Vec2& p) const { return bil(xs(q), ps(n_, p)); }
Vec MultilinearOracle::J2(const Vec2& p, const Vec2& r) const { return bil(ps(n_, p), ps(n_, r)); }
Vec MultilinearOracle::B1(const Vec& q, const Vec& r, const Vec2& p) const {
    return tri(xs(q), xs(r), ps(n_, p));
}
Vec MultilinearOracle::A2(const Vec& q, const Vec2& p, const Vec2& r) const {
    return tri(xs(q), ps(n_, p), ps(n_, r));
}
Vec MultilinearOracle::J3(const Vec2& p, const Vec2& r, const Vec2& s) const {
    return tri(ps(n_, p), ps(n_, r), ps(n_, s));
}

double MultilinearOracle::step_halving_defect(int probes, unsigned seed) const {
    MultilinearOracle half(*model_, x0_, alpha0_, h_ / 2);
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    double worst = 0;
    for (int k = 0; k < probes; ++k) {
        Vec q(n_);
        for (int i = 0; i < n_; ++i) q[i] = nd(gen);
        Vec b1 = B(q, q), b2 = half.B(q, q);
        double scale = std::max(b1.norm(), 1e-300);
        worst = std::max(worst, (b1 - b2).norm() / scale);
    }
    return worst;
}

}  // namespace bt
