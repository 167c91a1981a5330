#include "bt/nfcoeffs.hpp"

#include <cmath>
#include <functional>

namespace bt {

const char* variant_name(Variant v) {
    switch (v) {
    case Variant::Orbital: return "orbital";
    case Variant::Smooth: return "smooth";
    case Variant::Hyper: return "hyper";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "orbital") return Variant::Orbital;
    if (s == "smooth") return Variant::Smooth;
    if (s == "hyper") return Variant::Hyper;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

Vec2 critical_coefficients(const MultilinearOracle& o, const EigenStructure& e) {
    Vec B00 = o.B(e.q0, e.q0), B01 = o.B(e.q0, e.q1);
    double a = 0.5 * e.p1.dot(B00);
    double b = e.p1.dot(B01) + e.p0.dot(B00);
    double scale = 1.0 + B00.norm() + B01.norm();
    if (std::abs(a) <= 1e-10 * scale || std::abs(b) <= 1e-10 * scale)
        throw NonGenericBT("degenerate BT point: a = " + std::to_string(a) + ", b = " + std::to_string(b));
    return {a, b};
}

BTData analyze_bt(const MultilinearOracle& o) {
    EigenStructure e = bt_eigenstructure(o.A);
    Vec2 ab = critical_coefficients(o, e);
    Vec nu = o.J1.transpose() * e.p1;
    if (nu.norm() <= 1e-10) throw NonGenericBT("transversality fails: p1 J1 = 0");
    BTData bt;
    bt.x0 = o.x0();
    bt.alpha0 = o.alpha0();
    bt.q0 = e.q0;
    bt.q1 = e.q1;
    bt.p1 = e.p1;
    bt.p0 = e.p0;
    bt.a = ab[0];
    bt.b = ab[1];
    return bt;
}

namespace {

// Solves a stage whose Fredholm conditions are affine in k unknowns.
// cond(u) assembles all coefficients for the trial u and returns p1.rhs.
Vec solve_affine(int k, const std::function<Vec(const Vec&)>& cond, const char* what) {
    Vec u = Vec::Zero(k);
    Vec r0 = cond(u);
    Mat M(k, k);
    for (int j = 0; j < k; ++j) {
        Vec uj = Vec::Zero(k);
        uj[j] = 1.0;
        M.col(j) = cond(uj) - r0;
    }
    Eigen::FullPivLU<Mat> lu(M);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-300)
        throw SingularSystem(std::string("singular solvability system for ") + what);
    u = lu.solve(-r0);
    // finite-difference forms are linear only up to truncation error
    for (int it = 0; it < 2; ++it) {
        Vec r = cond(u);
        u -= lu.solve(r);
    }
    cond(u);
    return u;
}

struct Chain {
    const MultilinearOracle& o;
    const BTData& bt;
    Variant var;
    BorderedSolver S;
    CmExpansion& cm;
    const Vec &q0, &q1, &p1;
    double a, b;
    Vec2 K10hat, K01hat;

    Chain(const MultilinearOracle& o_, const BTData& bt_, Variant v, CmExpansion& cm_)
        : o(o_), bt(bt_), var(v), S(o_.A, bt_.p1, bt_.q0), cm(cm_), q0(bt_.q0), q1(bt_.q1), p1(bt_.p1),
          a(bt_.a), b(bt_.b) {
        Vec2 nu = o.J1.transpose() * p1;
        K10hat = nu / nu.squaredNorm();
        K01hat << -K10hat[1], K10hat[0];
    }

    Vec inv(const Vec& y) const { return -S.solve(y).x; }

    bool orbital() const { return var == Variant::Orbital; }

    // w0^2, w0 w1 and w1^2 plus w0^3; unknowns (gamma1, theta1000 | d).
    Vec rhs0200, rhs3000, rhs2100;
    void quadratic(double g1, double th_or_d, double g2) {
        if (orbital()) cm.theta1000 = th_or_d;
        else cm.d = th_or_d;
        cm.gamma1 = g1;
        cm.gamma2 = g2;
        const double th = cm.theta1000;
        cm.H2000 = inv(o.B(q0, q0) - 2 * a * q1) + g1 * q0;
        cm.H1100 = inv(o.B(q0, q1) - b * q1 + th * q0 - cm.H2000) + g2 * q0;
        rhs0200 = o.B(q1, q1) - 2 * cm.H1100;
        rhs3000 = 3 * o.B(cm.H2000, q0) + o.C(q0, q0, q0) + 6 * a * th * q1 - 6 * a * cm.H1100 - 6 * cm.d * q1;
    }
    void cubic(double g2_or_e) {
        if (var == Variant::Smooth) cm.e = g2_or_e;
        else cm.gamma2 = g2_or_e;
        quadratic(cm.gamma1, orbital() ? cm.theta1000 : cm.d, cm.gamma2);
        const double th = cm.theta1000;
        cm.H0200 = inv(rhs0200);
        cm.H3000 = inv(rhs3000);
        rhs2100 = -2 * cm.e * q1 - 2 * a * cm.H0200 - 2 * b * cm.H1100 - cm.H3000 + 2 * o.B(cm.H1100, q0) +
                  o.B(cm.H2000, q1) + 2 * th * (b * q1 - th * q0 + cm.H2000) + o.C(q0, q0, q1);
    }

    // Linear in beta: unknowns (delta1, g = delta1 gamma3), then (delta2, gamma4').
    Vec rhs1001, rhs0101, rhs1010, rhs0110;
    double gq = 0, g4p = 0;
    void beta2_linear(double d1, double g) {
        cm.delta1 = d1;
        gq = g;
        cm.K01 = d1 * K01hat;
        cm.H0001 = inv(o.J1 * cm.K01) + g * q0;
        rhs1001 = o.B(cm.H0001, q0) + o.A1(q0, cm.K01);
        cm.H1001 = inv(rhs1001) + cm.gamma5 * q0;
        rhs0101 = o.B(cm.H0001, q1) + o.A1(q1, cm.K01) - cm.H1001 - q1 + cm.theta0001 * q0;
    }
    void beta1_linear(double d2, double g4) {
        cm.delta2 = d2;
        g4p = g4;
        cm.K10 = K10hat + d2 * cm.K01;
        cm.H0010 = inv(o.J1 * cm.K10 - q1) + g4 * q0;
        rhs1010 = o.B(cm.H0010, q0) + o.A1(q0, cm.K10) - cm.H1100 + cm.theta1000 * q1;
        cm.H1010 = inv(rhs1010);
        rhs0110 = o.B(cm.H0010, q1) + o.A1(q1, cm.K10) - cm.H0200 - cm.H1010;
    }

    // w0^2 beta2 and w0 w1 beta2.
    Vec rhs2001, rhs1101;
    void mixed(const Vec& u) {
        switch (var) {
        case Variant::Orbital: cm.gamma5 = u[0]; cm.theta0001 = u[1]; break;
        case Variant::Hyper: cm.gamma5 = u[0]; cm.a1 = u[1]; break;
        case Variant::Smooth: cm.a1 = u[0]; cm.b1 = u[1]; break;
        }
        const double th1 = cm.theta1000, th2 = cm.theta0001;
        beta2_linear(cm.delta1, gq);
        cm.H0101 = inv(rhs0101);
        rhs2001 = -2 * cm.a1 * q1 - 2 * a * cm.H0101 + o.A1(cm.H2000, cm.K01) + o.B(cm.H0001, cm.H2000) +
                  2 * o.B(cm.H1001, q0) + 2 * a * th2 * q1 + o.B1(q0, q0, cm.K01) + o.C(cm.H0001, q0, q0);
        cm.H2001 = inv(rhs2001);
        rhs1101 = -cm.b1 * q1 - b * cm.H0101 - cm.H1100 - cm.H2001 + o.A1(cm.H1100, cm.K01) +
                  th1 * (cm.H1001 + q1 - th2 * q0) + o.B(cm.H0001, cm.H1100) + o.B(cm.H0101, q0) +
                  o.B(cm.H1001, q1) + th2 * (cm.H2000 + b * q1 - th1 * q0) + o.B1(q0, q1, cm.K01) +
                  o.C(cm.H0001, q0, q1);
    }

    Vec rhs0011;
    void beta12(double k) {
        cm.K11 = k * cm.K10;
        rhs0011 = o.J1 * cm.K11 + o.A1(cm.H0001, cm.K10) + o.A1(cm.H0010, cm.K01) + o.B(cm.H0001, cm.H0010) +
                  o.J2(cm.K01, cm.K10) + cm.theta0001 * q1 - cm.H0101;
    }

    Vec rhs0002, rhs1002, rhs0102;
    double g6p = 0;
    void beta22(const Vec& u) {
        cm.K02 = u[0] * cm.K10 + u[1] * cm.K01;
        cm.delta3 = u[1];
        g6p = u[2];
        const double th2 = cm.theta0001;
        rhs0002 = o.J1 * cm.K02 + 2 * o.A1(cm.H0001, cm.K01) + o.B(cm.H0001, cm.H0001) + o.J2(cm.K01, cm.K01);
        cm.H0002 = inv(rhs0002) + g6p * q0;
        rhs1002 = 2 * o.A1(cm.H1001, cm.K01) + o.A1(q0, cm.K02) + o.A2(q0, cm.K01, cm.K01) + o.B(q0, cm.H0002) +
                  2 * o.B(cm.H0001, cm.H1001) + 2 * o.B1(q0, cm.H0001, cm.K01) + o.C(q0, cm.H0001, cm.H0001);
        cm.H1002 = inv(rhs1002);
        rhs0102 = 2 * o.A1(cm.H0101, cm.K01) + o.A1(q1, cm.K02) + o.A2(q1, cm.K01, cm.K01) + o.B(q1, cm.H0002) +
                  2 * o.B(cm.H0001, cm.H0101) + 2 * o.B1(q1, cm.H0001, cm.K01) + o.C(q1, cm.H0001, cm.H0001) +
                  2 * th2 * (cm.H1001 + q1 - th2 * q0) - 2 * cm.H0101 - cm.H1002;
    }

    // beta2^3: every mixed term carries the combined factor 3.
    Vec rhs0003;
    void beta23(double k) {
        cm.K03 = k * cm.K10;
        const Vec &H1 = cm.H0001, &H2 = cm.H0002;
        const Vec2 &K1 = cm.K01, &K2 = cm.K02;
        rhs0003 = o.J1 * cm.K03 + 3 * o.A1(H1, K2) + 3 * o.A1(H2, K1) + 3 * o.B(H1, H2) + 3 * o.J2(K1, K2) +
                  3 * o.A2(H1, K1, K1) + 3 * o.B1(H1, H1, K1) + o.C(H1, H1, H1) + o.J3(K1, K1, K1);
    }

    Vec p1v(std::initializer_list<const Vec*> rs) const {
        Vec r(rs.size());
        int i = 0;
        for (const Vec* v : rs) r[i++] = p1.dot(*v);
        return r;
    }

    void run() {
        cm.variant = var;
        cm.bt = bt;
        cm.a = a;
        cm.b = b;

        solve_affine(2, [&](const Vec& u) { quadratic(u[0], u[1], 0.0); return p1v({&rhs0200, &rhs3000}); },
                     orbital() ? "(gamma1, theta1000)" : "(gamma1, d)");
        solve_affine(1, [&](const Vec& u) { cubic(u[0]); return p1v({&rhs2100}); },
                     var == Variant::Smooth ? "e" : "gamma2");
        cm.H2100 = inv(rhs2100);

        solve_affine(2, [&](const Vec& u) { beta2_linear(u[0], u[1]); return p1v({&rhs1001, &rhs0101}); },
                     "(delta1, gamma3)");
        solve_affine(2, [&](const Vec& u) { beta1_linear(u[0], u[1]); return p1v({&rhs1010, &rhs0110}); },
                     "(delta2, gamma4)");
        cm.H0110 = inv(rhs0110);

        solve_affine(2, [&](const Vec& u) { mixed(u); return p1v({&rhs2001, &rhs1101}); },
                     orbital() ? "(gamma5, theta0001)" : (var == Variant::Hyper ? "(gamma5, a1)" : "(a1, b1)"));
        cm.H1101 = inv(rhs1101);
        solve_affine(1, [&](const Vec& u) { beta12(u[0]); return p1v({&rhs0011}); }, "K11");
        cm.H0011 = inv(rhs0011);
        solve_affine(3, [&](const Vec& u) { beta22(u); return p1v({&rhs0002, &rhs1002, &rhs0102}); },
                     "(K02, delta3, gamma6)");
        cm.H0102 = inv(rhs0102);
        solve_affine(1, [&](const Vec& u) { beta23(u[0]); return p1v({&rhs0003}); }, "K03");
        cm.H0003 = inv(rhs0003);

        cm.gamma3 = gq / cm.delta1;
        cm.gamma4 = g4p - cm.delta2 * gq;
        cm.gamma6 = g6p - cm.delta3 * gq;

        certify();
    }

    void certify() {
        double scale = 1.0 + o.A.norm();
        const std::pair<const Vec*, const Vec*> sys[] = {
            {&cm.H0200, &rhs0200}, {&cm.H3000, &rhs3000}, {&cm.H2100, &rhs2100}, {&cm.H1010, &rhs1010},
            {&cm.H0110, &rhs0110}, {&cm.H0101, &rhs0101}, {&cm.H2001, &rhs2001}, {&cm.H1101, &rhs1101},
            {&cm.H0011, &rhs0011}, {&cm.H0002, &rhs0002}, {&cm.H1002, &rhs1002}, {&cm.H0102, &rhs0102},
            {&cm.H0003, &rhs0003}, {&cm.H1001, &rhs1001},
        };
        for (auto& [H, r] : sys) scale = std::max(scale, std::max(H->norm(), r->norm()));
        double worst_s = 0, worst_r = 0;
        for (auto& [H, r] : sys) {
            BorderedResult br = S.solve(*r);
            // right-hand sides at roundoff level carry no consistency information
            worst_s = std::max(worst_s, std::abs(br.s) / std::max(r->norm(), 1e-6 * scale));
            worst_r = std::max(worst_r, (o.A * *H + *r).norm() / scale);
        }
        cm.max_consistency = worst_s;
        cm.max_residual = worst_r;
        if (worst_s > 1e-6)
            throw InconsistentSystem("coefficient chain left an inconsistent system (|s|/|rhs| = " +
                                     std::to_string(worst_s) + ")");
    }
};

}  // namespace

CmExpansion compute_cm(const MultilinearOracle& o, const BTData& bt, Variant v) {
    CmExpansion cm;
    Chain(o, bt, v, cm).run();
    return cm;
}

CmExpansion compute_orbital_cm(const MultilinearOracle& o, const BTData& bt) {
    return compute_cm(o, bt, Variant::Orbital);
}

CmExpansion compute_smooth_cm(const MultilinearOracle& o, const BTData& bt, bool hyper) {
    return compute_cm(o, bt, hyper ? Variant::Hyper : Variant::Smooth);
}

Vec eval_H(const CmExpansion& c, const Vec2& w, const Vec2& be) {
    const double w0 = w[0], w1 = w[1], b1 = be[0], b2 = be[1];
    const BTData& bt = c.bt;
    return bt.x0 + bt.q0 * w0 + bt.q1 * w1 + c.H0010 * b1 + c.H0001 * b2 + 0.5 * c.H2000 * w0 * w0 +
           c.H1100 * w0 * w1 + 0.5 * c.H0200 * w1 * w1 + c.H1010 * w0 * b1 + c.H0110 * w1 * b1 +
           c.H1001 * w0 * b2 + c.H0101 * w1 * b2 + 0.5 * c.H0002 * b2 * b2 + c.H0011 * b1 * b2 +
           c.H3000 * (w0 * w0 * w0 / 6) + 0.5 * c.H2100 * w0 * w0 * w1 + c.H1101 * w0 * w1 * b2 +
           0.5 * c.H2001 * w0 * w0 * b2 + c.H0003 * (b2 * b2 * b2 / 6) + 0.5 * c.H1002 * w0 * b2 * b2 +
           0.5 * c.H0102 * w1 * b2 * b2;
}

Mat eval_Hw(const CmExpansion& c, const Vec2& w, const Vec2& be) {
    const double w0 = w[0], w1 = w[1], b1 = be[0], b2 = be[1];
    const BTData& bt = c.bt;
    Mat J(bt.q0.size(), 2);
    J.col(0) = bt.q0 + c.H2000 * w0 + c.H1100 * w1 + c.H1010 * b1 + c.H1001 * b2 + 0.5 * c.H3000 * w0 * w0 +
               c.H2100 * w0 * w1 + c.H1101 * w1 * b2 + c.H2001 * w0 * b2 + 0.5 * c.H1002 * b2 * b2;
    J.col(1) = bt.q1 + c.H1100 * w0 + c.H0200 * w1 + c.H0110 * b1 + c.H0101 * b2 + 0.5 * c.H2100 * w0 * w0 +
               c.H1101 * w0 * b2 + 0.5 * c.H0102 * b2 * b2;
    return J;
}

Vec2 eval_K(const CmExpansion& c, const Vec2& be) {
    const double b1 = be[0], b2 = be[1];
    return c.bt.alpha0 + c.K10 * b1 + c.K01 * b2 + 0.5 * c.K02 * b2 * b2 + c.K11 * b1 * b2 +
           c.K03 * (b2 * b2 * b2 / 6);
}

Vec homological_residual(const CmExpansion& c, const MultilinearOracle& o, const Vec2& w, const Vec2& be) {
    const double w0 = w[0], w1 = w[1], b1 = be[0], b2 = be[1];
    Vec2 G;
    G[0] = w1;
    G[1] = b1 + b2 * w1 + c.a * w0 * w0 + c.b * w0 * w1;
    double theta = 1.0;
    if (c.smooth()) {
        G[1] += c.a1 * b2 * w0 * w0 + c.b1 * b2 * w0 * w1 + c.e * w0 * w0 * w1 + c.d * w0 * w0 * w0;
    } else {
        theta += c.theta1000 * w0 + c.theta0001 * b2;
    }
    Vec fx = o.f(eval_H(c, w, be), eval_K(c, be));
    return fx * theta - eval_Hw(c, w, be) * G;
}

}  // namespace bt
