#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bt/nfcoeffs.hpp"

using namespace bt;

namespace {

struct Setup {
    OdeModel m;
    MultilinearOracle o;
    BTData bt;
    Setup(OdeModel model, const Vec& x0, const Vec2& a0) : m(std::move(model)), o(m, x0, a0), bt(analyze_bt(o)) {}
};

Setup nf(const BtNfParams& p) { return Setup(builtin_bt_nf(p), Vec::Zero(2), Vec2::Zero()); }
Setup hh() {
    BtPoint p = hh_bt_point();
    return Setup(builtin_hh(), p.x0, p.alpha0);
}

const BtNfParams kSec43{-1, 2, 0, 0.5, 0.7, 0.3, -0.2};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("variant names") {
    for (Variant v : {Variant::Orbital, Variant::Smooth, Variant::Hyper}) CHECK(parse_variant(variant_name(v)) == v);
    CHECK_THROWS_AS(parse_variant("bogus"), std::invalid_argument);
}

TEST_CASE("topological normal form") {
    Setup s = nf({});
    CHECK(s.bt.a == doctest::Approx(1).epsilon(1e-10));
    CHECK(s.bt.b == doctest::Approx(1).epsilon(1e-10));
    CmExpansion c = compute_orbital_cm(s.o, s.bt);
    CHECK(c.H2000.norm() < 1e-10);
    CHECK(c.H1100.norm() < 1e-10);
    CHECK(c.theta1000 == doctest::Approx(0).epsilon(1e-10));
    CHECK((c.K10 - Vec2(1, 0)).norm() < 1e-10);
    CHECK((c.K01 - Vec2(0, 1)).norm() < 1e-10);
    CHECK(c.max_consistency < 1e-6);
}

TEST_CASE("orbital coefficients of the cubic normal form") {
    Setup s = nf(kSec43);
    CmExpansion c = compute_orbital_cm(s.o, s.bt);
    const double a = -1, b = 2, a1 = 0.3, b1 = -0.2, d = 0.5, e = 0.7;
    CHECK(c.H2000[0] == doctest::Approx(-d / (2 * a)).epsilon(1e-10));
    CHECK(c.H1100[0] == doctest::Approx((-3 * b * d + 4 * a * e) / (12 * a * a)).epsilon(1e-10));
    CHECK(c.theta1000 == doctest::Approx(-d / (2 * a)).epsilon(1e-10));
    CHECK(c.theta0001 == doctest::Approx(-(-2 * a * b1 + 2 * a1 * b + d) / (2 * a * b)).epsilon(1e-10));
    CHECK(c.K10[1] == doctest::Approx((a * e - b * d) / (a * a)).epsilon(1e-10));
    CHECK(c.K02[1] == doctest::Approx((2 * a1 * b - 2 * a * b1 + d) / (a * b)).epsilon(1e-10));
    CHECK(c.K03.norm() < 1e-10);
}

TEST_CASE("smooth expansion of a smooth normal form is the identity") {
    Setup s = nf(kSec43);
    CmExpansion c = compute_smooth_cm(s.o, s.bt, false);
    CHECK(c.a1 == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(c.b1 == doctest::Approx(-0.2).epsilon(1e-10));
    CHECK(c.d == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c.e == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(c.theta1000 == 0.0);
    CHECK(c.theta0001 == 0.0);
    CHECK((c.K10 - Vec2(1, 0)).norm() < 1e-10);
    CHECK(c.H2000.norm() < 1e-10);
}

TEST_CASE("hypernormal form removes e and b1") {
    Setup s = nf(kSec43);
    CmExpansion c = compute_smooth_cm(s.o, s.bt, true);
    CHECK(c.e == 0.0);
    CHECK(c.b1 == 0.0);
    CHECK(c.d == doctest::Approx(0.5).epsilon(1e-10));
    // frozen
    CHECK(c.a1 == doctest::Approx(0.2).epsilon(1e-9));
    CHECK((c.K10 - Vec2(1, -0.7)).norm() < 1e-9);
    CHECK((c.K11 - Vec2(0.1, -0.07)).norm() < 1e-9);
}

TEST_CASE("Hodgkin-Huxley coefficients (frozen)") {
    Setup s = hh();
    CHECK(rel(s.bt.a, 1.85542718024e-3) < 1e-6);
    CHECK(rel(s.bt.b, -5.08598360791e-2) < 1e-6);
    CmExpansion o = compute_cm(s.o, s.bt, Variant::Orbital);
    CHECK(rel(o.theta1000, 0.1539414005) < 1e-6);
    CHECK(rel(o.theta0001, -1.245713633) < 1e-6);
    CHECK(rel(o.K10[0], -11.2258478) < 1e-6);
    CHECK(rel(o.K01[1], 4.438455096) < 1e-6);
    CHECK(rel(o.K03[1], -71.50858598) < 1e-5);
    CmExpansion sm = compute_cm(s.o, s.bt, Variant::Smooth);
    CHECK(rel(sm.a1, 0.01173655676) < 1e-6);
    CHECK(rel(sm.b1, -0.4122999278) < 1e-6);
    CHECK(rel(sm.d, -5.712541177e-4) < 1e-5);
    CHECK(rel(sm.e, 0.04374675622) < 1e-6);
    CmExpansion hy = compute_cm(s.o, s.bt, Variant::Hyper);
    CHECK(rel(hy.a1, -0.003304633914) < 1e-5);
    CHECK(rel(hy.d, sm.d) < 1e-8);
    for (const CmExpansion* c : {&o, &sm, &hy}) {
        CHECK(c->max_consistency < 1e-6);
        CHECK(c->max_residual < 1e-8);
    }
}

TEST_CASE("homological residual order") {
    Setup s = hh();
    CmExpansion c = compute_cm(s.o, s.bt, Variant::Orbital);
    auto r = [&](double h) { return homological_residual(c, s.o, h * Vec2(0.7, 0), h * h * Vec2(0.3, 0.5)).norm(); };
    double slope = std::log(r(3e-3) / r(1e-3)) / std::log(3.0);
    CHECK(slope > 3.7);
    // the truncated maps reproduce the base point
    CHECK((eval_H(c, Vec2::Zero(), Vec2::Zero()) - s.bt.x0).norm() == 0.0);
    CHECK((eval_K(c, Vec2::Zero()) - s.bt.alpha0).norm() == 0.0);
}

TEST_CASE("degenerate points") {
    // a = 0
    CHECK_THROWS_AS(nf({0, 1}), NonGenericBT);
    // b = 0
    CHECK_THROWS_AS(nf({1, 0}), NonGenericBT);
    // no parameter dependence: transversality fails
    OdeModel m = parse_model("dim 2\npar p q\nx1' = x2\nx2' = x1^2 + x1*x2\n");
    MultilinearOracle o(m, Vec2::Zero(), Vec2::Zero());
    CHECK_THROWS_AS(analyze_bt(o), NonGenericBT);
    // hyperbolic equilibrium
    OdeModel h = parse_model("dim 2\npar p q\nx1' = x2\nx2' = p + x1 + x2\n");
    MultilinearOracle oh(h, Vec2::Zero(), Vec2::Zero());
    CHECK_THROWS_AS(analyze_bt(oh), NotBT);
}
