#pragma once

#include <string>

#include "bt/linalg.hpp"
#include "bt/model.hpp"

namespace bt {

enum class Variant { Orbital, Smooth, Hyper };
const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct CmExpansion {
    Variant variant = Variant::Orbital;
    BTData bt;
    double a = 0, b = 0;
    // smooth and hyper only
    double a1 = 0, b1 = 0, d = 0, e = 0;

    Vec H0010, H0001, H2000, H1100, H0200, H1010, H1001, H0110, H0101, H0002, H0011, H3000, H2100, H1101, H2001,
        H0003, H1002, H0102;
    Vec2 K10, K01, K02, K11, K03;
    double theta1000 = 0, theta0001 = 0;
    double gamma1 = 0, gamma2 = 0, gamma3 = 0, gamma4 = 0, gamma5 = 0, gamma6 = 0;
    double delta1 = 0, delta2 = 0, delta3 = 0;

    // largest |s|/|rhs| over all final bordered solves
    double max_consistency = 0;
    // largest |A H + rhs| / scale over all coefficients
    double max_residual = 0;

    bool smooth() const { return variant != Variant::Orbital; }
};

// a = p1 B(q0,q0)/2, b = p1 B(q0,q1) + p0 B(q0,q0). Throws NonGenericBT.
Vec2 critical_coefficients(const MultilinearOracle& oracle, const EigenStructure& eig);

// Full pipeline: eigenvectors, genericity checks and the coefficient chain.
BTData analyze_bt(const MultilinearOracle& oracle);

CmExpansion compute_orbital_cm(const MultilinearOracle& oracle, const BTData& bt);
CmExpansion compute_smooth_cm(const MultilinearOracle& oracle, const BTData& bt, bool hyper);
CmExpansion compute_cm(const MultilinearOracle& oracle, const BTData& bt, Variant v);

// Truncated center-manifold map and parameter map.
Vec eval_H(const CmExpansion& cm, const Vec2& w, const Vec2& beta);
Mat eval_Hw(const CmExpansion& cm, const Vec2& w, const Vec2& beta);
Vec2 eval_K(const CmExpansion& cm, const Vec2& beta);

// f(H, K) theta - H_w G with the variant's normal form G.
Vec homological_residual(const CmExpansion& cm, const MultilinearOracle& oracle, const Vec2& w, const Vec2& beta);

}  // namespace bt
