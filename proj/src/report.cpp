#include "bt/report.hpp"

#include <cstdio>
#include <ostream>

namespace bt {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const Vec& v) {
    Json j = Json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Json to_json(const BTData& bt) {
    return Json{{"x0", to_json(bt.x0)},  {"alpha0", to_json(bt.alpha0)}, {"q0", to_json(bt.q0)},
                {"q1", to_json(bt.q1)},  {"p0", to_json(bt.p0)},         {"p1", to_json(bt.p1)},
                {"a", bt.a},             {"b", bt.b}};
}

Json to_json(const CmExpansion& c) {
    Json j;
    j["variant"] = variant_name(c.variant);
    j["a"] = c.a;
    j["b"] = c.b;
    if (c.smooth()) {
        j["a1"] = c.a1;
        j["b1"] = c.b1;
        j["d"] = c.d;
        j["e"] = c.e;
    }
#define BT_H(name) j[#name] = to_json(c.name);
    BT_H(H0010) BT_H(H0001) BT_H(H2000) BT_H(H1100) BT_H(H0200) BT_H(H1010) BT_H(H1001) BT_H(H0110) BT_H(H0101)
    BT_H(H0002) BT_H(H0011) BT_H(H3000) BT_H(H2100) BT_H(H1101) BT_H(H2001) BT_H(H0003) BT_H(H1002) BT_H(H0102)
    BT_H(K10) BT_H(K01) BT_H(K02) BT_H(K11) BT_H(K03)
#undef BT_H
    j["theta1000"] = c.theta1000;
    j["theta0001"] = c.theta0001;
    j["gamma"] = {c.gamma1, c.gamma2, c.gamma3, c.gamma4, c.gamma5, c.gamma6};
    j["delta"] = {c.delta1, c.delta2, c.delta3};
    j["certificates"] = {{"max_consistency", c.max_consistency}, {"max_residual", c.max_residual}};
    return j;
}

Json to_json(const HomPredictor& p) {
    Json j;
    j["method"] = method_name(p.method);
    j["variant"] = variant_name(p.variant);
    j["phase"] = phase_name(p.options.phase);
    j["order"] = p.options.order;
    j["eps"] = p.eps;
    j["k"] = p.k;
    j["amplitude"] = p.A0;
    j["alpha"] = to_json(Vec(p.alpha));
    j["T"] = p.T;
    j["ntst"] = p.mesh.ntst;
    j["ncol"] = p.mesh.ncol;
    j["mesh"] = p.mesh.fine;
    Json orb = Json::array();
    for (const Vec& x : p.orbit) orb.push_back(to_json(x));
    j["orbit"] = orb;
    j["s0"] = to_json(p.s0);
    j["eps0"] = p.eps0;
    j["eps1"] = p.eps1;
    j["tangent_sign"] = p.tangent_sign;
    return j;
}

Json to_json(const LpSeries& s) {
    auto rs = [](const std::vector<Rational>& v) {
        Json a = Json::array();
        for (const auto& r : v) a.push_back(r.get_str());
        return a;
    };
    Json om = Json::array();
    for (const auto& w : s.omega) {
        Json c = Json::array();
        for (const auto& r : w.coeffs()) c.push_back(r.get_str());
        om.push_back(c);
    }
    return Json{{"order", s.order}, {"tau", rs(s.tau)}, {"sigma", rs(s.sigma)}, {"delta", rs(s.delta)},
                {"omega", om}};
}

void write_lpseries_csv(std::ostream& os, const LpSeries& s) {
    os << "i,tau_i,sigma_i\n";
    for (size_t i = 0; i < s.tau.size(); ++i) {
        os << i << ',' << s.tau[i].get_str() << ',';
        if (i < s.sigma.size()) os << s.sigma[i].get_str();
        os << '\n';
    }
}

}  // namespace bt
