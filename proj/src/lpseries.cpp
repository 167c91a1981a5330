#include <stdexcept>
#include <string>

#include "bt/asymptotics.hpp"

namespace bt {

namespace {

using P = RationalPoly;

P poly(std::initializer_list<long> c) { return P::from_ints(c); }

struct Recursion {
    std::vector<Rational> tau, sig;
    std::vector<P> om;

    // Right-hand side z_i of the order-i equation, before the 12 zeta factor.
    P zf(int i) const {
        if (i == 1) return poly({1, 0, -1}) * (Rational(24) * poly({0, -2, 0, 3}));
        const P z2 = poly({0, 2});
        P p;
        Rational s = 0;
        for (int l = 1; l < i; ++l) s += sig[l] * tau[i - 1 - l];
        p += z2 * s;

        P acc;
        for (int k = 1; k < i; ++k)
            for (int l = 0; l < i - k; ++l) acc += om[k] * (sig[l] * tau[i - 1 - l - k]);
        p += z2 * acc;

        acc = P();
        for (int l = 1; l < i; ++l) acc += om[l] * sig[i - l];
        p -= poly({2, 0, -6}) * acc;

        acc = P();
        for (int k = 1; k < i; ++k) {
            P dk = (poly({0, 1, 0, -1}) * om[k]).derivative();
            for (int l = 0; l <= i - k; ++l) {
                const Rational& sv = sig[i - l - k];
                if (sv == 0) continue;
                acc += om[l] * dk * sv;
            }
        }
        p -= acc * Rational(2);

        acc = P();
        for (int k = 0; k < i; ++k)
            for (int l = 0; l < i - 1 - k; ++l) acc += om[k] * (sig[l] * sig[i - 1 - l - k]);
        p += poly({-1, 0, 1}) * z2 * acc;

        acc = P();
        for (int k = 0; k < i; ++k) acc += om[k] * sig[i - 1 - k];
        p += poly({-4, 0, 6}) * z2 * acc;

        s = 0;
        for (int k = 1; k < i; ++k) s += sig[k] * sig[i - k];
        p += poly({1, 0, -1}) * s;
        return poly({1, 0, -1}) * p;
    }
};

P exact_div(const P& num, const P& den, int i) {
    P rem;
    P q = num.divmod(den, rem);
    if (!rem.is_zero())
        throw std::logic_error("LP recursion: nonzero remainder at order " + std::to_string(i));
    return q;
}

}  // namespace

LpSeries lp_solve_quadratic(int order) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    Recursion r;
    r.tau.assign(order + 1, Rational(0));
    r.sig.assign(order + 1, Rational(0));
    r.om.assign(order + 1, P());
    std::vector<Rational> delta(order + 1, Rational(0));
    r.sig[0] = 6;
    r.om[0] = P::constant(1);
    delta[0] = -4;

    const P z12 = poly({0, 12});
    const P base = poly({1, 0, -1}) * z12;
    const P D = base * base;
    const P quintic = P({0, 0, 0, Rational(1, 3), 0, Rational(-1, 5)});
    const P u0sq = poly({-4, 0, 6}) * poly({-4, 0, 6}) - P::constant(4);

    // one step past the last omega: tau_{N-1} comes from the solvability condition at i = N
    for (int i = 1; i <= order; ++i) {
        P g = (z12 * r.zf(i)).integral();
        if (i % 2 == 1) {
            Rational t = Rational(-10, 192) * g.eval(Rational(1));
            t.canonicalize();
            r.tau[i - 1] = t;
            r.om[i] = exact_div(quintic * (t * 144) + g, D, i);
        } else {
            Rational s = -g.eval(Rational(-1)) / 12;
            s.canonicalize();
            r.sig[i] = s;
            delta[i] = g.eval(Rational(1)) / 12;
            delta[i].canonicalize();
            P num = poly({-1, 0, 1}) * u0sq * s + g + P::constant(s * 12);
            r.om[i] = exact_div(num, D, i) - P::constant(s / 6);
        }
        if (r.om[i].degree() > 2 * i + 1) throw std::logic_error("LP recursion: degree bound violated");
    }

    LpSeries out;
    out.order = order;
    out.tau.assign(r.tau.begin(), r.tau.begin() + order);
    out.sigma.assign(r.sig.begin(), r.sig.begin() + std::max(order - 1, 1));
    out.delta.assign(delta.begin(), delta.begin() + std::max(order - 1, 1));
    out.omega.assign(r.om.begin(), r.om.begin() + order);
    return out;
}

}  // namespace bt
