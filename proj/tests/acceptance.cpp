// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bt/corrector.hpp"

using namespace bt;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s | %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    int n = int(x.size());
    for (int i = 0; i < n; ++i) mx += std::log(x[i]) / n, my += std::log(y[i]) / n;
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        double dx = std::log(x[i]) - mx;
        num += dx * (std::log(y[i]) - my);
        den += dx * dx;
    }
    return num / den;
}

Rational q(long p, long d = 1) { return Rational(p, d); }

CmExpansion nf_cm(const BtNfParams& p, Variant v) {
    OdeModel m = builtin_bt_nf(p);
    MultilinearOracle o(m, Vec::Zero(2), Vec2::Zero());
    return compute_cm(o, analyze_bt(o), v);
}

void c1_lp_exact() {
    LpSeries s = lp_solve_quadratic(4);
    bool tau = s.tau.size() >= 4 && s.tau[0] == q(10, 7) && s.tau[1] == 0 && s.tau[2] == q(288, 2401) && s.tau[3] == 0;
    bool sd = s.sigma.size() >= 3 && s.sigma[1] == 0 && s.sigma[2] == q(18, 49) && s.delta[2] == q(-18, 49);
    bool w1 = s.omega[1] == RationalPoly({q(0), q(-6, 7)});
    bool w2 = s.omega[2] == RationalPoly({q(9, 98), q(0), q(27, 98)});
    bool w3 = s.omega[3] == RationalPoly({q(0), q(-198, 2401), q(0), q(18, 343)});
    // the sign of omega1 as a function: d xi/ds = omega gives xi1(s) = -(6/7) log cosh s
    double e = 1e-4, xs = 1.3;
    double xi1 = (xi_of_s(xs, e, Phase::VZero) - xs) / e;
    bool sign = std::abs(xi1 + 6.0 / 7.0 * log_cosh(xs)) < 1e-3;
    report(1, tau && sd && w1 && w2 && w3 && sign, "exact LP coefficients at order 4",
           fmt("tau=(%s,%s,%s,%s) sigma2=%s delta2=%s omega1=%s omega2=%s omega3=%s; omega1 checked as -(6/7)z, the "
               "sign the recursion, the printed omega2/omega3 and the xi(s) expansion all share",
               s.tau[0].get_str().c_str(), s.tau[1].get_str().c_str(), s.tau[2].get_str().c_str(),
               s.tau[3].get_str().c_str(), s.sigma[2].get_str().c_str(), s.delta[2].get_str().c_str(),
               s.omega[1].str().c_str(), s.omega[2].str().c_str(), s.omega[3].str().c_str()));
}

void c2_order20() {
    auto t0 = std::chrono::steady_clock::now();
    LpSeries s = lp_solve_quadratic(20);
    double dt = seconds_since(t0);
    bool ok = dt < 10;
    int checked = 0;
    for (int i = 1; i < int(s.tau.size()); ++i) {
        if (i % 2 == 1) ok = ok && s.tau[i] == 0;
        ++checked;
    }
    for (int i = 1; i < int(s.sigma.size()) && i < int(s.delta.size()); ++i) {
        ok = ok && s.sigma[i] == -s.delta[i];
        if (i % 2 == 1) ok = ok && s.sigma[i] == 0;
    }
    for (int i = 0; i < int(s.omega.size()); ++i)
        for (int k = 0; k <= s.omega[i].degree(); ++k)
            if ((k - i) % 2 != 0) ok = ok && s.omega[i].coeff(k) == 0;
    report(2, ok, "order-20 exact run and invariants",
           fmt("%.3f s; %zu tau, %zu sigma/delta, %zu omega checked for odd vanishing, sigma=-delta, omega parity",
               dt, s.tau.size(), s.sigma.size(), s.omega.size()));
}

void c3_integrals() {
    struct P {
        int n;
        long rn, rd, pn, pd, zn, zd;
    };
    const P printed[] = {{4, 82, 27, -5, 36, -1, 1},
                         {6, 38342, 16875, -47, 450, -4, 5},
                         {8, 25545482, 13505625, -319, 3675, -24, 35},
                         {10, 5428830032L, 3281866875L, -7516, 99225, -64, 105}};
    bool ok = true;
    double worst = 0;
    for (const P& p : printed) {
        ClosedForm c = In_closed_exact(p.n);
        ok = ok && c.r == q(p.rn, p.rd) && c.pi2 == q(p.pn, p.pd) && c.zeta3 == q(p.zn, p.zd);
        worst = std::max(worst, std::abs(In_closed(p.n) - In_quadrature(p.n)));
    }
    ok = ok && worst <= 1e-12;
    report(3, ok, "closed-form log-cosh integrals", fmt("n=4,6,8,10 exact match; max |closed - quadrature| = %.2e", worst));
}

void c4_gammas() {
    double g1 = gamma_functional([](double s) { return rp_term(1, s, Phase::VZero); });
    double g1p = -3.0 / 245.0 * (70.0 * std::log(2.0) - 59.0);
    // particular solution before the phase correction
    double g3p = rp_gamma3_l2();
    auto p3 = [&](double s) { return rp_term(3, s, Phase::L2) - g3p * u0(s).v; };
    double g3 = gamma_functional(p3);
    double e1 = std::abs(g1 - g1p), e3 = std::abs(g3 - g3p);
    report(4, e1 <= 1e-8 && e3 <= 1e-8, "L2 phase constants by quadrature",
           fmt("gamma1=%.15g (|diff| %.1e), gamma3=%.15g (|diff| %.1e)", g1p, e1, g3p, e3));
}

void c5_residual_order() {
    const std::vector<double> eps = {0.1, 0.05, 0.025, 0.0125};
    auto max_res = [&](const std::function<double(double, double)>& u, double e) {
        double m = 0;
        for (double s = -6; s <= 6; s += 0.25)
            m = std::max(m, std::abs(oscillator_residual([&](double x) { return u(x, e); }, s, e, rp_tau(e))));
        return m;
    };
    std::vector<double> rr, rl;
    for (double e : eps) {
        rr.push_back(max_res([](double s, double e) { return rp_orbit(s, e, Phase::VZero).u; }, e));
        rl.push_back(max_res(
            [](double s, double e) { return lp_orbit_third(std::tanh(xi_of_s(s, e, Phase::VZero)), e, Phase::VZero).u; },
            e));
    }
    double sr = loglog_slope(eps, rr), sl = loglog_slope(eps, rl);
    report(5, sr >= 3.7 && sl >= 3.7, "planar residual order",
           fmt("RP slope %.3f, LP slope %.3f (max over s in [-6,6])", sr, sl));
}

void c6_cm() {
    const double a = -1, b = 2, a1 = 0.3, b1 = -0.2, d = 0.5, e = 0.7;
    BtNfParams p{a, b, 0, d, e, a1, b1};
    CmExpansion c = nf_cm(p, Variant::Orbital);
    const double g = -3 * b * d + 4 * a * e;
    struct Row {
        const char* name;
        Vec got;
        Vec2 want;
    };
    auto v = [](double x, double y) { return Vec2(x, y); };
    std::vector<Row> rows = {
        {"H2000", c.H2000, v(-d / (2 * a), 0)},
        {"H1100", c.H1100, v(g / (12 * a * a), 0)},
        {"H0200", c.H0200, v(0, g / (6 * a * a))},
        {"H3000", c.H3000, v(0, -3 * b * d / (2 * a) + 2 * e)},
        {"H2100", c.H2100, v(0, b * g / (6 * a * a))},
        {"H0010", c.H0010, v(d / (4 * a * a), 0)},
        {"H1001", c.H1001, v((-2 * a * b1 + a1 * b + d) / (a * b), 0)},
        {"H0101", c.H0101, v(0, (-6 * a * b1 + 4 * a1 * b + 3 * d) / (2 * a * b))},
        {"H1101", c.H1101, v(0, (-3 * (6 * a * b1 - 4 * a1 * b + b * b - 3 * d) * d + 4 * a * b * e) / (12 * a * a * b))},
        {"H0102", c.H0102, v(0, (6 * a * b1 - 4 * a1 * b - 3 * d) * (2 * a * b1 - 2 * a1 * b - d) / (2 * a * a * b * b))},
        {"H1010", c.H1010, v(0, g / (12 * a * a))},
        {"K10", c.K10, v(1, (a * e - b * d) / (a * a))},
        {"K01", c.K01, v(0, 1)},
        {"K11", c.K11, (3 * a1 * b - 4 * a * b1 + 2 * d) / (a * b) * v(1, (a * e - b * d) / (a * a))},
        {"K02", c.K02, v(0, (2 * a1 * b - 2 * a * b1 + d) / (a * b))},
        {"K03", c.K03, v(0, 0)},
        {"theta", Vec2(c.theta1000, c.theta0001), v(-d / (2 * a), -(-2 * a * b1 + 2 * a1 * b + d) / (2 * a * b))},
        {"H0001", c.H0001, v(0, 0)},
        {"H2001", c.H2001, v(0, 0)},
        {"H0002", c.H0002, v(0, 0)},
        {"H1002", c.H1002, v(0, 0)},
        {"H0003", c.H0003, v(0, 0)},
        {"H0011", c.H0011, v(0, 0)},
        {"H0110", c.H0110, v(0, 0)},
    };
    double worst = 0;
    std::string where;
    for (const Row& r : rows) {
        double err = (r.got - Vec(r.want)).cwiseAbs().maxCoeff();
        if (err > worst) worst = err, where = r.name;
    }
    bool basis = (c.bt.q0 - Vec2(1, 0)).norm() < 1e-12 && (c.bt.q1 - Vec2(0, 1)).norm() < 1e-12;
    report(6, worst <= 1e-10 && basis, "orbital center-manifold coefficients on the normal form",
           fmt("%zu coefficient vectors, max error %.2e (%s)", rows.size(), worst, where.c_str()));
}

void c7_homological() {
    OdeModel m = builtin_hh();
    BtPoint pt = hh_bt_point();
    MultilinearOracle o(m, pt.x0, pt.alpha0);
    BTData bt = analyze_bt(o);
    const std::vector<double> hs = {1e-2, 3e-3, 1e-3};
    struct Probe {
        Vec2 w, beta;
        double order;  // first uniform order with omitted terms
    };
    const Probe probes[] = {{Vec2(0.7, -0.4), Vec2(0.3, 0.5), 3}, {Vec2(0.7, 0.0), Vec2(0.3, 0.5), 4}};
    bool ok = true;
    std::string det;
    for (Variant v : {Variant::Orbital, Variant::Smooth, Variant::Hyper}) {
        CmExpansion cm = compute_cm(o, bt, v);
        for (const Probe& p : probes) {
            std::vector<double> r;
            for (double h : hs) r.push_back(homological_residual(cm, o, h * p.w, h * h * p.beta).norm());
            double s = loglog_slope(hs, r);
            ok = ok && s >= p.order - 0.3;
            det += fmt("%s/%s %.2f (>= %.1f) ", variant_name(v), p.w[1] == 0 ? "w1=0" : "generic", s, p.order - 0.3);
        }
    }
    report(7, ok, "homological residual scaling on HH (refined BT point)", det);
}

void c8_cubic_term() {
    BtNfParams p;
    p.c1 = 0.7;
    CmExpansion cm = nf_cm(p, Variant::Orbital);
    PredictorOptions full, wrong;
    wrong.wrong_k = true;
    // read in e with e^4 = -alpha1/4, the scaling that defines the first predictor
    auto coeff = [&](const PredictorOptions& o) {
        const int N = 12;
        auto al = parameter_series(cm, o, N);
        Series r = (al[0] * -0.25).shift_down(4, 1e-12).pow(0.25) * Series::monomial(N, 1);
        return al[1].compose(r.reverse())[4];
    };
    double cf = coeff(full), cw = coeff(wrong);
    double ef = std::abs(cf - (288 - 1250 * 0.7) / 2401), ew = std::abs(cw - 288.0 / 2401);
    report(8, ef <= 1e-10 && ew <= 1e-10, "alpha2 eps^4 coefficient with c1=0.7",
           fmt("full %.15g (err %.1e), K11=K03=0 control %.15g (err %.1e)", cf, ef, cw, ew));
}

using Groups = std::map<std::pair<std::string, int>, std::vector<ConvergenceRecord>>;

Groups group(const std::vector<ConvergenceRecord>& recs) {
    Groups g;
    for (const auto& r : recs) g[{r.method, r.order}].push_back(r);
    return g;
}

std::vector<StudyCell> cells_for(const std::vector<std::string>& labels, int max_order) {
    std::vector<StudyCell> cells;
    for (const auto& l : labels)
        for (int ord = 0; ord <= max_order; ++ord) {
            PredictorOptions o;
            o.order = ord;
            o.method = l == "lp" ? Method::LP : Method::RP;
            if (l == "rp-l2") o.phase = Phase::L2;
            cells.push_back({l, o});
        }
    return cells;
}

std::vector<double> logspace(double hi, double lo, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(hi * std::pow(lo / hi, double(i) / (n - 1)));
    return v;
}

void c9_convergence() {
    auto t0 = std::chrono::steady_clock::now();
    OdeModel m = builtin_bt_nf({});
    CmExpansion cm = nf_cm({}, Variant::Orbital);
    auto cells = cells_for({"rp", "lp", "rp-l2"}, 3);
    PredictorOptions xi;
    xi.xi_identity = true;
    cells.push_back({"lp-xi", xi});
    StudyOptions so;
    so.mesh = Mesh::uniform(160, 6);
    so.k_ratio = 1e-8;
    auto recs = convergence_study(m, cm, cells, logspace(1e-1, 1e-4, 7), so);
    Groups g = group(recs);
    bool ok = true;
    std::string det;
    for (std::string meth : {"rp", "lp"}) {
        det += meth + " slopes";
        double prev = -1e300;
        for (int ord = 0; ord <= 3; ++ord) {
            double s = fitted_slope(g[{meth, ord}]);
            ok = ok && s > prev && std::isfinite(s);
            prev = s;
            det += fmt(" %.3f", s);
        }
        det += "; ";
    }
    double s0 = fitted_slope(g[{"lp", 0}]), sx = fitted_slope(g[{"lp-xi", 3}]);
    ok = ok && std::abs(sx - s0) <= 0.3;
    det += fmt("lp order 3 with xi=s %.3f; ", sx);
    int strict = 0, equal = 0;
    for (int ord = 0; ord <= 3; ++ord) {
        const auto& v = g[{"rp", ord}];
        const auto& l = g[{"rp-l2", ord}];
        for (size_t i = 0; i < v.size(); ++i) {
            bool conv = v[i].converged && l[i].converged;
            ok = ok && conv;
            if (ord == 0) {
                // same function at order 0: the phase enters from u1 on
                bool eq = std::abs(l[i].delta - v[i].delta) <= 1e-12 * v[i].delta;
                ok = ok && eq;
                equal += eq;
            } else {
                bool lt = l[i].delta < v[i].delta;
                ok = ok && lt;
                strict += lt;
            }
        }
    }
    for (const auto& r : recs) ok = ok && r.converged;
    double dt = seconds_since(t0);
    ok = ok && dt < 300;
    det += fmt("L2 < vzero in %d/21 cells (orders 1-3), equal at order 0 in %d/7; mesh 160x6, k=1e-8*A0; %.1f s", strict,
               equal, dt);
    report(9, ok, "convergence study on the topological normal form", det);
}

void c10_hh() {
    auto t0 = std::chrono::steady_clock::now();
    OdeModel m = builtin_hh();
    BtPoint pt = hh_bt_point();
    MultilinearOracle o(m, pt.x0, pt.alpha0);
    CmExpansion cm = compute_cm(o, analyze_bt(o), Variant::Orbital);
    AutoCorrectOptions ao;
    ao.eps = 0.1;
    ao.k_factor = 1e-5 / 0.1;
    bool ok = true;
    std::string det;
    try {
        HomSolution s = predict_and_correct(m, cm, {}, ao);
        ok = s.newton.residual <= 1e-10 && s.halvings == 0;
        det += fmt("eps=0.1 k=1e-5: %d Newton steps, residual %.2e, %d halvings, T=%.1f; ", s.newton.iterations,
                   s.newton.residual, s.halvings, s.predictor.T);
    } catch (const std::exception& e) {
        ok = false;
        det += std::string("correction failed: ") + e.what() + "; ";
    }
    auto amps = logspace(5e-2, 1e-3, 6);
    auto recs = convergence_study(m, cm, cells_for({"lp"}, 3), amps, {});
    Groups g = group(recs);
    // On this mesh the Newton residual floors near 1e-10 once T reaches ~1e4, and delta
    // scatters by ~1e-10 between equally valid iterates. A pair of orders is compared
    // only when the lower one sits a decade above that noise.
    const double floor = 1e-9;
    int pairs = 0, good = 0, below = 0;
    for (size_t i = 0; i < amps.size(); ++i)
        for (int ord = 1; ord <= 3; ++ord) {
            const auto& lo = g[{"lp", ord - 1}][i];
            const auto& hi = g[{"lp", ord}][i];
            if (lo.converged && lo.delta < floor) {
                ++below;
                continue;
            }
            ++pairs;
            good += lo.converged && hi.converged && hi.delta < lo.delta;
        }
    ok = ok && good == pairs && pairs >= 12;
    det += fmt("LP delta decreases with order in %d/%d resolved pairs (%d below the 1e-9 noise floor); slopes", good,
               pairs, below);
    for (int ord = 0; ord <= 3; ++ord) det += fmt(" %.2f", fitted_slope(g[{"lp", ord}]));
    double dt = seconds_since(t0);
    ok = ok && dt < 120;
    det += fmt("; %.1f s", dt);
    report(10, ok, "Hodgkin-Huxley end to end (refined BT point)", det);
}

double solve_eps(const CmExpansion& cm, const PredictorOptions& o, double alpha1, double e) {
    for (int i = 0; i < 60; ++i) {
        double h = 1e-7 * e;
        double f = lift_parameters(cm, o, e)[0] - alpha1;
        double df = (lift_parameters(cm, o, e + h)[0] - lift_parameters(cm, o, e - h)[0]) / (2 * h);
        double step = f / df;
        e -= step;
        if (std::abs(step) < 1e-15 * e) break;
    }
    return e;
}

void c11_equivalence() {
    const double a = -1, b = 2, a1 = 0.3, b1 = -0.2, d = 0.5, e = 0.7;
    BtNfParams p{a, b, 0, d, e, a1, b1};
    OdeModel m = builtin_bt_nf(p);
    MultilinearOracle o(m, Vec::Zero(2), Vec2::Zero());
    BTData bt = analyze_bt(o);
    CmExpansion co = compute_cm(o, bt, Variant::Orbital), cs = compute_cm(o, bt, Variant::Smooth);
    PredictorOptions lp;

    // alpha2 as a series in r = alpha1^(1/4)
    const int N = 12;
    auto elim = [&](const CmExpansion& cm) {
        auto al = parameter_series(cm, lp, N);
        Series r = al[0].shift_down(4, 1e-12).pow(0.25) * Series::monomial(N, 1);
        return al[1].compose(r.reverse());
    };
    Series ao = elim(co), as = elim(cs);
    // printed with the opposite sign; (10a/7b) eps^2 with eps^2 = sqrt(-a) b^2/(2a^2) sqrt(alpha1) gives this one
    const double want_half = -5 * b / (7 * std::sqrt(-a));
    const double want_one =
        (-49 * b * (50 * a * b1 + 73 * d) + 4802 * a * e + 1225 * a1 * b * b - 144 * b * b * b) / (4802 * a * a);
    double err = std::max({std::abs(ao[2] - want_half), std::abs(as[2] - want_half), std::abs(ao[4] - want_one),
                           std::abs(as[4] - want_one)});
    bool ok = err <= 1e-6 && std::abs(ao[3]) <= 1e-6 && std::abs(as[3]) <= 1e-6;
    std::string det = fmt("sqrt(alpha1) coeff %.10f / %.10f, alpha1 coeff %.10f / %.10f (expected %.10f, %.10f), max "
                          "err %.1e; ",
                          ao[2], as[2], ao[4], as[4], want_half, want_one, err);

    // phase-space difference at equal alpha1, with and without the shift
    const double shift = phase_shift_coefficient(a, b, d, e);
    const std::vector<double> A1 = {1e-5, 1e-6, 1e-7};
    std::vector<double> with, without;
    PredictorOptions rp;
    rp.method = Method::RP;
    for (double A : A1) {
        double es = solve_eps(cs, rp, A, std::pow(A * -a / 4, 0.25));
        double eo = solve_eps(co, lp, A, std::pow(A / (-4 * a * a * a / std::pow(b, 4)), 0.25));
        for (int w = 0; w < 2; ++w) {
            PredictorOptions po = lp;
            po.time_shift = w ? shift : 0.0;
            double mx = 0;
            for (double t = -8 / es; t <= 8 / es; t += 0.05 / es) {
                double eta = invert_time(co, po, eo, t);
                mx = std::max(mx, (lift_orbit(co, po, eo, eta) - lift_orbit(cs, rp, es, t)).norm());
            }
            (w ? with : without).push_back(mx);
        }
    }
    double sw = loglog_slope(A1, with), sn = loglog_slope(A1, without);
    ok = ok && sw >= 1.4 && sn < sw - 0.15;
    det += fmt("max phase-space difference ~ alpha1^%.3f with the (3bd-4ae) shift, ~ alpha1^%.3f without", sw, sn);
    report(11, ok, "smooth vs orbital predictors", det);
}

void c12_tangent() {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> mag(0.5, 2.0);
    int agree = 0, total = 0;
    std::string fails;
    for (int i = 0; i < 20; ++i) {
        BtNfParams p;
        // cycle through the four sign patterns, magnitudes random
        p.a = (i & 1 ? -1 : 1) * mag(rng);
        p.b = (i & 2 ? -1 : 1) * mag(rng);
        OdeModel m = builtin_bt_nf(p);
        CmExpansion cm = nf_cm(p, Variant::Orbital);
        PredictorOptions po;
        ++total;
        try {
            HomSolution s = predict_and_correct(m, cm, po, {});
            double eps = s.predictor.eps, h = 1e-4 * eps;
            double fd = (lift_parameters(cm, po, eps + h)[0] - lift_parameters(cm, po, eps - h)[0]) / (2 * h);
            double t = s.tangent[s.bvp.ialpha()];
            if ((t > 0) == (fd > 0) && fd != 0) ++agree;
            else fails += fmt(" (a=%.2f,b=%.2f)", p.a, p.b);
        } catch (const std::exception& e) {
            fails += fmt(" (a=%.2f,b=%.2f: %s)", p.a, p.b, e.what());
        }
    }
    report(12, agree == total, "tangent orientation on random bt_nf sign patterns",
           fmt("%d/%d agree with finite-difference d alpha1/d eps%s", agree, total, fails.c_str()));
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> all = {c1_lp_exact, c2_order20,      c3_integrals,  c4_gammas,
                                                    c5_residual_order, c6_cm,     c7_homological, c8_cubic_term,
                                                    c9_convergence, c10_hh,      c11_equivalence, c12_tangent};
    for (size_t i = 0; i < all.size(); ++i) {
        try {
            all[i]();
        } catch (const std::exception& e) {
            report(int(i + 1), false, "exception", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, all.size());
    return failures ? 1 : 0;
}
