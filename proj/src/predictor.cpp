#include "bt/predictor.hpp"

#include "bt/errors.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace bt {

double phase_shift_coefficient(double a, double b, double d, double e) {
    return (3 * b * d - 4 * a * e) / (3 * a * b * b);
}

namespace {

// Gauss-Legendre nodes and weights on [0,1] by Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0);
    w.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[n - 1 - i] = 0.5 * (z + 1);
        w[n - 1 - i] = 1.0 / ((1 - z * z) * dp * dp);  // 2/((1-z^2)p'^2) halved for [0,1]
    }
}

SmoothCoeffs smooth_coeffs(const CmExpansion& cm) { return {cm.a, cm.b, cm.a1, cm.b1, cm.d, cm.e}; }

void check_opts(const CmExpansion& cm, const PredictorOptions& o) {
    if (o.order < 0 || o.order > 3) throw std::invalid_argument("order must be 0..3");
    if (cm.smooth() && o.phase != Phase::VZero)
        throw std::invalid_argument("smooth and hyper predictors use the vzero phase only");
    if (o.method == Method::RP && o.phase == Phase::AltGamma)
        throw std::invalid_argument("the altgamma phase is defined for LP only");
    if (o.method == Method::LP && o.phase == Phase::L2)
        throw std::invalid_argument("the l2 phase is defined for RP only");
}

double tau_of(const CmExpansion& cm, const PredictorOptions& o, double eps) {
    return cm.smooth() ? smooth_tau(eps, smooth_coeffs(cm), o.order) : rp_tau(eps, o.order);
}

// u(s) of the truncated planar series, in the blown-up variables.
double planar_u(const CmExpansion& cm, const PredictorOptions& o, double eps, double s) {
    if (cm.smooth()) {
        SmoothCoeffs c = smooth_coeffs(cm);
        if (o.method == Method::RP) return smooth_orbit(s, eps, c, Method::RP, o.order).u;
        double xi = o.xi_identity ? s : smooth_xi(s, eps, c, o.order);
        return smooth_orbit(std::tanh(xi), eps, c, Method::LP, o.order).u;
    }
    if (o.method == Method::RP) return rp_orbit(s, eps, o.phase, o.order).u;
    double xi = o.xi_identity ? s : xi_of_s(s, eps, o.phase, o.order);
    return lp_orbit_third(std::tanh(xi), eps, o.phase, o.order).u;
}

CmExpansion effective(const CmExpansion& cm, const PredictorOptions& o) {
    CmExpansion c = cm;
    if (o.wrong_k) {
        c.K11.setZero();
        c.K03.setZero();
    }
    return c;
}

}  // namespace

Mesh Mesh::uniform(int ntst, int ncol) {
    if (ntst < 1 || ncol < 1) throw std::invalid_argument("ntst and ncol must be positive");
    Mesh m;
    m.ntst = ntst;
    m.ncol = ncol;
    const int N = ntst * ncol;
    m.fine.resize(N + 1);
    for (int j = 0; j < ntst; ++j)
        for (int i = 0; i < ncol; ++i) m.fine[j * ncol + i] = (j + double(i) / ncol) / ntst;
    m.fine[N] = 1.0;
    gauss_legendre(ncol, m.gauss, m.gauss_w);
    return m;
}

Vec2 planar_beta(const CmExpansion& cm, const PredictorOptions& o, double eps) {
    check_opts(cm, o);
    const double a = cm.a, b = cm.b, tau = tau_of(cm, o, eps), e2 = eps * eps;
    if (cm.smooth()) return {-4 / a * e2 * e2, b / a * tau * e2};
    return {-4 * a * a * a / (b * b * b * b) * e2 * e2, a / b * tau * e2};
}

PlanarPoint planar_point(const CmExpansion& cm, const PredictorOptions& o, double eps, double eta) {
    check_opts(cm, o);
    const double a = cm.a, b = cm.b, e2 = eps * eps;
    PlanarPoint p;
    p.beta = planar_beta(cm, o, eps);
    Orbit2 uv;
    if (cm.smooth()) {
        SmoothCoeffs c = smooth_coeffs(cm);
        double s = eps * eta;
        if (o.method == Method::RP) {
            uv = smooth_orbit(s, eps, c, Method::RP, o.order);
        } else {
            double xi = o.xi_identity ? s : smooth_xi(s, eps, c, o.order);
            uv = smooth_orbit(std::tanh(xi), eps, c, Method::LP, o.order);
        }
        p.w = {uv.u * e2 / a, uv.v * e2 * eps / a};
        return p;
    }
    double s = a / b * eps * eta;
    if (o.method == Method::RP) {
        uv = rp_orbit(s, eps, o.phase, o.order);
    } else {
        double xi = o.xi_identity ? s : xi_of_s(s, eps, o.phase, o.order);
        uv = lp_orbit_third(std::tanh(xi), eps, o.phase, o.order);
    }
    p.w = {a / (b * b) * uv.u * e2, a * a / (b * b * b) * uv.v * e2 * eps};
    return p;
}

Vec lift_orbit(const CmExpansion& cm, const PredictorOptions& o, double eps, double eta) {
    PlanarPoint p = planar_point(cm, o, eps, eta);
    return eval_H(cm, p.w, p.beta);
}

Vec2 lift_parameters(const CmExpansion& cm, const PredictorOptions& o, double eps) {
    return eval_K(effective(cm, o), planar_beta(cm, o, eps));
}

std::array<Series, 2> parameter_series(const CmExpansion& cm0, const PredictorOptions& o, int N) {
    check_opts(cm0, o);
    CmExpansion cm = effective(cm0, o);
    const double a = cm.a, b = cm.b;
    double t0 = 10.0 / 7.0, t2 = 0;
    if (o.order >= 2) t2 = cm.smooth() ? smooth_tau(1.0, smooth_coeffs(cm), 3) - t0 : 288.0 / 2401.0;
    Series b1(N), b2(N);
    if (cm.smooth()) {
        b1 = Series::monomial(N, 4, -4 / a);
        b2 = (Series::monomial(N, 2, t0) + Series::monomial(N, 4, t2)) * (b / a);
    } else {
        b1 = Series::monomial(N, 4, -4 * a * a * a / (b * b * b * b));
        b2 = (Series::monomial(N, 2, t0) + Series::monomial(N, 4, t2)) * (a / b);
    }
    Series b22 = b2 * b2, b23 = b22 * b2, b12 = b1 * b2;
    std::array<Series, 2> out{Series(N), Series(N)};
    for (int i = 0; i < 2; ++i) {
        out[i] = Series::monomial(N, 0, cm.bt.alpha0[i]) + b1 * cm.K10[i] + b2 * cm.K01[i] + b22 * (0.5 * cm.K02[i]) +
                 b12 * cm.K11[i] + b23 * (cm.K03[i] / 6);
    }
    return out;
}

namespace {

// Cumulative table of int_0^s u on panels of width 1/4, |s| <= 40, refined
// inside a panel by 10-point Gauss-Legendre. Beyond 40 the integrand is 2.
struct TimeTable {
    double eps = -1, a = 0, b = 0, a1 = 0, b1 = 0, d = 0, e = 0;
    PredictorOptions o;
    bool smooth = false;
    std::vector<double> I;  // at k*h, k = -K..K
    static constexpr int K = 160;
    static constexpr double h = 0.25;

    bool matches(const CmExpansion& cm, const PredictorOptions& p, double ep) const {
        return ep == eps && cm.a == a && cm.b == b && cm.a1 == a1 && cm.b1 == b1 && cm.d == d && cm.e == e &&
               cm.smooth() == smooth && p.method == o.method && p.phase == o.phase && p.order == o.order &&
               p.xi_identity == o.xi_identity;
    }
};

double gl_panel(const std::function<double(double)>& f, double lo, double hi) {
    static const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                                0.9739065285171717};
    static const double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                0.0666713443086881};
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0;
    for (int i = 0; i < 5; ++i) s += w[i] * (f(c + r * x[i]) + f(c - r * x[i]));
    return s * r;
}

double u_integral(const CmExpansion& cm, const PredictorOptions& o, double eps, double s) {
    thread_local TimeTable tab;
    auto f = [&](double x) { return planar_u(cm, o, eps, x); };
    constexpr int K = TimeTable::K;
    constexpr double h = TimeTable::h;
    if (!tab.matches(cm, o, eps)) {
        tab.eps = eps;
        tab.a = cm.a, tab.b = cm.b, tab.a1 = cm.a1, tab.b1 = cm.b1, tab.d = cm.d, tab.e = cm.e;
        tab.smooth = cm.smooth();
        tab.o = o;
        tab.I.assign(2 * K + 1, 0.0);
        for (int k = 1; k <= K; ++k) {
            tab.I[K + k] = tab.I[K + k - 1] + gl_panel(f, (k - 1) * h, k * h);
            tab.I[K - k] = tab.I[K - k + 1] - gl_panel(f, -k * h, -(k - 1) * h);
        }
    }
    if (s >= K * h) return tab.I[2 * K] + 2 * (s - K * h);
    if (s <= -K * h) return tab.I[0] + 2 * (s + K * h);
    int k = int(std::floor(s / h));
    return tab.I[K + k] + gl_panel(f, k * h, s);
}

}  // namespace

double time_reparam(const CmExpansion& cm, const PredictorOptions& o, double eps, double eta) {
    check_opts(cm, o);
    if (cm.smooth()) return eta;
    const double a = cm.a, b = cm.b;
    double t = eta * (1 + cm.theta0001 * a / b * eps * eps * tau_of(cm, o, eps)) + o.time_shift * eps * eps;
    if (cm.theta1000 != 0) {
        const double s = a / b * eps * eta;
        double I = o.method == Method::RP && o.phase == Phase::VZero ? rp_time_integral(s, eps, o.phase, o.order)
                                                                      : u_integral(cm, o, eps, s);
        t += cm.theta1000 * eps / b * I;
    }
    return t;
}

double time_reparam_derivative(const CmExpansion& cm, const PredictorOptions& o, double eps, double eta) {
    check_opts(cm, o);
    if (cm.smooth()) return 1.0;
    PlanarPoint p = planar_point(cm, o, eps, eta);
    return 1 + cm.theta1000 * p.w[0] + cm.theta0001 * p.beta[1];
}

double invert_time(const CmExpansion& cm, const PredictorOptions& o, double eps, double t) {
    if (cm.smooth()) return t;
    if (cm.theta1000 == 0 && cm.theta0001 == 0 && o.time_shift == 0) return t;
    auto F = [&](double eta) { return time_reparam(cm, o, eps, eta) - t; };
    const double tol = 1e-12 * (1 + std::abs(t));
    double eta = t - o.time_shift * eps * eps;
    double f = F(eta);
    // bracket for the bisection safeguard
    double lo = eta, hi = eta, flo = f, fhi = f;
    double step = 1e-3 * (1 + std::abs(t));
    for (int k = 0; k < 200 && !(flo <= 0 && fhi >= 0); ++k) {
        if (flo > 0) {
            lo -= step;
            flo = F(lo);
        }
        if (fhi < 0) {
            hi += step;
            fhi = F(hi);
        }
        step *= 2;
    }
    if (!(flo <= 0 && fhi >= 0)) throw NoConvergence("invert_time: no bracket found");
    for (int it = 0; it < 100; ++it) {
        if (std::abs(f) <= tol) return eta;
        if (f < 0) lo = eta; else hi = eta;
        double d = time_reparam_derivative(cm, o, eps, eta);
        double next = eta - f / d;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        eta = next;
        f = F(eta);
    }
    if (std::abs(f) <= tol) return eta;
    throw NoConvergence("invert_time did not converge");
}

Vec saddle_point(const CmExpansion& cm, const PredictorOptions& o, double eps) {
    check_opts(cm, o);
    const double a = cm.a, b = cm.b, e2 = eps * eps;
    double w0;
    if (cm.smooth()) {
        double corr = o.order >= 2 ? 2 * (5 * cm.a1 * b + 7 * cm.d) / (7 * a * a) * e2 : 0.0;
        w0 = (2 - corr) * e2 / a;
    } else {
        w0 = 2 * a / (b * b) * e2;
    }
    return eval_H(cm, Vec2(w0, 0), planar_beta(cm, o, eps));
}

double amplitude_to_eps(double A0, double a, double b, Variant v) {
    if (!(A0 > 0)) throw std::invalid_argument("amplitude must be positive");
    if (v == Variant::Orbital) return std::abs(b) * std::sqrt(A0 / (6 * std::abs(a)));
    return std::sqrt(A0 * std::abs(a) / 6);
}

double eps_to_amplitude(double eps, double a, double b, Variant v) {
    if (v == Variant::Orbital) return 6 * std::abs(a) * eps * eps / (b * b);
    return 6 * eps * eps / std::abs(a);
}

static double arcsech(double x) { return std::log((1 + std::sqrt(1 - x * x)) / x); }

double ttol_to_T(double k, double eps, double A0, const CmExpansion& cm, const PredictorOptions& o) {
    if (!(k > 0) || !(k < A0)) throw std::invalid_argument("need 0 < k < A0");
    if (cm.smooth()) return arcsech(std::sqrt(k / A0)) / eps;
    const double a = cm.a, b = cm.b;
    double arg = std::abs(b) / eps * std::sqrt(k / (6 * std::abs(a)));
    if (!(arg < 1)) throw std::invalid_argument("k too large for this eps");
    double etaT = std::abs(b / a / eps * arcsech(arg));
    return time_reparam(cm, o, eps, etaT);
}

Vec2 dalpha_deps(const CmExpansion& cm0, const PredictorOptions& o, double eps) {
    check_opts(cm0, o);
    CmExpansion cm = effective(cm0, o);
    const double a = cm.a, b = cm.b, e2 = eps * eps;
    const double t0 = 10.0 / 7.0;
    double t2 = 0;
    if (o.order >= 2) t2 = cm.smooth() ? smooth_tau(1.0, smooth_coeffs(cm), 3) - t0 : 288.0 / 2401.0;
    double b1p, b2p;
    if (cm.smooth()) {
        b1p = -16 / a * e2 * eps;
        b2p = b / a * (2 * t0 + 4 * t2 * e2) * eps;
    } else {
        b1p = -16 * a * a * a / (b * b * b * b) * e2 * eps;
        b2p = a / b * (2 * t0 + 4 * t2 * e2) * eps;
    }
    Vec2 be = planar_beta(cm, o, eps);
    return cm.K10 * b1p + cm.K01 * b2p + cm.K02 * be[1] * b2p + cm.K11 * (b1p * be[1] + be[0] * b2p) +
           0.5 * cm.K03 * be[1] * be[1] * b2p;
}

int tangent_orientation(double tangent_alpha1, const CmExpansion& cm, const PredictorOptions& o, double eps) {
    if (tangent_alpha1 == 0) throw std::invalid_argument("tangent has zero alpha1 component");
    double d = dalpha_deps(cm, o, eps)[0];
    if (d == 0) throw std::invalid_argument("d alpha1/d eps vanishes");
    return tangent_alpha1 * d > 0 ? 1 : -1;
}

HomPredictor sample_predictor_T(const CmExpansion& cm, const PredictorOptions& o, double eps, const Mesh& mesh,
                                double T) {
    check_opts(cm, o);
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    HomPredictor p;
    p.method = o.method;
    p.variant = cm.variant;
    p.options = o;
    p.eps = eps;
    p.T = T;
    p.mesh = mesh;
    p.A0 = eps_to_amplitude(eps, cm.a, cm.b, cm.variant);
    p.alpha = lift_parameters(cm, o, eps);
    p.s0 = saddle_point(cm, o, eps);
    p.orbit.resize(mesh.fine.size());
    for (size_t i = 0; i < mesh.fine.size(); ++i) {
        double t = -T + 2 * T * mesh.fine[i];
        double eta = invert_time(cm, o, eps, t);
        p.orbit[i] = lift_orbit(cm, o, eps, eta);
    }
    p.eps0 = (p.orbit.front() - p.s0).norm();
    p.eps1 = (p.orbit.back() - p.s0).norm();
    double d = dalpha_deps(cm, o, eps)[0];
    p.tangent_sign = d >= 0 ? 1 : -1;
    return p;
}

HomPredictor sample_predictor(const CmExpansion& cm, const PredictorOptions& o, double eps, const Mesh& mesh,
                              double k) {
    double A0 = eps_to_amplitude(eps, cm.a, cm.b, cm.variant);
    double T = ttol_to_T(k, eps, A0, cm, o);
    HomPredictor p = sample_predictor_T(cm, o, eps, mesh, T);
    p.k = k;
    return p;
}

}  // namespace bt
