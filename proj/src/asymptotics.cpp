#include "bt/asymptotics.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "bt/hyp.hpp"

namespace bt {

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::VZero: return "vzero";
        case Phase::L2: return "l2";
        case Phase::AltGamma: return "altgamma";
    }
    return "?";
}

Phase parse_phase(const std::string& s) {
    if (s == "vzero" || s == "VZero") return Phase::VZero;
    if (s == "l2" || s == "L2") return Phase::L2;
    if (s == "altgamma" || s == "AltGamma") return Phase::AltGamma;
    throw std::invalid_argument("unknown phase condition: " + s);
}

const char* method_name(Method m) { return m == Method::RP ? "rp" : "lp"; }

Method parse_method(const std::string& s) {
    if (s == "rp" || s == "RP") return Method::RP;
    if (s == "lp" || s == "LP") return Method::LP;
    throw std::invalid_argument("unknown method: " + s);
}

double log_cosh(double s) { return hyp::lc(s); }

Orbit2 u0(double s) {
    double t = std::tanh(s), S = hyp::sech2(s);
    return {6 * t * t - 4, 12 * t * S};
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

namespace {

constexpr double kLn2 = 0.69314718055994530942;

template <class T>
T rp_vzero(int i, T s) {
    using hyp::lc;
    T t = std::tanh(s), S = hyp::sech2(s), L = lc(s);
    switch (i) {
        case 0: return 6.0 * t * t - 4.0;
        case 1: return -72.0 / 7.0 * t * S * L;
        case 2:
            return 18.0 / 49.0 * S * (-12.0 * s * t - 24.0 * (L - 1.0) * L + 3.0 * S * (-32.0 * L + 12.0 * L * (L + 2.0) - 5.0) + 14.0);
        case 3: {
            T s3 = S * (3.0 * t * S + 4.0 * t * t * t);  // sech^5 sinh 3s
            T tS2 = t * S * S;                             // sech^5 sinh s
            T c3 = S * (4.0 - 3.0 * S);                    // sech^5 cosh 3s
            T L2 = L * L, L3 = L2 * L;
            T br = -273.0 * tS2 + 91.0 * s3 + 84.0 * s * c3 * (2.0 * L - 1.0) - 84.0 * s * S * S * (6.0 * L - 1.0) -
                   1232.0 * tS2 * L3 + 112.0 * s3 * L3 + 2016.0 * tS2 * L2 - 336.0 * s3 * L2 + 904.0 * tS2 * L -
                   104.0 * s3 * L;
            return -27.0 / 2401.0 * br;
        }
    }
    return T(0);
}

// L2 phase. The printed third-order term is a particular solution; the
// phase condition adds gamma3 times the translation mode.
template <class T>
T rp_l2(int i, T s) {
    T t = std::tanh(s), S = hyp::sech2(s), L = hyp::lc(s), M = L + kLn2;
    T ud0 = 12.0 * t * S;
    switch (i) {
        case 0: return 6.0 * t * t - 4.0;
        case 1: return 3.0 / 245.0 * (59.0 - 70.0 * M) * ud0;
        case 2:
            return 36.0 / 60025.0 * S *
                   (3.0 * S * (70.0 * M * (105.0 * M - 247.0) + 6289.0) -
                    2.0 * (3675.0 * s * t + 210.0 * M * (35.0 * M - 94.0) + 7129.0));
        case 3: {
            T M2 = M * M, M3 = M2 * M;
            T inner = S * 3675.0 * s * (210.0 * M - 247.0) +
                      t * (-171500.0 * (2.0 - 6.0 * S) * M3 + 7350.0 * (258.0 - 599.0 * S) * M2 +
                           S * (4456830.0 * M - 966242.0));
            T p3 = 216.0 * S / 14706125.0 * (inner - 70.0 * (210.0 * s * (35.0 * M - 47.0) + 30673.0 * t * L));
            return p3 + rp_gamma3_l2() * ud0;
        }
    }
    return T(0);
}

template <class T>
T rp_any(int i, T s, Phase ph) {
    if (ph == Phase::VZero) return rp_vzero(i, s);
    if (ph == Phase::L2) return rp_l2(i, s);
    throw std::invalid_argument("regular perturbation supports the vzero and l2 phases only");
}

template <class F>
double cstep(F f, double s) {
    const double h = 1e-30;
    return std::imag(f(std::complex<double>(s, h))) / h;
}

}  // namespace

double rp_term(int i, double s, Phase ph) {
    if (i < 0 || i > 3) throw std::invalid_argument("term index must be 0..3");
    return rp_any(i, s, ph);
}

double rp_term_dot(int i, double s, Phase ph) {
    if (i < 0 || i > 3) throw std::invalid_argument("term index must be 0..3");
    return cstep([&](std::complex<double> z) { return rp_any(i, z, ph); }, s);
}

Orbit2 rp_orbit(double s, double eps, Phase ph, int order) {
    if (order < 0 || order > 3) throw std::invalid_argument("order must be 0..3");
    Orbit2 o;
    double p = 1;
    for (int i = 0; i <= order; ++i, p *= eps) {
        o.u += p * rp_term(i, s, ph);
        o.v += p * rp_term_dot(i, s, ph);
    }
    return o;
}

double rp_tau(double eps, int order) { return 10.0 / 7.0 + (order >= 2 ? 288.0 / 2401.0 * eps * eps : 0.0); }
double lp_tau(double eps, int order) { return rp_tau(eps, order); }

double rp_gamma1_l2() { return -3.0 / 245.0 * (70.0 * kLn2 - 59.0); }

double rp_gamma3_l2() {
    using boost::math::constants::pi;
    const double z3 = 1.2020569031595942854;
    const double p = pi<double>();
    return 264.0 * z3 / 343.0 - 884895199.0 / 7147176750.0 - 100.0 * p * p / 3087.0 - 1104228.0 * kLn2 / 420175.0;
}

double gamma_functional(const std::function<double(double)>& u) {
    auto f = [&](double s) {
        Orbit2 o = u0(s);
        return o.v * (1 - 2 * o.u) * u(s);
    };
    double v = integrate(f, 0, 5) + integrate(f, 5, 20) + integrate(f, 20, 60);
    return -35.0 / 2592.0 * v;
}

namespace {

// Antiderivatives of u0..u3 for the vzero phase.
double I_rp(int k, double s) {
    double t = std::tanh(s), S = hyp::sech2(s), L = hyp::lc(s);
    switch (k) {
        case 0: return 2 * (s - 3 * t);
        case 1: return -18.0 / 7.0 * (t * t - 2 * S * L);
        case 2: return -9.0 / 49.0 * (2 * t * (2 - S) + 2 * t * S * (6 - 12 * L * L) - 12 * s * S);
        case 3: {
            double L2 = L * L, L3 = L2 * L;
            double v = (8 - 8 * S + S * S) + S * (2 - S) * (-112 * L3 + 168 * L2 + 188 * L + 7) +
                       8 * S * S * (28 * L3 - 21 * L2 - 29 * L - 1) - 336 * s * t * S * L;
            return -27.0 / 2401.0 * v;
        }
    }
    return 0;
}

}  // namespace

double rp_time_integral(double s, double eps, Phase ph, int order) {
    double r = 0, p = 1;
    if (ph == Phase::VZero) {
        for (int k = 0; k <= order; ++k, p *= eps) r += p * (I_rp(k, s) - I_rp(k, 0));
        return r;
    }
    return integrate([&](double x) { return rp_orbit(x, eps, ph, order).u; }, 0, s);
}

// ---- closed-form integrals ----

double ClosedForm::value() const {
    using boost::math::constants::pi;
    const double z3 = 1.2020569031595942854;
    const double p = pi<double>();
    return r.get_d() + pi2.get_d() * p * p + zeta3.get_d() * z3;
}

ClosedForm In_closed_exact(int n) {
    if (n < 4 || n > 64 || n % 2) throw std::invalid_argument("n must be even with 4 <= n <= 64");
    const int m = n / 2;
    // harmonic numbers H^(p)_j for j <= 2m
    const int J = 2 * m + 1;
    std::vector<Rational> H1(J + 1), H2(J + 1), H3(J + 1);
    for (int j = 1; j <= J; ++j) {
        Rational q(1, j);
        H1[j] = H1[j - 1] + q;
        H2[j] = H2[j - 1] + q * q;
        H3[j] = H3[j - 1] + q * q * q;
    }
    ClosedForm cf{0, 0, 0};
    mpz_class binom = 1;  // C(m-1, k)
    for (int k = 0; k <= m - 1; ++k) {
        if (k > 0) binom = binom * (m - k) / k;
        Rational c(binom);
        if (k % 2) c = -c;
        const int N = 2 * k + n, j = m + k;
        Rational N1(1, N), jq(1, j);
        Rational rat = jq * jq * jq * jq + 8 * N1 * (H1[j] * N1 * N1 + H2[j] * N1 / 2 + H3[j] / 4);
        cf.r += c * rat;
        cf.pi2 += c * Rational(-2, 3) * N1 * N1;
        cf.zeta3 += c * Rational(-2) * N1;
    }
    mpz_class pre = 3;
    pre <<= (n - 3);
    Rational f(pre);
    cf.r *= f;
    cf.pi2 *= f;
    cf.zeta3 *= f;
    cf.r.canonicalize();
    cf.pi2.canonicalize();
    cf.zeta3.canonicalize();
    return cf;
}

double In_closed(int n) { return In_closed_exact(n).value(); }

double In_quadrature(int n) {
    auto f = [n](double s) {
        double M = hyp::lc(s) + kLn2;
        return M * M * M * std::pow(hyp::sech2(s), 0.5 * n);
    };
    return integrate(f, 0, 4) + integrate(f, 4, 20) + integrate(f, 20, 80);
}

// ---- Lindstedt-Poincare, floating third order ----

double alt_gamma1() {
    const double c = std::cbrt(836.0 + 15.0 * std::sqrt(4019.0));
    return (-4.0 - 59.0 / c + c) / 35.0;
}

void lp_omega_coeffs(double z, Phase ph, double w[4]) {
    const double z2 = z * z;
    w[0] = 1;
    w[1] = -6.0 / 7.0 * z;
    w[2] = 9.0 / 98.0 + 27.0 / 98.0 * z2;
    w[3] = 18.0 / 343.0 * z2 * z - 198.0 / 2401.0 * z;
    if (ph == Phase::AltGamma) {
        const double g = alt_gamma1();
        w[2] += g * (6.0 / 7.0 + 1.5 * g) * (z2 - 1);
        w[3] = z * (12005 * g * g * g * (z2 - 1) - 2058 * g * g * (z2 - 1) - 1323 * g * (z2 - 1) + 126 * z2 - 198) /
               2401.0;
    }
}

double lp_omega(double z, double eps, Phase ph, int order) {
    double w[4];
    lp_omega_coeffs(z, ph, w);
    double r = 0, p = 1;
    for (int i = 0; i <= order && i < 4; ++i, p *= eps) r += p * w[i];
    return r;
}

namespace {

// u~(zeta) coefficients and their zeta-derivatives.
void lp_u_coeffs(double z, Phase ph, double u[4], double du[4]) {
    const double q = 1 - z * z;
    for (int i = 0; i < 4; ++i) u[i] = du[i] = 0;
    u[0] = 2 - 6 * q;
    du[0] = 12 * z;
    if (ph == Phase::AltGamma) {
        const double g = alt_gamma1();
        u[1] = 12 * g * z * q;
        du[1] = 12 * g * (1 - 3 * z * z);
        u[2] = (6 * g * g - 18.0 / 49.0) * q;
        du[2] = -2 * z * (6 * g * g - 18.0 / 49.0);
    } else {
        u[2] = -18.0 / 49.0 * q;
        du[2] = 36.0 / 49.0 * z;
    }
}

}  // namespace

Orbit2 lp_orbit_third(double z, double eps, Phase ph, int order) {
    if (order < 0 || order > 3) throw std::invalid_argument("order must be 0..3");
    if (ph == Phase::L2) throw std::invalid_argument("the l2 phase is defined for regular perturbation only");
    double u[4], du[4], w[4];
    lp_u_coeffs(z, ph, u, du);
    lp_omega_coeffs(z, ph, w);
    Orbit2 o;
    double p = 1;
    for (int k = 0; k <= order; ++k, p *= eps) {
        o.u += p * u[k];
        double c = 0;
        for (int i = 0; i <= k; ++i) c += w[i] * du[k - i];
        o.v += p * (1 - z * z) * c;
    }
    return o;
}

double xi_of_s(double s, double eps, Phase ph, int order) {
    if (ph == Phase::L2) throw std::invalid_argument("the l2 phase is defined for regular perturbation only");
    const double t = std::tanh(s), S = hyp::sech2(s), L = hyp::lc(s);
    double x[4] = {s, -6.0 / 7.0 * L, -18.0 * s / 49.0 + 45.0 * t / 98.0 + 36.0 / 49.0 * t * L, 0};
    if (ph == Phase::VZero) {
        x[3] = -117.0 / 343.0 +
               3 * (S * (-504 * L * L + 102 * L + 546) - 276 * L * (2 - S) + 14 * 18 * s * 2 * t) / 4802.0;
    } else {
        const double g = alt_gamma1();
        x[2] -= g * (6.0 / 7.0 + 1.5 * g) * t;
        x[3] = (18 * (49 * g * (7 * g + 4) + 84 * s * t - 92 * L - 105) -
                7 * S * (-7 * g * (7 * g - 3) * (35 * g + 9) - 18 * (7 * g * (7 * g + 4) + 9) * L + 216 * L * L - 234)) /
               4802.0;
    }
    double r = 0, p = 1;
    for (int i = 0; i <= order && i < 4; ++i, p *= eps) r += p * x[i];
    return r;
}

double lp_time_integral_printed(double xi, double eps) {
    auto J = [eps](double x) {
        double t = std::tanh(x), S = hyp::sech2(x), L = hyp::lc(x);
        return 2 * x - 6 * t + (18 * S / 7 + 12 * L / 7) * eps + 9.0 / 49.0 * (4 * x - 9 * t + 5 * t * S) * eps * eps +
               18 * (-21 * S * S + 47 * S + 8 * L) / 2401.0 * eps * eps * eps;
    };
    return J(xi) - J(0);
}

double lp_time_integral(double s, double eps, Phase ph, int order, bool xi_identity) {
    auto f = [&](double x) {
        double xi = xi_identity ? x : xi_of_s(x, eps, ph, order);
        return lp_orbit_third(std::tanh(xi), eps, ph, order).u;
    };
    return integrate(f, 0, s);
}

double oscillator_residual(const std::function<double(double)>& u, double s, double eps, double tau) {
    // sixth-order central differences
    const double h = 1e-2;
    double f[7];
    for (int k = -3; k <= 3; ++k) f[k + 3] = u(s + k * h);
    double d1 = (-f[0] + 9 * f[1] - 45 * f[2] + 45 * f[4] - 9 * f[5] + f[6]) / (60 * h);
    double d2 = (2 * f[0] - 27 * f[1] + 270 * f[2] - 490 * f[3] + 270 * f[4] - 27 * f[5] + 2 * f[6]) / (180 * h * h);
    return d2 - (-4 + f[3] * f[3] + eps * d1 * (f[3] + tau));
}

}  // namespace bt
