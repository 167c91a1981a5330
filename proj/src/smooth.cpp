#include <complex>
#include <stdexcept>

#include "bt/asymptotics.hpp"
#include "bt/hyp.hpp"

namespace bt {

namespace {

void check(const SmoothCoeffs& c) {
    if (c.a == 0 || c.b == 0) throw std::invalid_argument("smooth series need a != 0 and b != 0");
}

template <class T>
T smooth_u(int i, T s, const SmoothCoeffs& c) {
    const double a = c.a, b = c.b, a1 = c.a1, b1 = c.b1, d = c.d, e = c.e;
    T t = std::tanh(s), S = hyp::sech2(s), L = hyp::lc(s);
    const double K1 = 35 * a1 * b - 36 * b * b + 98 * d;
    switch (i) {
        case 0: return 6.0 * t * t - 4.0;
        case 1: return -72.0 * b / (7.0 * a) * t * S * L;
        case 2: {
            T L2 = L * L;
            T v = 12.0 * s * 2.0 * t * S * K1 +
                  8.0 * S * (2.0 - S) * (7.0 * (5 * a1 * b + 9 * b * b - 56 * d) - 108.0 * b * b * L2 + 108.0 * b * b * L) +
                  9.0 * S * S * (35 * a1 * b + 192.0 * b * b * L2 - 96.0 * b * b * L - 64 * b * b + 245 * d) -
                  7.0 * (8.0 - 8.0 * S + S * S) * (5 * a1 * b + 7 * d);
            return v / (196.0 * a * a);
        }
        case 3: {
            T L2 = L * L, L3 = L2 * L;
            const double b3 = b * b * b;
            T X = -6.0 * b * L * (-980 * (a * b1 + 3 * d) + 1225 * a1 * b + 312 * b * b) +
                  7 * (-1372 * a * e + 234 * b3 + 147 * b * d) + 2016.0 * b3 * L3 - 6048.0 * b3 * L2;
            T Y = 6.0 * b * L * (980 * a * b1 - 1225 * a1 * b + 1200 * b * b - 9408 * d) +
                  7 * (1372 * a * e - 234 * b3 - 147 * b * d) - 10080.0 * b3 * L3 + 15120.0 * b3 * L2;
            T v = -2.0 * (t * S * (2.0 - S) * X + t * S * S * Y) + 42.0 * b * s * S * (4.0 - 3.0 * S) * K1 * (2.0 * L - 1.0) -
                  42.0 * b * s * S * S * K1 * (6.0 * L - 1.0);
            return 3.0 * v / (4802.0 * a * a * a);
        }
    }
    return T(0);
}

}  // namespace

double smooth_tau(double eps, const SmoothCoeffs& c, int order) {
    check(c);
    const double a = c.a, b = c.b;
    double t2 = (98 * b * (50 * a * c.b1 + 73 * c.d) - 9604 * a * c.e - 2450 * c.a1 * b * b + 288 * b * b * b) /
                (2401 * a * a * b);
    return 10.0 / 7.0 + (order >= 2 ? t2 * eps * eps : 0.0);
}

double smooth_rp_term(int i, double s, const SmoothCoeffs& c) {
    check(c);
    if (i < 0 || i > 3) throw std::invalid_argument("term index must be 0..3");
    return smooth_u(i, s, c);
}

double smooth_rp_term_dot(int i, double s, const SmoothCoeffs& c) {
    check(c);
    if (i < 0 || i > 3) throw std::invalid_argument("term index must be 0..3");
    const double h = 1e-30;
    return std::imag(smooth_u(i, std::complex<double>(s, h), c)) / h;
}

void smooth_omega_coeffs(double z, const SmoothCoeffs& c, double w[4]) {
    check(c);
    const double a = c.a, b = c.b, a1 = c.a1, b1 = c.b1, d = c.d, e = c.e, z2 = z * z;
    w[0] = 1;
    w[1] = -6 * b / (7 * a) * z;
    w[2] = (70 * a1 * b + 18 * b * b * (3 * z2 + 1) + 49 * d * (9 * z2 - 5)) / (196 * a * a);
    w[3] = z / (2401 * a * a * a) *
           (-147 * b * (20 * a * b1 - 7 * d * z2 + 11 * d) - 9604 * a * e * (z2 - 1) + 1470 * a1 * b * b +
            18 * b * b * b * (7 * z2 - 11));
}

double smooth_xi(double s, double eps, const SmoothCoeffs& c, int order) {
    check(c);
    const double a = c.a, b = c.b, a1 = c.a1, b1 = c.b1, d = c.d, e = c.e, b3 = b * b * b;
    const double t = std::tanh(s), S = hyp::sech2(s), L = hyp::lc(s);
    double x[4];
    x[0] = s;
    x[1] = -6 * b / (7 * a) * L;
    x[2] = (2 * s * (35 * a1 * b - 36 * b * b + 98 * d) + 9 * t * (16 * b * b * L + 10 * b * b - 49 * d)) / (196 * a * a);
    x[3] = (-7 * S * (1372 * a * e - 27 * b * (6 * b * b + 49 * d) * L + 216 * b3 * L * L - 234 * b3 - 147 * b * d) -
            5880 * a * b * b1 * L + 9604 * a * e + 42 * b * s * t * (-35 * a1 * b + 36 * b * b - 98 * d) +
            4410 * a1 * b * b * L - 1656 * b3 * L - 1638 * b3 + 2940 * b * d * L - 1029 * b * d) /
           (4802 * a * a * a);
    double r = 0, p = 1;
    for (int i = 0; i <= order && i < 4; ++i, p *= eps) r += p * x[i];
    return r;
}

Orbit2 smooth_orbit(double sz, double eps, const SmoothCoeffs& c, Method m, int order) {
    check(c);
    if (order < 0 || order > 3) throw std::invalid_argument("order must be 0..3");
    Orbit2 o;
    double p = 1;
    if (m == Method::RP) {
        for (int i = 0; i <= order; ++i, p *= eps) {
            o.u += p * smooth_rp_term(i, sz, c);
            o.v += p * smooth_rp_term_dot(i, sz, c);
        }
        return o;
    }
    const double z = sz, a = c.a, b = c.b;
    double u[4] = {6 * z * z - 4, 0, 0, 0}, du[4] = {12 * z, 0, 0, 0}, w[4];
    u[2] = (-70 * c.a1 * b * (3 * z * z - 2) + 18 * b * b * (z * z - 1) + 49 * c.d * (3 * z * z - 5)) / (49 * a * a);
    du[2] = (-420 * c.a1 * b * z + 36 * b * b * z + 294 * c.d * z) / (49 * a * a);
    smooth_omega_coeffs(z, c, w);
    for (int k = 0; k <= order; ++k, p *= eps) {
        o.u += p * u[k];
        double s = 0;
        for (int i = 0; i <= k; ++i) s += w[i] * du[k - i];
        o.v += p * (1 - z * z) * s;
    }
    return o;
}

}  // namespace bt
