#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bt/rational.hpp"

namespace bt {

enum class Phase { VZero, L2, AltGamma };
const char* phase_name(Phase p);
Phase parse_phase(const std::string& s);

enum class Method { RP, LP };
const char* method_name(Method m);
Method parse_method(const std::string& s);

struct Orbit2 {
    double u = 0, v = 0;
};

// 6 tanh^2 s - 4 and its derivative.
Orbit2 u0(double s);

// log cosh s without overflow.
double log_cosh(double s);

// Adaptive Gauss-Kronrod on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b);

// Regular perturbation (orbital normal form). Phase VZero or L2.
double rp_term(int i, double s, Phase ph);
double rp_term_dot(int i, double s, Phase ph);
Orbit2 rp_orbit(double s, double eps, Phase ph, int order = 3);
double rp_tau(double eps, int order = 3);

double rp_gamma1_l2();
double rp_gamma3_l2();
// -(35/2592) int_0^inf u0'(1 - 2 u0) u ds by adaptive quadrature.
double gamma_functional(const std::function<double(double)>& u);

// int_0^s u(sigma) dsigma for the truncated regular perturbation series.
double rp_time_integral(double s, double eps, Phase ph, int order = 3);

// I_n = int_0^inf log^3(2 cosh s) sech^n s ds = r + p pi^2 + z zeta(3).
struct ClosedForm {
    Rational r, pi2, zeta3;
    double value() const;
};
ClosedForm In_closed_exact(int n);
double In_closed(int n);
double In_quadrature(int n);

// Exact Lindstedt-Poincare recursion for the quadratic normal form.
struct LpSeries {
    int order = 0;
    std::vector<Rational> tau, sigma, delta;
    std::vector<RationalPoly> omega;
};
LpSeries lp_solve_quadratic(int order);

// Real root of the cubic selecting the alternative phase.
double alt_gamma1();

// Coefficients omega_i(zeta) of the third-order LP time map, i = 0..3.
void lp_omega_coeffs(double zeta, Phase ph, double out[4]);
double lp_omega(double zeta, double eps, Phase ph, int order = 3);
Orbit2 lp_orbit_third(double zeta, double eps, Phase ph, int order = 3);
double lp_tau(double eps, int order = 3);

// xi(s) = s + sum xi_i(s) eps^i.
double xi_of_s(double s, double eps, Phase ph, int order = 3);
// int_0^xi u/omega dxi as printed (VZero, third order).
double lp_time_integral_printed(double xi, double eps);
// int_0^s u(tanh xi(sigma)) dsigma by quadrature (any phase, any order).
double lp_time_integral(double s, double eps, Phase ph, int order = 3, bool xi_identity = false);

// Smooth normal form.
struct SmoothCoeffs {
    double a = 1, b = 1, a1 = 0, b1 = 0, d = 0, e = 0;
};
double smooth_tau(double eps, const SmoothCoeffs& c, int order = 3);
double smooth_rp_term(int i, double s, const SmoothCoeffs& c);
double smooth_rp_term_dot(int i, double s, const SmoothCoeffs& c);
void smooth_omega_coeffs(double zeta, const SmoothCoeffs& c, double out[4]);
double smooth_xi(double s, double eps, const SmoothCoeffs& c, int order = 3);
// RP: argument is s. LP: argument is zeta.
Orbit2 smooth_orbit(double s_or_zeta, double eps, const SmoothCoeffs& c, Method m, int order = 3);

// Residual of u'' = -4 + u^2 + eps u'(u + tau) for a planar series u(s).
double oscillator_residual(const std::function<double(double)>& u, double s, double eps, double tau);

}  // namespace bt
