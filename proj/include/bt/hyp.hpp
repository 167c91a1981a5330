#pragma once

// Overflow-safe hyperbolic helpers, usable with double and std::complex<double>
// (the latter for complex-step derivatives).

#include <cmath>
#include <complex>

namespace bt::hyp {

inline double re(double x) { return x; }
inline double re(const std::complex<double>& x) { return x.real(); }

// log cosh s
template <class T>
T lc(T s) {
    if (re(s) < 0) s = -s;
    return s + std::log(1.0 + std::exp(-2.0 * s)) - 0.69314718055994530942;
}

// sech^2 s = 4 e^{-2s} / (1 + e^{-2s})^2
template <class T>
T sech2(T s) {
    if (re(s) < 0) s = -s;
    T e = std::exp(-2.0 * s);
    T d = 1.0 + e;
    return 4.0 * e / (d * d);
}

}  // namespace bt::hyp
