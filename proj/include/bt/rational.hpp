#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace bt {

using Rational = mpq_class;

// Dense polynomial in zeta with exact rational coefficients, ascending degree.
class RationalPoly {
public:
    RationalPoly() = default;
    RationalPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
    static RationalPoly constant(const Rational& v) { return RationalPoly({v}); }
    // Integer coefficients, ascending.
    static RationalPoly from_ints(std::initializer_list<long> c);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Rational coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Rational(0); }
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational eval(const Rational& z) const;
    double eval(double z) const;
    RationalPoly derivative() const;
    // Antiderivative vanishing at zero.
    RationalPoly integral() const;
    // Exact division; remainder returned through rem.
    RationalPoly divmod(const RationalPoly& d, RationalPoly& rem) const;

    RationalPoly& operator+=(const RationalPoly& o);
    RationalPoly& operator-=(const RationalPoly& o);
    RationalPoly& operator*=(const Rational& s);
    friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
    friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
    friend RationalPoly operator*(RationalPoly a, const Rational& s) { return a *= s; }
    friend RationalPoly operator*(const Rational& s, RationalPoly a) { return a *= s; }
    friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

    std::string str(const char* var = "z") const;

private:
    void trim();
    std::vector<Rational> c_;
};

}  // namespace bt
