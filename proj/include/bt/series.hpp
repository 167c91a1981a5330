#pragma once

#include <vector>

namespace bt {

// Truncated power series sum c[k] x^k, k <= N.
class Series {
public:
    explicit Series(int N, std::vector<double> c = {});
    static Series monomial(int N, int k, double v = 1.0);

    int order() const { return N_; }
    double operator[](int k) const { return k <= N_ ? c_[k] : 0.0; }
    double& operator[](int k) { return c_.at(k); }
    const std::vector<double>& coeffs() const { return c_; }

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(double s);
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, double s) { return a *= s; }
    friend Series operator*(double s, Series a) { return a *= s; }
    friend Series operator*(const Series& a, const Series& b);

    // f(x)^p for f(0) > 0.
    Series pow(double p) const;
    // f(g(x)) with g(0) = 0.
    Series compose(const Series& g) const;
    // g with f(g(x)) = x; needs f(0) = 0, f'(0) != 0.
    Series reverse() const;
    // f(x) / x^k; the first k coefficients must vanish.
    Series shift_down(int k, double tol = 0.0) const;
    double eval(double x) const;

private:
    int N_;
    std::vector<double> c_;
};

}  // namespace bt
