#include "bt/series.hpp"

#include <cmath>
#include <stdexcept>

namespace bt {

Series::Series(int N, std::vector<double> c) : N_(N), c_(std::move(c)) {
    if (N < 0) throw std::invalid_argument("series order must be >= 0");
    c_.resize(N + 1, 0.0);
}

Series Series::monomial(int N, int k, double v) {
    Series s(N);
    if (k <= N) s.c_[k] = v;
    return s;
}

Series& Series::operator+=(const Series& o) {
    for (int k = 0; k <= N_; ++k) c_[k] += o[k];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    for (int k = 0; k <= N_; ++k) c_[k] -= o[k];
    return *this;
}

Series& Series::operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    int N = std::min(a.N_, b.N_);
    Series r(N);
    for (int i = 0; i <= N; ++i) {
        if (a.c_[i] == 0) continue;
        for (int j = 0; i + j <= N; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
}

// Power by the J.C.P. Miller recurrence.
Series Series::pow(double p) const {
    if (!(c_[0] > 0)) throw std::domain_error("series pow needs a positive constant term");
    Series r(N_);
    r.c_[0] = std::pow(c_[0], p);
    for (int k = 1; k <= N_; ++k) {
        double s = 0;
        for (int j = 1; j <= k; ++j) s += (p * j - (k - j)) * c_[j] * r.c_[k - j];
        r.c_[k] = s / (k * c_[0]);
    }
    return r;
}

Series Series::compose(const Series& g) const {
    if (g[0] != 0) throw std::domain_error("inner series must vanish at zero");
    const int N = std::min(N_, g.N_);
    Series r(N), p = Series::monomial(N, 0);
    for (int k = 0; k <= N; ++k) {
        if (k > 0) p = p * g;
        Series t = p;
        t *= c_[k];
        r += t;
    }
    return r;
}

// Newton iteration on the truncated series: g <- g - (f(g) - x)/f'(g).
Series Series::reverse() const {
    if (c_[0] != 0 || N_ < 1 || c_[1] == 0) throw std::domain_error("series not invertible");
    Series x = Series::monomial(N_, 1);
    Series g = x * (1.0 / c_[1]);
    Series df(N_);
    for (int k = 1; k <= N_; ++k) df.c_[k - 1] = k * c_[k];
    for (int it = 0; it < 2 * N_ + 2; ++it) {
        Series err = compose(g) - x;
        Series d = df.compose(g);
        // 1/d as a series
        Series inv(N_);
        inv.c_[0] = 1.0 / d[0];
        for (int k = 1; k <= N_; ++k) {
            double s = 0;
            for (int j = 1; j <= k; ++j) s += d[j] * inv.c_[k - j];
            inv.c_[k] = -s / d[0];
        }
        g -= err * inv;
    }
    return g;
}

Series Series::shift_down(int k, double tol) const {
    for (int j = 0; j < k && j <= N_; ++j)
        if (std::abs(c_[j]) > tol) throw std::domain_error("series does not vanish to the requested order");
    Series r(std::max(N_ - k, 0));
    for (int j = k; j <= N_; ++j) r.c_[j - k] = c_[j];
    return r;
}

double Series::eval(double x) const {
    double r = 0;
    for (int k = N_; k >= 0; --k) r = r * x + c_[k];
    return r;
}

}  // namespace bt
