#include "bt/rational.hpp"

#include <stdexcept>

namespace bt {

RationalPoly RationalPoly::from_ints(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return RationalPoly(std::move(v));
}

void RationalPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPoly::eval(const Rational& z) const {
    Rational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
    return r;
}

double RationalPoly::eval(double z) const {
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + it->get_d();
    return r;
}

RationalPoly RationalPoly::derivative() const {
    std::vector<Rational> d;
    for (size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
    return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::integral() const {
    if (c_.empty()) return {};
    std::vector<Rational> r(c_.size() + 1);
    for (size_t k = 0; k < c_.size(); ++k) {
        r[k + 1] = c_[k] / static_cast<long>(k + 1);
        r[k + 1].canonicalize();
    }
    return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::divmod(const RationalPoly& d, RationalPoly& rem) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> r = c_;
    const int dd = d.degree();
    const int nq = degree() - dd + 1;
    std::vector<Rational> q(std::max(nq, 0));
    for (int k = nq - 1; k >= 0; --k) {
        Rational t = r[k + dd] / d.c_[dd];
        q[k] = t;
        if (t == 0) continue;
        for (int j = 0; j <= dd; ++j) r[k + j] -= t * d.c_[j];
    }
    rem = RationalPoly(std::move(r));
    return RationalPoly(std::move(q));
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

RationalPoly& RationalPoly::operator*=(const Rational& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return RationalPoly(std::move(r));
}

std::string RationalPoly::str(const char* var) const {
    if (c_.empty()) return "0";
    std::string s;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        std::string t = c_[k].get_str();
        if (!s.empty()) s += (t[0] == '-') ? " - " : " + ";
        else if (t[0] == '-') s += "-";
        if (t[0] == '-') t = t.substr(1);
        s += t;
        if (k >= 1) s += std::string("*") + var;
        if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
}

}  // namespace bt
