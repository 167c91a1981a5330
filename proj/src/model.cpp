#include "bt/model.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace bt {

namespace {

struct Stmt {
    std::string text;
    int line;
    int col;  // column of text[0]
};

// Recursive-descent parser for one right-hand side.
class ExprParser {
public:
    ExprParser(const Stmt& s, size_t start, const OdeModel& m) : s_(s), pos_(start), m_(m) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip();
        if (pos_ < s_.text.size()) fail("unexpected '" + std::string(1, s_.text[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, s_.line, s_.col + static_cast<int>(pos_));
    }
    void skip() {
        while (pos_ < s_.text.size() && std::isspace(static_cast<unsigned char>(s_.text[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.text.size() && s_.text[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (eat('+')) e = make_binary(Expr::Op::Add, e, term());
            else if (eat('-')) e = make_binary(Expr::Op::Sub, e, term());
            else return e;
        }
    }
    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            if (eat('*')) e = make_binary(Expr::Op::Mul, e, unary());
            else if (eat('/')) e = make_binary(Expr::Op::Div, e, unary());
            else return e;
        }
    }
    ExprPtr unary() {
        if (eat('-')) return make_unary(Expr::Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    ExprPtr power() {
        ExprPtr base = primary();
        if (eat('^')) return make_binary(Expr::Op::Pow, base, unary());
        return base;
    }
    ExprPtr primary() {
        skip();
        if (pos_ >= s_.text.size()) fail("unexpected end of expression");
        char c = s_.text[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.text.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            return make_num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.text.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_.text[pos_])) || s_.text[pos_] == '_'))
                ++pos_;
            std::string id = s_.text.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.text.size() && s_.text[pos_] == '(') {
                Fn fn;
                if (!fn_lookup(id, fn)) {
                    pos_ = start;
                    fail("unknown function '" + id + "'");
                }
                ++pos_;
                ExprPtr arg = expr();
                if (!eat(')')) fail("expected ')'");
                return make_call(fn, arg);
            }
            return ident(id, start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    ExprPtr ident(const std::string& id, size_t start) {
        int n = m_.dim;
        if (id.size() > 1 && id[0] == 'x' && std::all_of(id.begin() + 1, id.end(), ::isdigit)) {
            int i = std::stoi(id.substr(1));
            if (i >= 1 && i <= n) return make_var(i - 1);
        }
        if (id == m_.active_params[0]) return make_var(n);
        if (id == m_.active_params[1]) return make_var(n + 1);
        auto it = m_.fixed_params.find(id);
        if (it != m_.fixed_params.end()) return make_num(it->second);
        if (id == "pi") return make_num(M_PI);
        pos_ = start;
        fail("unknown identifier '" + id + "'");
    }

    const Stmt& s_;
    size_t pos_;
    const OdeModel& m_;
};

std::vector<std::string> words(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> w;
    std::string t;
    while (is >> t) w.push_back(t);
    return w;
}

}  // namespace

OdeModel parse_model(const std::string& text, const std::string& name) {
    std::vector<Stmt> stmts;
    {
        std::istringstream is(text);
        std::string line;
        int ln = 0;
        while (std::getline(is, line)) {
            ++ln;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            size_t start = 0;
            for (;;) {
                auto semi = line.find(';', start);
                std::string piece = line.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
                size_t lead = piece.find_first_not_of(" \t\r");
                if (lead != std::string::npos) {
                    size_t trail = piece.find_last_not_of(" \t\r");
                    stmts.push_back({piece.substr(lead, trail - lead + 1), ln, static_cast<int>(start + lead) + 1});
                }
                if (semi == std::string::npos) break;
                start = semi + 1;
            }
        }
    }

    OdeModel m;
    m.name = name;
    bool have_dim = false, have_par = false;
    std::vector<const Stmt*> eqs;
    for (const Stmt& s : stmts) {
        auto w = words(s.text);
        if (w[0] == "dim") {
            if (w.size() != 2) throw ParseError("expected 'dim <n>'", s.line, s.col);
            if (have_dim) throw ParseError("duplicate 'dim'", s.line, s.col);
            char* end = nullptr;
            long n = std::strtol(w[1].c_str(), &end, 10);
            if (*end != '\0' || n < 2) throw ParseError("dimension must be an integer >= 2", s.line, s.col);
            m.dim = static_cast<int>(n);
            have_dim = true;
        } else if (w[0] == "par") {
            if (w.size() != 3) throw ParseError("exactly two active parameters required", s.line, s.col);
            if (have_par) throw ParseError("duplicate 'par'", s.line, s.col);
            if (w[1] == w[2]) throw ParseError("active parameters must differ", s.line, s.col);
            m.active_params = {w[1], w[2]};
            have_par = true;
        } else if (w[0] == "fix") {
            if (w.size() != 3) throw ParseError("expected 'fix <name> <value>'", s.line, s.col);
            char* end = nullptr;
            double v = std::strtod(w[2].c_str(), &end);
            if (*end != '\0') throw ParseError("bad value for '" + w[1] + "'", s.line, s.col);
            if (m.fixed_params.count(w[1])) throw ParseError("duplicate parameter '" + w[1] + "'", s.line, s.col);
            m.fixed_params[w[1]] = v;
        } else {
            eqs.push_back(&s);
        }
    }
    if (!have_dim) throw ParseError("missing 'dim' declaration", 1, 1);
    if (!have_par) throw ParseError("missing 'par' declaration (two active parameters)", 1, 1);
    for (const auto& p : m.active_params)
        if (m.fixed_params.count(p)) throw ParseError("parameter '" + p + "' is both active and fixed", 1, 1);

    m.rhs.assign(m.dim, nullptr);
    for (const Stmt* s : eqs) {
        const std::string& t = s->text;
        auto eq = t.find('=');
        auto tick = t.find('\'');
        if (eq == std::string::npos || tick == std::string::npos || tick > eq || t[0] != 'x')
            throw ParseError("expected \"x<i>' = <expr>\"", s->line, s->col);
        std::string lhs = t.substr(1, tick - 1);
        if (lhs.empty() || !std::all_of(lhs.begin(), lhs.end(), ::isdigit) ||
            t.substr(tick + 1, eq - tick - 1).find_first_not_of(" \t") != std::string::npos)
            throw ParseError("bad state name on left-hand side", s->line, s->col);
        int i = std::stoi(lhs);
        if (i < 1 || i > m.dim) throw ParseError("state x" + lhs + " outside 1..dim", s->line, s->col);
        if (m.rhs[i - 1]) throw ParseError("duplicate equation for state x" + lhs, s->line, s->col);
        m.rhs[i - 1] = ExprParser(*s, eq + 1, m).parse();
    }
    for (int i = 0; i < m.dim; ++i)
        if (!m.rhs[i]) throw ParseError("missing equation for state x" + std::to_string(i + 1), 1, 1);
    for (const auto& e : m.rhs) m.programs.emplace_back(e);
    return m;
}

OdeModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), path);
}

Vec eval_rhs(const OdeModel& model, const Vec& x, const Vec2& alpha) {
    const int n = model.dim;
    double slots[64];
    std::vector<double> big;
    double* s = slots;
    if (n + 2 > 64) {
        big.resize(n + 2);
        s = big.data();
    }
    for (int i = 0; i < n; ++i) s[i] = x[i];
    s[n] = alpha[0];
    s[n + 1] = alpha[1];
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double v;
        try {
            v = model.programs[i].eval(s);
        } catch (const std::domain_error& e) {
            throw DomainError(e.what(), i);
        }
        if (!std::isfinite(v)) throw DomainError("non-finite value", i);
        out[i] = v;
    }
    return out;
}

static double default_jac_step(const Vec& x) {
    return std::pow(std::numeric_limits<double>::epsilon(), 0.2) * (1.0 + x.norm());
}

Mat jacobian_x(const OdeModel& model, const Vec& x, const Vec2& alpha, double h) {
    const int n = model.dim;
    if (h <= 0) h = default_jac_step(x);
    Mat J(n, n);
    Vec xp = x;
    for (int j = 0; j < n; ++j) {
        auto at = [&](double t) {
            xp[j] = x[j] + t;
            return eval_rhs(model, xp, alpha);
        };
        J.col(j) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
        xp[j] = x[j];
    }
    return J;
}

Mat jacobian_alpha(const OdeModel& model, const Vec& x, const Vec2& alpha, double h) {
    if (h <= 0) h = default_jac_step(x);
    Mat J(model.dim, 2);
    for (int j = 0; j < 2; ++j) {
        auto at = [&](double t) {
            Vec2 a = alpha;
            a[j] += t;
            return eval_rhs(model, x, a);
        };
        J.col(j) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    }
    return J;
}

static std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

OdeModel builtin_bt_nf(const BtNfParams& p) {
    std::ostringstream s;
    s << "dim 2\npar beta1 beta2\n";
    s << "fix a " << num17(p.a) << "\nfix b " << num17(p.b) << "\nfix c1 " << num17(p.c1) << "\n";
    s << "fix d " << num17(p.d) << "\nfix e " << num17(p.e) << "\n";
    s << "fix a1 " << num17(p.a1) << "\nfix b1 " << num17(p.b1) << "\n";
    s << "x1' = x2\n";
    s << "x2' = beta1 + beta2*x2 + (a + a1*beta2)*x1^2 + (b + b1*beta2)*x1*x2 + e*x1^2*x2 + d*x1^3 + c1*beta2^3\n";
    return parse_model(s.str(), "bt_nf");
}

static const char* kHH = R"(# Hodgkin-Huxley, states (V, m, n, h), active parameters VK and I
dim 4
par VK I
x1' = -(120*x2^3*x4*(x1 + 115) + 36*x3^4*(x1 - VK) + 0.3*(x1 - 10.599)) + I
x2' = psi((x1 + 25)/10)*(1 - x2) - 4*exp(x1/18)*x2
x3' = 0.1*psi((x1 + 10)/10)*(1 - x3) - 0.125*exp(x1/80)*x3
x4' = 0.07*exp(x1/20)*(1 - x4) - x4/(1 + exp((x1 + 30)/10))
)";

OdeModel builtin_hh() { return parse_model(kHH, "hh"); }

BtPoint hh_bt_point() {
    BtPoint p;
    p.x0.resize(4);
    p.x0 << -4.0470807255556501855, 0.084264403281569590605, 0.38109026726590399618, 0.45156455664214773082;
    p.alpha0 << -5.3857980477763973537, 0.21992878653766679609;
    return p;
}

BtPoint hh_printed_point() {
    OdeModel m = builtin_hh();
    BtPoint p;
    const double V = -2.835463618170097;
    p.alpha0 << -4.977020454108788, -0.06185214966177632;
    // gating variables at their steady state for this V
    double am = psi((V + 25) / 10), bm = 4 * std::exp(V / 18);
    double an = 0.1 * psi((V + 10) / 10), bn = 0.125 * std::exp(V / 80);
    double ah = 0.07 * std::exp(V / 20), bh = 1 / (1 + std::exp((V + 30) / 10));
    p.x0.resize(4);
    p.x0 << V, am / (am + bm), an / (an + bn), ah / (ah + bh);
    return p;
}

OdeModel resolve_model(const std::string& spec, const BtNfParams& p) {
    if (spec == "bt_nf") return builtin_bt_nf(p);
    if (spec == "hh") return builtin_hh();
    return load_model_file(spec);
}

Vec polish_equilibrium(const OdeModel& model, const Vec& x0, const Vec2& alpha, double tol, int maxit) {
    Vec x = x0;
    for (int it = 0; it < maxit; ++it) {
        Vec fx = eval_rhs(model, x, alpha);
        if (fx.norm() <= tol * (1 + x.norm())) break;
        Mat J = jacobian_x(model, x, alpha);
        Vec dx = J.colPivHouseholderQr().solve(-fx);
        x += dx;
        if (dx.norm() <= 1e-16 * (1 + x.norm())) break;
    }
    return x;
}

}  // namespace bt
