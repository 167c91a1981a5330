#include "bt/expr.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace bt {

ExprPtr make_num(double v) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Num;
    e->value = v;
    return e;
}

ExprPtr make_var(int i) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Var;
    e->var = i;
    return e;
}

ExprPtr make_unary(Expr::Op op, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(a);
    return e;
}

ExprPtr make_binary(Expr::Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_call(Fn fn, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->op = Expr::Op::Call;
    e->fn = fn;
    e->lhs = std::move(a);
    return e;
}

namespace {
const std::map<std::string, Fn>& fn_table() {
    static const std::map<std::string, Fn> t = {
        {"exp", Fn::Exp},   {"log", Fn::Log},   {"cosh", Fn::Cosh}, {"sinh", Fn::Sinh}, {"tanh", Fn::Tanh},
        {"sech", Fn::Sech}, {"sqrt", Fn::Sqrt}, {"psi", Fn::Psi},   {"sin", Fn::Sin},   {"cos", Fn::Cos},
    };
    return t;
}
}  // namespace

const char* fn_name(Fn fn) {
    for (const auto& [k, v] : fn_table())
        if (v == fn) return k.c_str();
    return "?";
}

bool fn_lookup(const std::string& name, Fn& out) {
    auto it = fn_table().find(name);
    if (it == fn_table().end()) return false;
    out = it->second;
    return true;
}

double psi(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
    return x / std::expm1(x);
}

Program::Program(const ExprPtr& e) {
    emit(*e);
    // conservative stack bound
    depth_ = code_.size() + 1;
}

void Program::emit(const Expr& e) {
    if (e.lhs) emit(*e.lhs);
    if (e.rhs) emit(*e.rhs);
    code_.push_back({e.op, e.value, e.var, e.fn});
}

static double ipow(double x, long k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    double r = 1.0;
    while (k) {
        if (k & 1) r *= x;
        x *= x;
        k >>= 1;
    }
    return r;
}

double Program::eval(const double* slots) const {
    double stackbuf[64] = {};
    std::vector<double> heap;
    double* st = stackbuf;
    if (depth_ > 64) {
        heap.resize(depth_);
        st = heap.data();
    }
    size_t sp = 0;
    for (const Ins& in : code_) {
        switch (in.op) {
        case Expr::Op::Num: st[sp++] = in.value; break;
        case Expr::Op::Var: st[sp++] = slots[in.var]; break;
        case Expr::Op::Neg: st[sp - 1] = -st[sp - 1]; break;
        case Expr::Op::Add: --sp; st[sp - 1] += st[sp]; break;
        case Expr::Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
        case Expr::Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
        case Expr::Op::Div:
            --sp;
            if (st[sp] == 0.0) throw std::domain_error("division by zero");
            st[sp - 1] /= st[sp];
            break;
        case Expr::Op::Pow: {
            --sp;
            double p = st[sp], x = st[sp - 1];
            if (p == std::floor(p) && std::abs(p) < 1e6) {
                if (p < 0 && x == 0.0) throw std::domain_error("zero to negative power");
                st[sp - 1] = ipow(x, static_cast<long>(p));
            } else {
                if (x < 0) throw std::domain_error("negative base with fractional power");
                st[sp - 1] = std::pow(x, p);
            }
            break;
        }
        case Expr::Op::Call: {
            double& x = st[sp - 1];
            switch (in.fn) {
            case Fn::Exp: x = std::exp(x); break;
            case Fn::Log:
                if (x <= 0) throw std::domain_error("log of non-positive value");
                x = std::log(x);
                break;
            case Fn::Cosh: x = std::cosh(x); break;
            case Fn::Sinh: x = std::sinh(x); break;
            case Fn::Tanh: x = std::tanh(x); break;
            case Fn::Sech: x = 1.0 / std::cosh(x); break;
            case Fn::Sqrt:
                if (x < 0) throw std::domain_error("sqrt of negative value");
                x = std::sqrt(x);
                break;
            case Fn::Psi: x = psi(x); break;
            case Fn::Sin: x = std::sin(x); break;
            case Fn::Cos: x = std::cos(x); break;
            }
            break;
        }
        }
    }
    return st[0];
}

}  // namespace bt
