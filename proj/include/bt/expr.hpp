#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bt {

// Raised by the model parser; carries 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& msg, int component)
        : std::runtime_error("component " + std::to_string(component + 1) + ": " + msg), component_(component) {}
    int component() const { return component_; }

private:
    int component_;
};

enum class Fn { Exp, Log, Cosh, Sinh, Tanh, Sech, Sqrt, Psi, Sin, Cos };

// Expression tree. Variables index into a flat slot vector: states first,
// then the two active parameters.
struct Expr {
    enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    Op op = Op::Num;
    double value = 0.0;
    int var = -1;
    Fn fn = Fn::Exp;
    std::shared_ptr<const Expr> lhs, rhs;
};
using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr make_num(double v);
ExprPtr make_var(int i);
ExprPtr make_unary(Expr::Op op, ExprPtr a);
ExprPtr make_binary(Expr::Op op, ExprPtr a, ExprPtr b);
ExprPtr make_call(Fn fn, ExprPtr a);

const char* fn_name(Fn fn);
bool fn_lookup(const std::string& name, Fn& out);

// Psi(x) = x/(e^x - 1), continuous at 0.
double psi(double x);

// Flattened postfix program for fast repeated evaluation.
class Program {
public:
    Program() = default;
    explicit Program(const ExprPtr& e);
    // Throws std::domain_error with a short reason on a bad operation.
    double eval(const double* slots) const;

private:
    struct Ins {
        Expr::Op op;
        double value;
        int var;
        Fn fn;
    };
    void emit(const Expr& e);
    std::vector<Ins> code_;
    size_t depth_ = 0;
};

}  // namespace bt
