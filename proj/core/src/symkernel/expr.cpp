#include "jetgeom/symkernel/expr.hpp"

#include <cctype>
#include <stdexcept>

namespace jetgeom::sym {

struct Expr::Node {
    ExprKind kind = ExprKind::Constant;
    Rational value;  // Constant value or Power exponent
    int coord = -1;
    std::string name;
    Function fn = Function::Sin;
    std::vector<Expr> children;
};

std::string_view function_name(Function f) {
    switch (f) {
        case Function::Sin: return "sin";
        case Function::Cos: return "cos";
        case Function::Tan: return "tan";
        case Function::Exp: return "exp";
        case Function::Log: return "log";
        case Function::Sqrt: return "sqrt";
    }
    return "?";
}

Expr::Expr() : Expr(constant(Rational(0))) {}

Expr Expr::constant(Rational value) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Constant;
    n->value = std::move(value);
    return Expr(std::move(n));
}

Expr Expr::coordinate(int id, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Coordinate;
    n->coord = id;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
    if (terms.empty()) return constant(Rational(0));
    if (terms.size() == 1) return terms.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Sum;
    n->children = std::move(terms);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
    if (factors.empty()) return constant(Rational(1));
    if (factors.size() == 1) return factors.front();
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Product;
    n->children = std::move(factors);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, Rational exponent) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Power;
    n->value = std::move(exponent);
    n->children.push_back(std::move(base));
    return Expr(std::move(n));
}

Expr Expr::apply(Function f, Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Function;
    n->fn = f;
    n->children.push_back(std::move(arg));
    return Expr(std::move(n));
}

Expr Expr::negate(Expr e) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Negation;
    n->children.push_back(std::move(e));
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const Rational& Expr::exponent() const { return node_->value; }
int Expr::coordinate_id() const { return node_->coord; }
const std::string& Expr::name() const { return node_->name; }
Function Expr::function() const { return node_->fn; }
std::span<const Expr> Expr::children() const { return node_->children; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case ExprKind::Constant:
        case ExprKind::Power:
            if (x.value != y.value) return false;
            break;
        case ExprKind::Coordinate:
            return x.coord == y.coord && x.name == y.name;
        case ExprKind::Function:
            if (x.fn != y.fn) return false;
            break;
        default:
            break;
    }
    return x.children == y.children;
}

// ---------------------------------------------------------------- printing

namespace {

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

struct Printed {
    std::string text;
    int prec;
};

Printed print(const Expr& e);

std::string wrap(const Printed& p, int min_prec) { return p.prec < min_prec ? "(" + p.text + ")" : p.text; }

std::string exponent_text(const Rational& q) {
    if (is_integer(q) && q >= 0) return to_string(q);
    return "(" + to_string(q) + ")";
}

Printed print_product(std::span<const Expr> factors) {
    std::vector<Expr> num;
    std::vector<Expr> den;
    for (const auto& f : factors) {
        if (f.kind() == ExprKind::Power && f.exponent() < 0) {
            Rational r = -f.exponent();
            den.push_back(r == 1 ? f.children()[0] : Expr::power(f.children()[0], r));
        } else {
            num.push_back(f);
        }
    }
    std::string text;
    for (std::size_t k = 0; k < num.size(); ++k) {
        Printed p = print(num[k]);
        bool leading_fraction = k == 0 && num[k].kind() == ExprKind::Constant && num[k].value() > 0;
        if (k) text += "*";
        text += leading_fraction ? p.text : wrap(p, kPower);
    }
    if (num.empty()) text = "1";
    if (!den.empty()) {
        text += "/";
        if (den.size() == 1) {
            Printed p = print(den[0]);
            bool plain = p.prec >= kPower && !(den[0].kind() == ExprKind::Constant && !is_integer(den[0].value()));
            text += plain ? p.text : "(" + p.text + ")";
        } else {
            std::string inner;
            for (std::size_t k = 0; k < den.size(); ++k) {
                if (k) inner += "*";
                inner += wrap(print(den[k]), kPower);
            }
            text += "(" + inner + ")";
        }
    }
    return {text, kProduct};
}

Printed print(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant: {
            const Rational& v = e.value();
            if (v < 0) return {to_string(v), kUnary};
            if (!is_integer(v)) return {to_string(v), kProduct};
            return {to_string(v), kAtom};
        }
        case ExprKind::Coordinate:
            return {e.name(), kAtom};
        case ExprKind::Sum: {
            std::string text;
            bool first = true;
            for (const auto& c : e.children()) {
                if (first) {
                    text = wrap(print(c), kProduct);
                    if (c.kind() == ExprKind::Negation) text = print(c).text;
                    first = false;
                    continue;
                }
                if (c.kind() == ExprKind::Negation) {
                    text += " - " + wrap(print(c.children()[0]), kProduct);
                } else if (c.kind() == ExprKind::Constant && c.value() < 0) {
                    text += " - " + print(Expr::constant(-c.value())).text;
                } else {
                    text += " + " + wrap(print(c), kProduct);
                }
            }
            return {text, kSum};
        }
        case ExprKind::Product:
            return print_product(e.children());
        case ExprKind::Power: {
            if (e.exponent() < 0) return print_product(std::span<const Expr>(&e, 1));
            Printed base = print(e.children()[0]);
            return {wrap(base, kAtom) + "^" + exponent_text(e.exponent()), kPower};
        }
        case ExprKind::Function:
            return {std::string(function_name(e.function())) + "(" + print(e.children()[0]).text + ")", kAtom};
        case ExprKind::Negation: {
            Printed inner = print(e.children()[0]);
            // "-a*b" and "-a^2" read back as the same value; sums need parentheses.
            return {"-" + wrap(inner, kProduct), kUnary};
        }
    }
    throw std::logic_error("unknown expression kind");
}

// ---------------------------------------------------------------- LaTeX

Printed latex(const Expr& e);

std::string latex_wrap(const Printed& p, int min_prec) {
    return p.prec < min_prec ? "\\left(" + p.text + "\\right)" : p.text;
}

std::string latex_rational(const Rational& q) {
    if (is_integer(q)) return to_string(q);
    std::string sign = q < 0 ? "-" : "";
    Rational a = abs(q);
    return sign + "\\frac{" + to_string(Rational(a.get_num())) + "}{" + to_string(Rational(a.get_den())) + "}";
}

std::string latex_name(const std::string& name) {
    auto us = name.find('_');
    std::string head = name.substr(0, us);
    std::size_t digits = head.size();
    while (digits > 0 && std::isdigit(static_cast<unsigned char>(head[digits - 1]))) --digits;
    std::string base = head.substr(0, digits);
    std::string sup = head.substr(digits);
    if (base.size() > 1) base = "\\mathrm{" + base + "}";
    std::string out = base;
    if (us != std::string::npos) {
        // velocity v<i>_<a> is x^i_a
        if (base == "v") out = "x";
        out += "^{" + sup + "}_{" + name.substr(us + 1) + "}";
    } else if (!sup.empty()) {
        out += "^{" + sup + "}";
    }
    return out;
}

Printed latex(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return {latex_rational(e.value()), e.value() < 0 ? kUnary : kAtom};
        case ExprKind::Coordinate:
            return {latex_name(e.name()), kPower};
        case ExprKind::Sum: {
            std::string text;
            bool first = true;
            for (const auto& c : e.children()) {
                if (!first && c.kind() == ExprKind::Negation)
                    text += " - " + latex_wrap(latex(c.children()[0]), kProduct);
                else
                    text += (first ? "" : " + ") + latex_wrap(latex(c), first ? kUnary : kProduct);
                first = false;
            }
            return {text, kSum};
        }
        case ExprKind::Product: {
            std::string num;
            std::string den;
            for (const auto& f : e.children()) {
                if (f.kind() == ExprKind::Power && f.exponent() < 0) {
                    Rational r = -f.exponent();
                    Expr d = r == 1 ? f.children()[0] : Expr::power(f.children()[0], r);
                    den += (den.empty() ? "" : " ") + latex_wrap(latex(d), kPower);
                } else {
                    num += (num.empty() ? "" : " ") + latex_wrap(latex(f), kPower);
                }
            }
            if (den.empty()) return {num, kProduct};
            return {"\\frac{" + (num.empty() ? std::string("1") : num) + "}{" + den + "}", kAtom};
        }
        case ExprKind::Power: {
            Printed base = latex(e.children()[0]);
            const Rational& q = e.exponent();
            if (q == Rational(1, 2)) return {"\\sqrt{" + base.text + "}", kAtom};
            std::string b = base.prec <= kPower ? "\\left(" + base.text + "\\right)" : base.text;
            if (e.children()[0].kind() == ExprKind::Function) b = base.text;
            return {b + "^{" + latex_rational(q) + "}", kPower};
        }
        case ExprKind::Function: {
            Printed arg = latex(e.children()[0]);
            if (e.function() == Function::Sqrt) return {"\\sqrt{" + arg.text + "}", kAtom};
            if (e.function() == Function::Exp) return {"e^{" + arg.text + "}", kAtom};
            return {"\\" + std::string(function_name(e.function())) + "\\left(" + arg.text + "\\right)", kAtom};
        }
        case ExprKind::Negation:
            return {"-" + latex_wrap(latex(e.children()[0]), kProduct), kUnary};
    }
    throw std::logic_error("unknown expression kind");
}

}  // namespace

std::string to_string(const Expr& e) { return print(e).text; }

std::string to_latex(const Expr& e) { return latex(e).text; }

}  // namespace jetgeom::sym
