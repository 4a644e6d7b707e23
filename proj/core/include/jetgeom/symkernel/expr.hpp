#pragma once

#include "jetgeom/symkernel/rational.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace jetgeom::sym {

enum class ExprKind { Constant, Coordinate, Sum, Product, Power, Function, Negation };

enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt };

std::string_view function_name(Function f);

/// Immutable expression tree. Copies share structure.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(Rational value);
    static Expr coordinate(int id, std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, Rational exponent);
    static Expr apply(Function f, Expr arg);
    static Expr negate(Expr e);

    ExprKind kind() const;
    const Rational& value() const;     // Constant
    const Rational& exponent() const;  // Power
    int coordinate_id() const;         // Coordinate
    const std::string& name() const;   // Coordinate
    Function function() const;         // Function
    std::span<const Expr> children() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Prints in the input grammar; parse(to_string(e)) denotes the same value.
std::string to_string(const Expr& e);

/// LaTeX rendering used by the typeset report.
std::string to_latex(const Expr& e);

}  // namespace jetgeom::sym
