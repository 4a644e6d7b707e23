#pragma once

#include "jetgeom/symkernel/coordinates.hpp"
#include "jetgeom/symkernel/expr.hpp"
#include "jetgeom/symkernel/ratfunc.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jetgeom::sym {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifier : public ParseError {
public:
    UnknownIdentifier(std::string symbol, std::size_t position)
        : ParseError("unknown identifier '" + symbol + "'", position), symbol_(std::move(symbol)) {}
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, std::string subexpression)
        : std::runtime_error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

/// Grammar (EBNF):
///   expr    = term { ("+" | "-") term } ;
///   term    = unary { ("*" | "/") unary } ;
///   unary   = ("-" | "+") unary | power ;
///   power   = primary [ "^" unary ] ;            (exponent must be a rational constant)
///   primary = rational | identifier | function "(" expr ")" | "(" expr ")" ;
///   rational = digits [ "/" digits ] ;
///   function = "sin" | "cos" | "tan" | "exp" | "log" | "sqrt" ;
/// Floating-point literals are rejected.
Expr parse_expression(std::string_view text, const CoordinateSystem& coords);

RatFunc canonical(const Expr& e);
Expr to_expr(const RatFunc& f);
std::string to_string(const RatFunc& f);

/// Canonical form as an expression tree; idempotent.
Expr normalize(const Expr& e);

/// d e / d coordinate, normalized.
Expr differentiate(const Expr& e, int coord);

/// IEEE double evaluation of the tree. Throws DomainError.
double eval_numeric(const Expr& e, const Point& at);

enum class ZeroTier { Symbolic, Numeric, Failed };

std::string_view to_string(ZeroTier tier);

struct ZeroTestOptions {
    int probes = 12;
    std::uint64_t seed = 1;
    double tol = 1e-8;
};

struct ZeroTestResult {
    bool zero = false;
    ZeroTier tier = ZeroTier::Failed;
    double max_abs = 0.0;                 // over probes; 0 for the symbolic tier
    std::optional<Point> witness;         // set when the test fails
};

/// Reproducible probe points, every coordinate uniform in [0.2, 1.2].
class ProbeSampler {
public:
    static constexpr double kLow = 0.2;
    static constexpr double kHigh = 1.2;
    static constexpr int kMaxRetries = 10;

    ProbeSampler(int dimension, std::uint64_t seed);
    Point next();

private:
    int dimension_;
    std::uint64_t state_;
};

/// Evaluates `f` at `count` probe points drawn from `seed`, redrawing a point on
/// DomainError up to ProbeSampler::kMaxRetries times before rethrowing.
template <class F>
void for_each_probe(int dimension, int count, std::uint64_t seed, F&& f) {
    ProbeSampler sampler(dimension, seed);
    for (int k = 0; k < count; ++k) {
        for (int attempt = 0;; ++attempt) {
            Point p = sampler.next();
            try {
                f(p);
                break;
            } catch (const DomainError&) {
                if (attempt + 1 >= ProbeSampler::kMaxRetries) throw;
            }
        }
    }
}

ZeroTestResult is_zero(const RatFunc& f, int dimension, const ZeroTestOptions& opts = {});
ZeroTestResult is_zero(const Expr& e, const CoordinateSystem& coords, const ZeroTestOptions& opts = {});

}  // namespace jetgeom::sym
