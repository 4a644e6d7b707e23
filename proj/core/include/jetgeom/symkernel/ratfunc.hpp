#pragma once

#include "jetgeom/symkernel/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetgeom::sym {

// Canonical form used for every symbolic computation.
//
// A RatFunc is num/den with num, den polynomials over "atoms": coordinates and
// the function applications sin(u), cos(u), exp(u), log(u), u^(1/q) whose
// arguments are themselves canonical. The representation is kept canonical:
//   - terms sorted in graded order, like terms collected, coefficients exact;
//   - cos(u)^k with k >= 2 rewritten through cos^2 = 1 - sin^2;
//   - exp factors merged, exp(a)*exp(b) = exp(a+b), exp(0) = 1;
//   - num and den coprime (multivariate gcd over Q), den monic, den free of a
//     common exp factor or a root factor shared by all its terms;
//   - root powers u^(e/q) kept with 0 < e < q and gcd(e, q) = 1.
// Structural equality of canonical forms is the symbolic equality test.

class RatFunc;
struct AtomNode;
using Atom = std::shared_ptr<const AtomNode>;

enum class AtomKind : std::uint8_t { Coordinate, Sin, Cos, Exp, Log, Root };

struct Factor {
    Atom atom;
    int exponent = 1;
};

/// Sorted by atom, positive exponents, at most one exp atom (with exponent 1).
using Monomial = std::vector<Factor>;

struct Term {
    Monomial monomial;
    Rational coeff;
};

int compare_atoms(const AtomNode& a, const AtomNode& b);
int compare_monomials(const Monomial& a, const Monomial& b);
int degree(const Monomial& m);

class SymbolicError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Poly {
public:
    Poly() = default;
    explicit Poly(Rational c);
    static Poly from_atom(Atom atom, int exponent = 1);
    /// Builds from arbitrary terms: sorts, merges like terms, drops zeros.
    static Poly from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    std::optional<Rational> constant_value() const;
    std::span<const Term> terms() const { return terms_; }
    const Term& leading() const { return terms_.front(); }

    Poly operator-() const;
    Poly scaled(const Rational& c) const;
    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);

    std::uint64_t dependencies() const;

private:
    std::vector<Term> terms_;
};

int compare(const Poly& a, const Poly& b);

/// Multiplies two monomials, merging exp factors (exp(u)*exp(-u) drops out).
Monomial multiply_monomials(const Monomial& a, const Monomial& b);

/// Applies cos(u)^2 -> 1 - sin(u)^2 until every cos exponent is at most one.
Poly reduce_trig(const Poly& p);

/// Multivariate gcd over Q (free polynomial ring in the atoms), monic.
Poly gcd(const Poly& a, const Poly& b);

/// a / b when b divides a exactly in the free polynomial ring.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

class RatFunc {
public:
    RatFunc() : den_(Rational(1)) {}
    RatFunc(Rational c);  // NOLINT(google-explicit-constructor)
    RatFunc(long c) : RatFunc(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    RatFunc(int c) : RatFunc(Rational(c)) {}   // NOLINT(google-explicit-constructor)

    static RatFunc coordinate(int id, std::string name);
    static RatFunc from_atom(Atom atom);
    /// Canonicalizes num/den. Throws SymbolicError when den is zero.
    static RatFunc from_parts(Poly num, Poly den);

    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    std::optional<Rational> constant_value() const;
    /// Bit mask of coordinate ids the expression depends on.
    std::uint64_t dependencies() const { return deps_; }
    bool depends_on(int coord) const { return (deps_ >> coord) & 1u; }

    RatFunc operator-() const;
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    RatFunc pow(long k) const;
    RatFunc pow(const Rational& r) const;

private:
    RatFunc(Poly num, Poly den, std::uint64_t deps) : num_(std::move(num)), den_(std::move(den)), deps_(deps) {}
    Poly num_;
    Poly den_;
    std::uint64_t deps_ = 0;
};

int compare(const RatFunc& a, const RatFunc& b);

struct AtomNode {
    AtomKind kind;
    int coord = -1;    // Coordinate
    std::string name;  // Coordinate
    RatFunc arg;       // Sin, Cos, Exp, Log, Root
    int root = 0;      // Root: the q of u^(1/q)
    std::uint64_t deps = 0;
};

RatFunc sin(const RatFunc& u);
RatFunc cos(const RatFunc& u);
RatFunc tan(const RatFunc& u);
RatFunc exp(const RatFunc& u);
RatFunc log(const RatFunc& u);
RatFunc sqrt(const RatFunc& u);

/// Partial derivative with respect to coordinate id `coord`; all other coordinates independent.
RatFunc differentiate(const RatFunc& f, int coord);

/// Numeric evaluation. Throws DomainError (see eval.hpp) on poles and invalid arguments.
double evaluate(const RatFunc& f, std::span<const double> point);

}  // namespace jetgeom::sym
