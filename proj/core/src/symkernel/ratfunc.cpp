#include "jetgeom/symkernel/ratfunc.hpp"

#include <algorithm>
#include <numeric>

namespace jetgeom::sym {
namespace {

int sign_of(int c) { return (c > 0) - (c < 0); }

int compare_rationals(const Rational& a, const Rational& b) { return sign_of(::cmp(a, b)); }

Atom make_atom(AtomKind kind, RatFunc arg, int root = 0) {
    auto node = std::make_shared<AtomNode>();
    node->kind = kind;
    node->deps = arg.dependencies();
    node->arg = std::move(arg);
    node->root = root;
    return node;
}

bool monomials_equal(const Monomial& a, const Monomial& b) { return compare_monomials(a, b) == 0; }

bool term_less(const Term& a, const Term& b) { return compare_monomials(a.monomial, b.monomial) < 0; }

const Factor* find_exp(const Monomial& m) {
    for (const auto& f : m)
        if (f.atom->kind == AtomKind::Exp) return &f;
    return nullptr;
}

void insert_sorted(Monomial& m, Factor f) {
    auto pos = std::lower_bound(m.begin(), m.end(), f,
                                [](const Factor& x, const Factor& y) { return compare_atoms(*x.atom, *y.atom) < 0; });
    m.insert(pos, std::move(f));
}

/// m / d where d's factors appear in m with at least the same exponents.
Monomial divide_monomial(const Monomial& m, const Monomial& d) {
    Monomial out;
    std::size_t j = 0;
    for (const auto& f : m) {
        int e = f.exponent;
        if (j < d.size() && compare_atoms(*f.atom, *d[j].atom) == 0) e -= d[j++].exponent;
        if (e > 0) out.push_back({f.atom, e});
    }
    return out;
}

int exponent_of(const Monomial& m, const AtomNode& atom) {
    for (const auto& f : m)
        if (compare_atoms(*f.atom, atom) == 0) return f.exponent;
    return 0;
}

bool has_root_excess(const Poly& p) {
    for (const auto& t : p.terms())
        for (const auto& f : t.monomial)
            if (f.atom->kind == AtomKind::Root &&
                (f.exponent >= f.atom->root || std::gcd(f.exponent, f.atom->root) > 1))
                return true;
    return false;
}

RatFunc root_power(const RatFunc& base, int q, int e);

/// A root factor u^(e/q) dividing every term of p, as (atom, e).
std::optional<Factor> common_root(const Poly& p) {
    for (const auto& f : p.leading().monomial) {
        if (f.atom->kind != AtomKind::Root) continue;
        int e = f.exponent;
        for (const auto& t : p.terms()) e = std::min(e, exponent_of(t.monomial, *f.atom));
        if (e > 0) return Factor{f.atom, e};
    }
    return std::nullopt;
}

/// Rewrites u^(e/q) factors with e >= q or gcd(e, q) > 1 into reduced form.
RatFunc expand_roots(const Poly& p) {
    RatFunc sum;
    for (const auto& t : p.terms()) {
        RatFunc term(t.coeff);
        for (const auto& f : t.monomial) {
            if (f.atom->kind == AtomKind::Root)
                term = term * root_power(f.atom->arg, f.atom->root, f.exponent);
            else
                term = term * RatFunc::from_parts(Poly::from_atom(f.atom, f.exponent), Poly(Rational(1)));
        }
        sum = sum + term;
    }
    return sum;
}

/// base^(e/q) with e > 0.
RatFunc root_power(const RatFunc& base, int q, int e) {
    RatFunc whole = base.pow(static_cast<long>(e / q));
    int r = e % q;
    if (r == 0) return whole;
    int g = std::gcd(r, q);
    Poly frac = Poly::from_atom(make_atom(AtomKind::Root, base, q / g), r / g);
    return whole * RatFunc::from_parts(std::move(frac), Poly(Rational(1)));
}

std::optional<Rational> exact_root(const Rational& c, int q) {
    if (c < 0 && q % 2 == 0) return std::nullopt;
    mpz_class num = abs(c.get_num());
    mpz_class den = c.get_den();
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(q))) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(q))) return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    return c < 0 ? Rational(-r) : r;
}

RatFunc diff_atom(const AtomNode& a, int coord);

RatFunc diff_poly(const Poly& p, int coord) {
    std::vector<Term> poly_part;
    RatFunc rest;
    for (const auto& t : p.terms()) {
        for (std::size_t k = 0; k < t.monomial.size(); ++k) {
            const auto& f = t.monomial[k];
            if (!((f.atom->deps >> coord) & 1u)) continue;
            Monomial reduced = t.monomial;
            if (--reduced[k].exponent == 0) reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(k));
            Rational c = t.coeff * f.exponent;
            RatFunc inner = diff_atom(*f.atom, coord);
            if (inner.denominator().is_constant()) {
                // Polynomial derivative: stay in Poly arithmetic.
                Poly prod = Poly::from_terms({Term{std::move(reduced), c}}) * inner.numerator();
                for (const auto& pt : prod.terms()) poly_part.push_back(pt);
            } else {
                rest = rest + RatFunc::from_parts(Poly::from_terms({Term{std::move(reduced), c}}), Poly(Rational(1))) * inner;
            }
        }
    }
    return RatFunc::from_parts(Poly::from_terms(std::move(poly_part)), Poly(Rational(1))) + rest;
}

RatFunc diff_atom(const AtomNode& a, int coord) {
    switch (a.kind) {
        case AtomKind::Coordinate:
            return RatFunc(a.coord == coord ? 1 : 0);
        case AtomKind::Sin:
            return cos(a.arg) * differentiate(a.arg, coord);
        case AtomKind::Cos:
            return -(sin(a.arg) * differentiate(a.arg, coord));
        case AtomKind::Exp:
            return exp(a.arg) * differentiate(a.arg, coord);
        case AtomKind::Log:
            return differentiate(a.arg, coord) / a.arg;
        case AtomKind::Root: {
            RatFunc self = RatFunc::from_parts(Poly::from_atom(make_atom(AtomKind::Root, a.arg, a.root)), Poly(Rational(1)));
            return self * differentiate(a.arg, coord) / (RatFunc(a.root) * a.arg);
        }
    }
    return RatFunc();
}

}  // namespace

// ---------------------------------------------------------------- ordering

int compare_atoms(const AtomNode& a, const AtomNode& b) {
    if (&a == &b) return 0;
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
        case AtomKind::Coordinate:
            return (a.coord > b.coord) - (a.coord < b.coord);
        case AtomKind::Root:
            if (a.root != b.root) return a.root < b.root ? -1 : 1;
            [[fallthrough]];
        default:
            return compare(a.arg, b.arg);
    }
}

int degree(const Monomial& m) {
    int d = 0;
    for (const auto& f : m) d += f.exponent;
    return d;
}

// Graded lexicographic order; a negative result means `a` sorts first (is "larger").
int compare_monomials(const Monomial& a, const Monomial& b) {
    int da = degree(a), db = degree(b);
    if (da != db) return da > db ? -1 : 1;
    std::size_t k = 0;
    for (; k < a.size() && k < b.size(); ++k) {
        int c = compare_atoms(*a[k].atom, *b[k].atom);
        if (c != 0) return c;
        if (a[k].exponent != b[k].exponent) return a[k].exponent > b[k].exponent ? -1 : 1;
    }
    return (a.size() < b.size()) - (a.size() > b.size());
}

int compare(const Poly& a, const Poly& b) {
    auto ta = a.terms();
    auto tb = b.terms();
    for (std::size_t k = 0; k < ta.size() && k < tb.size(); ++k) {
        if (int c = compare_monomials(ta[k].monomial, tb[k].monomial)) return c;
        if (int c = compare_rationals(ta[k].coeff, tb[k].coeff)) return c;
    }
    return (ta.size() > tb.size()) - (ta.size() < tb.size());
}

int compare(const RatFunc& a, const RatFunc& b) {
    if (int c = compare(a.numerator(), b.numerator())) return c;
    return compare(a.denominator(), b.denominator());
}

// ---------------------------------------------------------------- Poly

Poly::Poly(Rational c) {
    if (c != 0) terms_.push_back(Term{{}, std::move(c)});
}

Poly Poly::from_atom(Atom atom, int exponent) {
    Poly p;
    if (atom->kind == AtomKind::Exp && exponent != 1) {
        Monomial m;
        for (int k = 0; k < exponent; ++k) m = multiply_monomials(m, Monomial{{atom, 1}});
        p.terms_.push_back(Term{std::move(m), Rational(1)});
        return p;
    }
    p.terms_.push_back(Term{Monomial{{std::move(atom), exponent}}, Rational(1)});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_less);
    Poly p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && monomials_equal(p.terms_.back().monomial, t.monomial)) {
            p.terms_.back().coeff += t.coeff;
            if (p.terms_.back().coeff == 0) p.terms_.pop_back();
        } else if (t.coeff != 0) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.empty()); }

std::optional<Rational> Poly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_[0].monomial.empty()) return terms_[0].coeff;
    return std::nullopt;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return Poly();
    Poly p = *this;
    for (auto& t : p.terms_) t.coeff *= c;
    return p;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly out;
    auto ta = a.terms();
    auto tb = b.terms();
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
        int c = i == ta.size() ? 1 : j == tb.size() ? -1 : compare_monomials(ta[i].monomial, tb[j].monomial);
        if (c < 0) {
            out.terms_.push_back(ta[i++]);
        } else if (c > 0) {
            out.terms_.push_back(tb[j++]);
        } else {
            Rational s = ta[i].coeff + tb[j].coeff;
            if (s != 0) out.terms_.push_back(Term{ta[i].monomial, s});
            ++i;
            ++j;
        }
    }
    return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Term> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) terms.push_back(Term{multiply_monomials(x.monomial, y.monomial), x.coeff * y.coeff});
    return Poly::from_terms(std::move(terms));
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
        if (a.terms_[k].coeff != b.terms_[k].coeff || !monomials_equal(a.terms_[k].monomial, b.terms_[k].monomial))
            return false;
    return true;
}

std::uint64_t Poly::dependencies() const {
    std::uint64_t d = 0;
    for (const auto& t : terms_)
        for (const auto& f : t.monomial) d |= f.atom->deps;
    return d;
}

Monomial multiply_monomials(const Monomial& a, const Monomial& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const Factor* ea = find_exp(a);
    const Factor* eb = find_exp(b);
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i < a.size() && &a[i] == ea) { ++i; continue; }
        if (j < b.size() && &b[j] == eb) { ++j; continue; }
        int c = i == a.size() ? 1 : j == b.size() ? -1 : compare_atoms(*a[i].atom, *b[j].atom);
        if (c < 0) out.push_back(a[i++]);
        else if (c > 0) out.push_back(b[j++]);
        else {
            out.push_back({a[i].atom, a[i].exponent + b[j].exponent});
            ++i;
            ++j;
        }
    }
    if (ea || eb) {
        Atom merged;
        if (ea && eb) {
            RatFunc arg = ea->atom->arg + eb->atom->arg;
            if (!arg.is_zero()) merged = make_atom(AtomKind::Exp, std::move(arg));
        } else {
            merged = ea ? ea->atom : eb->atom;
        }
        if (merged) insert_sorted(out, Factor{std::move(merged), 1});
    }
    return out;
}

Poly reduce_trig(const Poly& p) {
    auto needs = [](const Term& t) {
        return std::any_of(t.monomial.begin(), t.monomial.end(),
                           [](const Factor& f) { return f.atom->kind == AtomKind::Cos && f.exponent >= 2; });
    };
    if (std::none_of(p.terms().begin(), p.terms().end(), needs)) return p;

    std::vector<Term> work(p.terms().begin(), p.terms().end());
    std::vector<Term> out;
    while (!work.empty()) {
        Term t = std::move(work.back());
        work.pop_back();
        auto it = std::find_if(t.monomial.begin(), t.monomial.end(),
                               [](const Factor& f) { return f.atom->kind == AtomKind::Cos && f.exponent >= 2; });
        if (it == t.monomial.end()) {
            out.push_back(std::move(t));
            continue;
        }
        Atom sin_atom = make_atom(AtomKind::Sin, it->atom->arg);
        it->exponent -= 2;
        if (it->exponent == 0) t.monomial.erase(it);
        Term with_sin{multiply_monomials(t.monomial, Monomial{{sin_atom, 2}}), -t.coeff};
        work.push_back(std::move(t));
        work.push_back(std::move(with_sin));
    }
    return Poly::from_terms(std::move(out));
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(Rational c) : num_(std::move(c)), den_(Rational(1)) {}

RatFunc RatFunc::coordinate(int id, std::string name) {
    auto node = std::make_shared<AtomNode>();
    node->kind = AtomKind::Coordinate;
    node->coord = id;
    node->name = std::move(name);
    node->deps = std::uint64_t{1} << id;
    return from_atom(std::move(node));
}

RatFunc RatFunc::from_atom(Atom atom) {
    std::uint64_t deps = atom->deps;
    return RatFunc(Poly::from_atom(std::move(atom)), Poly(Rational(1)), deps);
}

RatFunc RatFunc::from_parts(Poly num, Poly den) {
    if (den.is_zero()) throw SymbolicError("division by zero");
    if (has_root_excess(num) || has_root_excess(den)) return expand_roots(num) / expand_roots(den);
    if (auto r = common_root(den)) {
        // Clear the root from the denominator: multiply through by u^((q-e)/q).
        Poly lift = Poly::from_atom(r->atom, r->atom->root - r->exponent);
        return from_parts(num * lift, den * lift);
    }
    num = reduce_trig(num);
    den = reduce_trig(den);
    if (den.is_zero()) throw SymbolicError("division by zero");
    if (num.is_zero()) return RatFunc();

    if (auto c = den.constant_value()) {
        if (*c != 1) num = num.scaled(1 / *c);
        std::uint64_t deps = num.dependencies();
        return RatFunc(std::move(num), Poly(Rational(1)), deps);
    }

    if (den.is_monomial()) {
        // Cancel shared atom powers; move exp factors (units) into the numerator.
        const Monomial& dm = den.leading().monomial;
        Monomial common;
        Monomial exp_part;
        for (const auto& f : dm) {
            if (f.atom->kind == AtomKind::Exp) {
                exp_part.push_back(f);
                continue;
            }
            int k = f.exponent;
            for (const auto& t : num.terms()) k = std::min(k, exponent_of(t.monomial, *f.atom));
            if (k > 0) common.push_back({f.atom, k});
        }
        if (!common.empty() || !exp_part.empty()) {
            Monomial new_den = divide_monomial(divide_monomial(dm, common), exp_part);
            std::vector<Term> terms;
            for (const auto& t : num.terms()) terms.push_back(Term{divide_monomial(t.monomial, common), t.coeff});
            num = Poly::from_terms(std::move(terms));
            if (!exp_part.empty()) {
                Atom inv = make_atom(AtomKind::Exp, -exp_part.front().atom->arg);
                num = num * Poly::from_atom(inv);
            }
            den = Poly::from_terms({Term{std::move(new_den), den.leading().coeff}});
        }
    } else {
        Poly g = gcd(num, den);
        if (!g.is_constant()) {
            num = *divide_exact(num, g);
            den = *divide_exact(den, g);
        }
        // A common exp factor of every denominator term is a unit.
        const Factor* e0 = find_exp(den.leading().monomial);
        if (e0) {
            bool shared = std::all_of(den.terms().begin(), den.terms().end(), [&](const Term& t) {
                const Factor* e = find_exp(t.monomial);
                return e && compare_atoms(*e->atom, *e0->atom) == 0;
            });
            if (shared) {
                Poly inv = Poly::from_atom(make_atom(AtomKind::Exp, -e0->atom->arg));
                num = num * inv;
                den = den * inv;
            }
        }
    }

    Rational lc = den.leading().coeff;
    if (lc != 1) {
        num = num.scaled(1 / lc);
        den = den.scaled(1 / lc);
    }
    if (den.is_constant()) {
        std::uint64_t deps = num.dependencies();
        return RatFunc(std::move(num), Poly(Rational(1)), deps);
    }
    std::uint64_t deps = num.dependencies() | den.dependencies();
    return RatFunc(std::move(num), std::move(den), deps);
}

std::optional<Rational> RatFunc::constant_value() const {
    if (!den_.is_constant()) return std::nullopt;
    return num_.constant_value();
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, deps_); }

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc::from_parts(a.num_ + b.num_, a.den_);
    if (a.den_.is_constant()) return RatFunc::from_parts(a.num_ * b.den_ + b.num_, b.den_);
    if (b.den_.is_constant()) return RatFunc::from_parts(a.num_ + b.num_ * a.den_, a.den_);
    Poly g = gcd(a.den_, b.den_);
    Poly da = *divide_exact(a.den_, g);
    Poly db = *divide_exact(b.den_, g);
    return RatFunc::from_parts(a.num_ * db + b.num_ * da, a.den_ * db);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    if (auto c = a.constant_value(); c && *c == 1) return b;
    if (auto c = b.constant_value(); c && *c == 1) return a;
    if (a.den_.is_constant() && b.den_.is_constant()) {
        Poly num = reduce_trig(a.num_ * b.num_);
        if (has_root_excess(num)) return RatFunc::from_parts(std::move(num), Poly(Rational(1)));
        std::uint64_t deps = num.dependencies();
        return RatFunc(std::move(num), Poly(Rational(1)), deps);
    }
    return RatFunc::from_parts(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw SymbolicError("division by zero");
    return a * RatFunc::from_parts(b.den_, b.num_);
}

RatFunc RatFunc::pow(long k) const {
    if (k < 0) return RatFunc(1) / pow(-k);
    RatFunc result(1);
    RatFunc base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

RatFunc RatFunc::pow(const Rational& r) const {
    if (is_integer(r)) return pow(r.get_num().get_si());
    long p = r.get_num().get_si();
    int q = static_cast<int>(r.get_den().get_si());
    if (is_zero()) {
        if (p < 0) throw SymbolicError("zero raised to a negative power");
        return RatFunc();
    }
    if (auto c = constant_value()) {
        if (auto root = exact_root(*c, q)) return RatFunc(*root).pow(p);
    }
    RatFunc base = RatFunc::from_parts(Poly::from_atom(make_atom(AtomKind::Root, *this, q)), Poly(Rational(1)));
    return base.pow(p);
}

// ---------------------------------------------------------------- functions

RatFunc sin(const RatFunc& u) {
    if (u.is_zero()) return RatFunc();
    if (u.numerator().leading().coeff < 0) return -sin(-u);
    return RatFunc::from_atom(make_atom(AtomKind::Sin, u));
}

RatFunc cos(const RatFunc& u) {
    if (u.is_zero()) return RatFunc(1);
    if (u.numerator().leading().coeff < 0) return cos(-u);
    return RatFunc::from_atom(make_atom(AtomKind::Cos, u));
}

RatFunc tan(const RatFunc& u) { return sin(u) / cos(u); }

namespace {
/// The single atom of `u` when u is exactly that atom (coefficient 1, exponent 1).
const AtomNode* lone_atom(const RatFunc& u) {
    if (!u.denominator().is_constant() || !u.numerator().is_monomial()) return nullptr;
    const Term& t = u.numerator().leading();
    if (t.coeff != 1 || t.monomial.size() != 1 || t.monomial[0].exponent != 1) return nullptr;
    return t.monomial[0].atom.get();
}
}  // namespace

RatFunc exp(const RatFunc& u) {
    if (u.is_zero()) return RatFunc(1);
    if (const AtomNode* a = lone_atom(u); a && a->kind == AtomKind::Log) return a->arg;
    return RatFunc::from_atom(make_atom(AtomKind::Exp, u));
}

RatFunc log(const RatFunc& u) {
    if (auto c = u.constant_value(); c && *c == 1) return RatFunc();
    if (const AtomNode* a = lone_atom(u); a && a->kind == AtomKind::Exp) return a->arg;
    return RatFunc::from_atom(make_atom(AtomKind::Log, u));
}

RatFunc sqrt(const RatFunc& u) { return u.pow(Rational(1, 2)); }

RatFunc differentiate(const RatFunc& f, int coord) {
    if (!f.depends_on(coord)) return RatFunc();
    RatFunc dn = diff_poly(f.numerator(), coord);
    if (f.denominator().is_constant()) return dn;
    RatFunc num = RatFunc::from_parts(f.numerator(), Poly(Rational(1)));
    RatFunc den = RatFunc::from_parts(f.denominator(), Poly(Rational(1)));
    RatFunc dd = diff_poly(f.denominator(), coord);
    if (dd.is_zero()) return dn / den;
    return (dn * den - num * dd) / (den * den);
}

}  // namespace jetgeom::sym
