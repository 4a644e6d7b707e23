// Multivariate polynomial gcd and exact division over Q.
//
// Polynomials are mapped onto a dense exponent-vector representation whose
// variables are the distinct atoms of the operands (every exp(u) is its own
// variable here). The gcd is the classical recursive primitive-PRS algorithm.

#include "jetgeom/symkernel/ratfunc.hpp"

#include <algorithm>
#include <map>

namespace jetgeom::sym {
namespace {

using Exps = std::vector<int>;

struct Sparse {
    std::map<Exps, Rational> terms;  // lex order; leading term is terms.rbegin()
    std::size_t nvars = 0;

    bool zero() const { return terms.empty(); }
    bool constant() const {
        return terms.empty() ||
               (terms.size() == 1 && std::all_of(terms.begin()->first.begin(), terms.begin()->first.end(),
                                                 [](int e) { return e == 0; }));
    }
};

Sparse one(std::size_t nvars) {
    Sparse s;
    s.nvars = nvars;
    s.terms.emplace(Exps(nvars, 0), Rational(1));
    return s;
}

void add_term(Sparse& s, const Exps& e, const Rational& c) {
    auto [it, inserted] = s.terms.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) s.terms.erase(it);
    }
}

Sparse sub(const Sparse& a, const Sparse& b) {
    Sparse r = a;
    for (const auto& [e, c] : b.terms) add_term(r, e, -c);
    return r;
}

Sparse mul(const Sparse& a, const Sparse& b) {
    Sparse r;
    r.nvars = a.nvars;
    Exps e(a.nvars);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
            add_term(r, e, ca * cb);
        }
    return r;
}

Sparse scale(const Sparse& a, const Rational& c) {
    Sparse r = a;
    for (auto& [e, v] : r.terms) v *= c;
    return r;
}

Sparse monic(const Sparse& a) {
    if (a.zero()) return a;
    return scale(a, 1 / a.terms.rbegin()->second);
}

int degree_in(const Sparse& a, std::size_t v) {
    int d = 0;
    for (const auto& [e, c] : a.terms) d = std::max(d, e[v]);
    return d;
}

/// Coefficient of v^d, as a polynomial free of v.
Sparse coeff_in(const Sparse& a, std::size_t v, int d) {
    Sparse r;
    r.nvars = a.nvars;
    for (const auto& [e, c] : a.terms)
        if (e[v] == d) {
            Exps f = e;
            f[v] = 0;
            r.terms.emplace(std::move(f), c);
        }
    return r;
}

Sparse shift(const Sparse& a, std::size_t v, int k) {
    Sparse r;
    r.nvars = a.nvars;
    for (const auto& [e, c] : a.terms) {
        Exps f = e;
        f[v] += k;
        r.terms.emplace(std::move(f), c);
    }
    return r;
}

std::optional<Sparse> exact_div(const Sparse& a, const Sparse& b) {
    Sparse q;
    q.nvars = a.nvars;
    Sparse r = a;
    const auto& [lb_e, lb_c] = *b.terms.rbegin();
    while (!r.zero()) {
        const auto& [lr_e, lr_c] = *r.terms.rbegin();
        Exps m(a.nvars);
        for (std::size_t k = 0; k < m.size(); ++k) {
            m[k] = lr_e[k] - lb_e[k];
            if (m[k] < 0) return std::nullopt;
        }
        Rational c = lr_c / lb_c;
        Sparse t;
        t.nvars = a.nvars;
        t.terms.emplace(m, c);
        add_term(q, m, c);
        r = sub(r, mul(t, b));
    }
    return q;
}

Sparse monomial_gcd(const Sparse& mono, const Sparse& other) {
    Exps e = mono.terms.begin()->first;
    for (const auto& [f, c] : other.terms)
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::min(e[k], f[k]);
    Sparse r;
    r.nvars = mono.nvars;
    r.terms.emplace(std::move(e), Rational(1));
    return r;
}

std::optional<std::size_t> main_variable(const Sparse& a, const Sparse& b) {
    for (std::size_t v = a.nvars; v-- > 0;) {
        if (degree_in(a, v) > 0 || degree_in(b, v) > 0) return v;
    }
    return std::nullopt;
}

Sparse gcd_sparse(const Sparse& a, const Sparse& b);

Sparse content_in(const Sparse& a, std::size_t v) {
    Sparse g;
    g.nvars = a.nvars;
    int d = degree_in(a, v);
    for (int k = d; k >= 0; --k) {
        Sparse c = coeff_in(a, v, k);
        if (c.zero()) continue;
        g = gcd_sparse(g, c);
        if (g.constant()) return one(a.nvars);
    }
    return g;
}

Sparse primitive_part(const Sparse& a, std::size_t v) {
    Sparse c = content_in(a, v);
    if (c.constant()) return a;
    return *exact_div(a, c);
}

Sparse pseudo_remainder(const Sparse& a, const Sparse& b, std::size_t v) {
    Sparse r = a;
    int db = degree_in(b, v);
    Sparse lb = coeff_in(b, v, db);
    while (!r.zero()) {
        int dr = degree_in(r, v);
        if (dr < db) break;
        Sparse lr = coeff_in(r, v, dr);
        r = sub(mul(lb, r), mul(lr, shift(b, v, dr - db)));
    }
    return r;
}

Sparse gcd_sparse(const Sparse& a, const Sparse& b) {
    if (a.zero()) return monic(b);
    if (b.zero()) return monic(a);
    if (a.constant() || b.constant()) return one(a.nvars);
    if (a.terms.size() == 1) return monomial_gcd(a, b);
    if (b.terms.size() == 1) return monomial_gcd(b, a);

    std::size_t v = *main_variable(a, b);
    int da = degree_in(a, v);
    int db = degree_in(b, v);
    if (da == 0) return gcd_sparse(a, content_in(b, v));
    if (db == 0) return gcd_sparse(content_in(a, v), b);

    Sparse ca = content_in(a, v);
    Sparse cb = content_in(b, v);
    Sparse pa = ca.constant() ? a : *exact_div(a, ca);
    Sparse pb = cb.constant() ? b : *exact_div(b, cb);
    Sparse gc = gcd_sparse(ca, cb);
    if (da < db) std::swap(pa, pb);

    while (true) {
        Sparse r = pseudo_remainder(pa, pb, v);
        if (r.zero()) break;
        if (degree_in(r, v) == 0) {
            pb = one(a.nvars);
            break;
        }
        pa = std::move(pb);
        pb = primitive_part(r, v);
    }
    return monic(mul(gc, primitive_part(pb, v)));
}

// ------------------------------------------------------------ conversion

struct Space {
    std::vector<Atom> atoms;

    explicit Space(std::initializer_list<const Poly*> polys) {
        for (const Poly* p : polys)
            for (const auto& t : p->terms())
                for (const auto& f : t.monomial) atoms.push_back(f.atom);
        auto less = [](const Atom& x, const Atom& y) { return compare_atoms(*x, *y) < 0; };
        std::sort(atoms.begin(), atoms.end(), less);
        atoms.erase(std::unique(atoms.begin(), atoms.end(),
                                [](const Atom& x, const Atom& y) { return compare_atoms(*x, *y) == 0; }),
                    atoms.end());
    }

    std::size_t index(const AtomNode& a) const {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), a,
                                   [](const Atom& x, const AtomNode& y) { return compare_atoms(*x, y) < 0; });
        return static_cast<std::size_t>(it - atoms.begin());
    }

    Sparse to_sparse(const Poly& p) const {
        Sparse s;
        s.nvars = atoms.size();
        for (const auto& t : p.terms()) {
            Exps e(atoms.size(), 0);
            for (const auto& f : t.monomial) e[index(*f.atom)] = f.exponent;
            s.terms.emplace(std::move(e), t.coeff);
        }
        return s;
    }

    Poly to_poly(const Sparse& s) const {
        std::vector<Term> terms;
        for (const auto& [e, c] : s.terms) {
            Monomial m;
            std::vector<std::pair<Atom, int>> exps;
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (e[k] == 0) continue;
                if (atoms[k]->kind == AtomKind::Exp)
                    exps.emplace_back(atoms[k], e[k]);
                else
                    m.push_back({atoms[k], e[k]});
            }
            for (const auto& [atom, k] : exps)
                for (int r = 0; r < k; ++r) m = multiply_monomials(m, Monomial{{atom, 1}});
            terms.push_back(Term{std::move(m), c});
        }
        return Poly::from_terms(std::move(terms));
    }
};

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
    Space space{&a, &b};
    Poly g = space.to_poly(gcd_sparse(space.to_sparse(a), space.to_sparse(b)));
    if (g.is_zero()) return g;
    return g.scaled(1 / g.leading().coeff);
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    Space space{&a, &b};
    auto q = exact_div(space.to_sparse(a), space.to_sparse(b));
    if (!q) return std::nullopt;
    return space.to_poly(*q);
}

}  // namespace jetgeom::sym
