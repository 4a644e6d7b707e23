#include "jetgeom/symkernel/symkernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace jetgeom::sym {

// ---------------------------------------------------------------- conversions

RatFunc canonical(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return RatFunc(e.value());
        case ExprKind::Coordinate:
            return RatFunc::coordinate(e.coordinate_id(), e.name());
        case ExprKind::Sum: {
            RatFunc acc;
            for (const auto& c : e.children()) acc = acc + canonical(c);
            return acc;
        }
        case ExprKind::Product: {
            RatFunc acc(1);
            for (const auto& c : e.children()) acc = acc * canonical(c);
            return acc;
        }
        case ExprKind::Power:
            return canonical(e.children()[0]).pow(e.exponent());
        case ExprKind::Negation:
            return -canonical(e.children()[0]);
        case ExprKind::Function: {
            RatFunc u = canonical(e.children()[0]);
            switch (e.function()) {
                case Function::Sin: return sin(u);
                case Function::Cos: return cos(u);
                case Function::Tan: return tan(u);
                case Function::Exp: return exp(u);
                case Function::Log: return log(u);
                case Function::Sqrt: return sqrt(u);
            }
        }
    }
    throw std::logic_error("unknown expression kind");
}

namespace {

Expr factor_expr(const Factor& f) {
    const AtomNode& a = *f.atom;
    Expr base;
    switch (a.kind) {
        case AtomKind::Coordinate: base = Expr::coordinate(a.coord, a.name); break;
        case AtomKind::Sin: base = Expr::apply(Function::Sin, to_expr(a.arg)); break;
        case AtomKind::Cos: base = Expr::apply(Function::Cos, to_expr(a.arg)); break;
        case AtomKind::Exp: base = Expr::apply(Function::Exp, to_expr(a.arg)); break;
        case AtomKind::Log: base = Expr::apply(Function::Log, to_expr(a.arg)); break;
        case AtomKind::Root: return Expr::power(to_expr(a.arg), Rational(f.exponent, a.root));
    }
    return f.exponent == 1 ? base : Expr::power(base, Rational(f.exponent));
}

Expr poly_expr(const Poly& p) {
    std::vector<Expr> terms;
    for (const auto& t : p.terms()) {
        std::vector<Expr> factors;
        Rational mag = abs(t.coeff);
        if (mag != 1 || t.monomial.empty()) factors.push_back(Expr::constant(mag));
        for (const auto& f : t.monomial) factors.push_back(factor_expr(f));
        Expr term = Expr::product(std::move(factors));
        terms.push_back(t.coeff < 0 ? Expr::negate(std::move(term)) : std::move(term));
    }
    return Expr::sum(std::move(terms));
}

}  // namespace

Expr to_expr(const RatFunc& f) {
    Expr num = poly_expr(f.numerator());
    if (f.denominator().is_constant()) return num;
    return Expr::product({num, Expr::power(poly_expr(f.denominator()), Rational(-1))});
}

std::string to_string(const RatFunc& f) { return to_string(to_expr(f)); }

Expr normalize(const Expr& e) { return to_expr(canonical(e)); }

Expr differentiate(const Expr& e, int coord) { return to_expr(differentiate(canonical(e), coord)); }

// ---------------------------------------------------------------- evaluation

namespace {

double checked(double v, const char* what, const std::function<std::string()>& text) {
    if (!std::isfinite(v)) throw DomainError(what, text());
    return v;
}

double root_value(double v, int q, const std::function<std::string()>& text) {
    if (v < 0) {
        if (q % 2 == 0) throw DomainError("even root of a negative value", text());
        return -std::pow(-v, 1.0 / q);
    }
    return std::pow(v, 1.0 / q);
}

double rational_power(double base, const Rational& r, const std::function<std::string()>& text) {
    if (base == 0 && r < 0) throw DomainError("division by zero", text());
    if (is_integer(r)) return std::pow(base, static_cast<double>(r.get_num().get_si()));
    double root = root_value(base, static_cast<int>(r.get_den().get_si()), text);
    return std::pow(root, static_cast<double>(r.get_num().get_si()));
}

double eval_atom(const AtomNode& a, std::span<const double> point, int exponent) {
    auto text = [&] { return to_string(to_expr(RatFunc::from_atom(std::make_shared<AtomNode>(a)))); };
    double v = 0;
    switch (a.kind) {
        case AtomKind::Coordinate: v = point[static_cast<std::size_t>(a.coord)]; break;
        case AtomKind::Sin: v = std::sin(evaluate(a.arg, point)); break;
        case AtomKind::Cos: v = std::cos(evaluate(a.arg, point)); break;
        case AtomKind::Exp: v = checked(std::exp(evaluate(a.arg, point)), "overflow", text); break;
        case AtomKind::Log: {
            double u = evaluate(a.arg, point);
            if (u <= 0) throw DomainError("log of non-positive value", text());
            v = std::log(u);
            break;
        }
        case AtomKind::Root: v = root_value(evaluate(a.arg, point), a.root, text); break;
    }
    return std::pow(v, exponent);
}

double eval_poly(const Poly& p, std::span<const double> point) {
    double sum = 0;
    for (const auto& t : p.terms()) {
        double term = t.coeff.get_d();
        for (const auto& f : t.monomial) term *= eval_atom(*f.atom, point, f.exponent);
        sum += term;
    }
    return sum;
}

}  // namespace

double evaluate(const RatFunc& f, std::span<const double> point) {
    double num = eval_poly(f.numerator(), point);
    if (f.denominator().is_constant()) return num;
    double den = eval_poly(f.denominator(), point);
    if (den == 0) throw DomainError("division by zero", to_string(to_expr(f)));
    return checked(num / den, "non-finite value", [&] { return to_string(to_expr(f)); });
}

double eval_numeric(const Expr& e, const Point& at) {
    auto text = [&] { return to_string(e); };
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.value().get_d();
        case ExprKind::Coordinate:
            return at[e.coordinate_id()];
        case ExprKind::Sum: {
            double s = 0;
            for (const auto& c : e.children()) s += eval_numeric(c, at);
            return s;
        }
        case ExprKind::Product: {
            double s = 1;
            for (const auto& c : e.children()) s *= eval_numeric(c, at);
            return checked(s, "non-finite value", text);
        }
        case ExprKind::Power:
            return checked(rational_power(eval_numeric(e.children()[0], at), e.exponent(), text), "non-finite value",
                           text);
        case ExprKind::Negation:
            return -eval_numeric(e.children()[0], at);
        case ExprKind::Function: {
            double u = eval_numeric(e.children()[0], at);
            switch (e.function()) {
                case Function::Sin: return std::sin(u);
                case Function::Cos: return std::cos(u);
                case Function::Tan:
                    if (std::cos(u) == 0) throw DomainError("tan at a pole", text());
                    return std::tan(u);
                case Function::Exp: return checked(std::exp(u), "overflow", text);
                case Function::Log:
                    if (u <= 0) throw DomainError("log of non-positive value", text());
                    return std::log(u);
                case Function::Sqrt:
                    if (u < 0) throw DomainError("square root of a negative value", text());
                    return std::sqrt(u);
            }
        }
    }
    throw std::logic_error("unknown expression kind");
}

// ---------------------------------------------------------------- zero test

std::string_view to_string(ZeroTier tier) {
    switch (tier) {
        case ZeroTier::Symbolic: return "symbolic";
        case ZeroTier::Numeric: return "numeric";
        case ZeroTier::Failed: return "failed";
    }
    return "?";
}

ProbeSampler::ProbeSampler(int dimension, std::uint64_t seed) : dimension_(dimension), state_(seed) {}

Point ProbeSampler::next() {
    Point p;
    p.values.resize(static_cast<std::size_t>(dimension_));
    for (auto& v : p.values) {
        // splitmix64; fixed arithmetic keeps probes identical across platforms
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        v = kLow + (kHigh - kLow) * u;
    }
    return p;
}

ZeroTestResult is_zero(const RatFunc& f, int dimension, const ZeroTestOptions& opts) {
    if (opts.probes < 1 || !(opts.tol > 0)) throw std::invalid_argument("is_zero needs probes >= 1 and tol > 0");
    ZeroTestResult r;
    if (f.is_zero()) {
        r.zero = true;
        r.tier = ZeroTier::Symbolic;
        return r;
    }
    for_each_probe(dimension, opts.probes, opts.seed, [&](const Point& p) {
        double v = std::abs(evaluate(f, p.values));
        r.max_abs = std::max(r.max_abs, v);
        if (!(v < opts.tol) && !r.witness) r.witness = p;
    });
    r.zero = !r.witness;
    r.tier = r.zero ? ZeroTier::Numeric : ZeroTier::Failed;
    return r;
}

ZeroTestResult is_zero(const Expr& e, const CoordinateSystem& coords, const ZeroTestOptions& opts) {
    return is_zero(canonical(e), coords.size(), opts);
}

}  // namespace jetgeom::sym
