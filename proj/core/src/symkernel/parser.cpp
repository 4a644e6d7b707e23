#include "jetgeom/symkernel/symkernel.hpp"

#include <cctype>

namespace jetgeom::sym {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i < s.size() && (s[i] == '.' || s[i] == 'e' || s[i] == 'E'))
                throw ParseError("floating-point literal not allowed, write it as a rational such as 1/10", start);
            out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
            continue;
        }
        if (c == '.') throw ParseError("floating-point literal not allowed, write it as a rational such as 1/10", start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '/': k = Tok::Slash; break;
            case '^': k = Tok::Caret; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        out.push_back({k, std::string(1, c), start});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

std::optional<Function> lookup_function(std::string_view name) {
    if (name == "sin") return Function::Sin;
    if (name == "cos") return Function::Cos;
    if (name == "tan") return Function::Tan;
    if (name == "exp") return Function::Exp;
    if (name == "log") return Function::Log;
    if (name == "sqrt") return Function::Sqrt;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, const CoordinateSystem& coords) : toks_(tokenize(text)), coords_(coords) {}

    Expr parse() {
        Expr e = expr();
        if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
        take();
    }

    Expr expr() {
        std::vector<Expr> terms{term()};
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool minus = take().kind == Tok::Minus;
            Expr t = term();
            terms.push_back(minus ? Expr::negate(std::move(t)) : std::move(t));
        }
        return Expr::sum(std::move(terms));
    }

    Expr term() {
        std::vector<Expr> factors{unary(true)};
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            bool divide = take().kind == Tok::Slash;
            Expr f = unary(!divide);
            factors.push_back(divide ? Expr::power(std::move(f), Rational(-1)) : std::move(f));
        }
        return Expr::product(std::move(factors));
    }

    Expr unary(bool allow_rational) {
        if (peek().kind == Tok::Minus) {
            take();
            return Expr::negate(unary(allow_rational));
        }
        if (peek().kind == Tok::Plus) {
            take();
            return unary(allow_rational);
        }
        return power(allow_rational);
    }

    Expr power(bool allow_rational) {
        Expr base = primary(allow_rational);
        if (peek().kind != Tok::Caret) return base;
        take();
        std::size_t at = peek().pos;
        Expr exponent = unary(false);
        auto value = canonical(exponent).constant_value();
        if (!value) throw ParseError("exponent must be a rational constant", at);
        return Expr::power(std::move(base), *value);
    }

    Expr primary(bool allow_rational) {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: {
                take();
                // a/b is a rational literal unless it is the base of a power.
                if (allow_rational && peek().kind == Tok::Slash && peek(1).kind == Tok::Number &&
                    peek(2).kind != Tok::Caret) {
                    take();
                    const Token& den = take();
                    try {
                        return Expr::constant(parse_rational(t.text + "/" + den.text));
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(e.what(), den.pos);
                    }
                }
                return Expr::constant(parse_rational(t.text));
            }
            case Tok::Ident: {
                take();
                if (auto fn = lookup_function(t.text)) {
                    expect(Tok::LParen, "'(' after function name");
                    Expr arg = expr();
                    expect(Tok::RParen, "')'");
                    return Expr::apply(*fn, std::move(arg));
                }
                auto id = coords_.find(t.text);
                if (!id) throw UnknownIdentifier(t.text, t.pos);
                return Expr::coordinate(*id, t.text);
            }
            case Tok::LParen: {
                take();
                Expr e = expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::End:
                throw ParseError("unexpected end of input", t.pos);
            default:
                throw ParseError("unexpected '" + t.text + "'", t.pos);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const CoordinateSystem& coords_;
};

}  // namespace

Expr parse_expression(std::string_view text, const CoordinateSystem& coords) { return Parser(text, coords).parse(); }

}  // namespace jetgeom::sym
