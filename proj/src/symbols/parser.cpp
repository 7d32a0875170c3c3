#include "polybloch/error.hpp"
#include "polybloch/symbols.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace polybloch {

namespace {

enum class TokenKind { number, identifier, plus, minus, star, slash, lparen, rparen, comma, semicolon, end };

struct Token {
    TokenKind kind;
    std::size_t position;
    std::string_view text;
    Complex number{};      // number tokens, imaginary when suffixed with i
    bool integer = false;  // number token spelled with digits only
};

constexpr unsigned kMaxExponent = 1024;

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ == src_.size()) return {TokenKind::end, start, {}};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            return {TokenKind::identifier, start, src_.substr(start, pos_ - start)};
        }
        ++pos_;
        switch (c) {
        case '+': return {TokenKind::plus, start, src_.substr(start, 1)};
        case '-': return {TokenKind::minus, start, src_.substr(start, 1)};
        case '*': return {TokenKind::star, start, src_.substr(start, 1)};
        case '/': return {TokenKind::slash, start, src_.substr(start, 1)};
        case '(': return {TokenKind::lparen, start, src_.substr(start, 1)};
        case ')': return {TokenKind::rparen, start, src_.substr(start, 1)};
        case ',': return {TokenKind::comma, start, src_.substr(start, 1)};
        case ';': return {TokenKind::semicolon, start, src_.substr(start, 1)};
        default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

private:
    bool digit_at(std::size_t p) const {
        return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
    }

    Token number(std::size_t start) {
        bool integer = true;
        while (digit_at(pos_)) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            integer = false;
            ++pos_;
            while (digit_at(pos_)) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (digit_at(p)) {
                integer = false;
                pos_ = p;
                while (digit_at(pos_)) ++pos_;
            }
        }
        const std::string_view digits = src_.substr(start, pos_ - start);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || !std::isfinite(value)) {
            throw ParseError("malformed number '" + std::string(digits) + "'", start);
        }
        Token tok{TokenKind::number, start, digits, Complex(value, 0.0), integer};
        // an imaginary suffix must not run into a longer identifier
        if (pos_ < src_.size() && src_[pos_] == 'i' &&
            !(pos_ + 1 < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '_'))) {
            ++pos_;
            tok.number = Complex(0.0, value);
            tok.integer = false;
            tok.text = src_.substr(start, pos_ - start);
        }
        if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            throw ParseError("number followed by an identifier", pos_);
        }
        return tok;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, std::size_t dim) : lexer_(src), dim_(dim), end_(src.size()) { advance(); }

    Expr expression() {
        Expr lhs = term();
        while (current_.kind == TokenKind::plus || current_.kind == TokenKind::minus) {
            const Token op = current_;
            advance();
            Expr rhs = term();
            lhs = fold(op.kind == TokenKind::plus ? Expr::add(lhs, rhs) : Expr::subtract(lhs, rhs), op.position);
        }
        return lhs;
    }

    std::vector<Expr> component_list() {
        std::vector<Expr> out;
        out.push_back(expression());
        while (current_.kind == TokenKind::semicolon) {
            advance();
            out.push_back(expression());
        }
        expect_end();
        return out;
    }

    Expr single() {
        Expr e = expression();
        if (current_.kind == TokenKind::semicolon) {
            throw ParseError("expected a single expression, found ';'", current_.position);
        }
        expect_end();
        return e;
    }

    std::size_t end() const { return end_; }

private:
    void advance() { current_ = lexer_.next(); }

    void expect(TokenKind kind, const char* what) {
        if (current_.kind != kind) throw ParseError(std::string("expected ") + what + describe_current(), current_.position);
        advance();
    }

    void expect_end() {
        if (current_.kind != TokenKind::end) throw ParseError("unexpected trailing input" + describe_current(), current_.position);
    }

    std::string describe_current() const {
        if (current_.kind == TokenKind::end) return ", found end of input";
        return ", found '" + std::string(current_.text) + "'";
    }

    // Collapses variable-free subtrees into literals.
    Expr fold(Expr e, std::size_t position) {
        if (!e.is_constant() || e.kind() == NodeKind::literal) return e;
        Complex value;
        try {
            value = eval_scalar(e, std::span<const Complex>{});
        } catch (const EvalError& err) {
            throw ParseError(std::string("constant subexpression cannot be evaluated: ") + err.what(), position);
        }
        if (!is_finite(value)) throw ParseError("constant subexpression is not finite", position);
        return Expr::literal(value);
    }

    Expr term() {
        Expr lhs = unary();
        while (current_.kind == TokenKind::star || current_.kind == TokenKind::slash) {
            const Token op = current_;
            advance();
            Expr rhs = unary();
            lhs = fold(op.kind == TokenKind::star ? Expr::multiply(lhs, rhs) : Expr::divide(lhs, rhs), op.position);
        }
        return lhs;
    }

    Expr unary() {
        if (current_.kind == TokenKind::minus) {
            const std::size_t at = current_.position;
            advance();
            return fold(Expr::negate(unary()), at);
        }
        return primary();
    }

    Expr constant_argument(const char* fn) {
        const std::size_t at = current_.position;
        Expr c = expression();
        if (!c.is_constant()) throw ParseError(std::string(fn) + ": first argument must be a constant", at);
        return c;
    }

    Expr primary() {
        const Token tok = current_;
        switch (tok.kind) {
        case TokenKind::number: advance(); return Expr::literal(tok.number);
        case TokenKind::lparen: {
            advance();
            Expr e = expression();
            expect(TokenKind::rparen, "')'");
            return e;
        }
        case TokenKind::identifier: return identifier(tok);
        default: throw ParseError("expected an operand" + describe_current(), tok.position);
        }
    }

    Expr identifier(const Token& tok) {
        const std::string_view name = tok.text;
        advance();
        if (name == "i") return Expr::literal(Complex(0.0, 1.0));
        if (name.size() > 1 && name[0] == 'z' && name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            std::size_t index = 0;
            const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec != std::errc{} || index == 0 || index > dim_) {
                throw ParseError("variable " + std::string(name) + " out of range for dimension " + std::to_string(dim_),
                                 tok.position);
            }
            return Expr::variable(index - 1);
        }
        if (name == "pow") {
            expect(TokenKind::lparen, "'(' after pow");
            Expr base = expression();
            expect(TokenKind::comma, "',' in pow");
            const Token k = current_;
            if (k.kind != TokenKind::number || !k.integer) {
                throw ParseError("pow exponent must be a non-negative integer", k.position);
            }
            if (k.number.real() > kMaxExponent) throw ParseError("pow exponent too large", k.position);
            advance();
            expect(TokenKind::rparen, "')' after pow");
            return fold(Expr::power(base, static_cast<unsigned>(k.number.real())), tok.position);
        }
        if (name == "mob" || name == "scale") {
            expect(TokenKind::lparen, "'('");
            const std::size_t at = current_.position;
            const Complex c = constant_argument(name == "mob" ? "mob" : "scale").constant();
            expect(TokenKind::comma, "','");
            Expr e = expression();
            expect(TokenKind::rparen, "')'");
            if (name == "mob") {
                if (!(std::abs(c) < 1.0)) throw ParseError("mob parameter must satisfy |a| < 1", at);
                return fold(Expr::mobius(c, e), tok.position);
            }
            return fold(Expr::scale(c, e), tok.position);
        }
        if (name == "exp" || name == "log") {
            expect(TokenKind::lparen, "'('");
            Expr e = expression();
            expect(TokenKind::rparen, "')'");
            return fold(name == "exp" ? Expr::exp(e) : Expr::log(e), tok.position);
        }
        throw ParseError("unknown identifier '" + std::string(name) + "'", tok.position);
    }

    Lexer lexer_;
    Token current_{TokenKind::end, 0, {}};
    std::size_t dim_;
    std::size_t end_;
};

void require_dim(std::size_t dim) {
    if (dim == 0) throw ParseError("dimension must be at least 1", 0);
}

} // namespace

Expr parse_expression(std::string_view source, std::size_t dim) {
    require_dim(dim);
    Parser p(source, dim);
    return p.single();
}

SymbolMap parse_map(std::string_view source, std::size_t dim) {
    require_dim(dim);
    Parser p(source, dim);
    std::vector<Expr> components = p.component_list();
    if (components.size() != dim) {
        throw ParseError("expected " + std::to_string(dim) + " component expressions, found " +
                             std::to_string(components.size()),
                         p.end());
    }
    return SymbolMap(std::move(components), dim, std::string(source));
}

} // namespace polybloch
