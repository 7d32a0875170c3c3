#pragma once

// Holomorphic maps of the polydisc written as component expressions in
// z1..zn. Grammar (whitespace ignored):
//
//   map      = expr { ";" expr }
//   expr     = term { ("+" | "-") term }
//   term     = unary { ("*" | "/") unary }
//   unary    = "-" unary | primary
//   primary  = number | "i" | variable | call | "(" expr ")"
//   number   = digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ] [ "i" ]
//   variable = "z" digits                      (1 <= index <= n)
//   call     = "pow"   "(" expr "," integer ")"
//            | "mob"   "(" constant "," expr ")"     (|constant| < 1)
//            | "scale" "(" constant "," expr ")"
//            | "exp"   "(" expr ")"
//            | "log"   "(" expr ")"                  (principal branch)
//
// mob(a, e) = (e - a) / (1 - conj(a) e). A `constant` is any subexpression
// without variables. Variable-free subexpressions are folded to a single
// literal while parsing.

#include "polybloch/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polybloch {

enum class NodeKind { literal, variable, negate, add, subtract, multiply, divide, power, mobius, exp, log, scale };

// Division denominators and log arguments below this modulus are reported as
// poles / branch points.
inline constexpr double kPoleGuard = 1e-14;

// Immutable expression tree; copies share nodes.
class Expr {
public:
    static Expr literal(Complex value);
    static Expr variable(std::size_t index); // 0-based
    static Expr negate(Expr operand);
    static Expr add(Expr lhs, Expr rhs);
    static Expr subtract(Expr lhs, Expr rhs);
    static Expr multiply(Expr lhs, Expr rhs);
    static Expr divide(Expr lhs, Expr rhs);
    static Expr power(Expr base, unsigned exponent);
    static Expr mobius(Complex a, Expr operand);
    static Expr exp(Expr operand);
    static Expr log(Expr operand);
    static Expr scale(Complex factor, Expr operand);

    NodeKind kind() const noexcept;
    // literal value, mob parameter, or scale factor
    Complex constant() const noexcept;
    std::size_t variable_index() const noexcept;
    unsigned exponent() const noexcept;
    std::size_t arity() const noexcept;
    Expr operand(std::size_t i) const;

    // One past the largest variable index used (0 for constants).
    std::size_t variable_bound() const noexcept;
    bool is_constant() const noexcept { return variable_bound() == 0; }

    friend bool operator==(const Expr& a, const Expr& b);

    struct Node;

private:
    friend struct ExprAccess;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Reparseable text form: binary nodes fully parenthesized, literals printed
// with 17 significant digits.
std::string to_string(const Expr& e);

// Value and the n holomorphic partials of a scalar function at a point.
struct Jet {
    Complex value;
    std::vector<Complex> partials;
};

Complex eval_scalar(const Expr& e, std::span<const Complex> z);
Complex eval_scalar(const Expr& e, const PolydiscPoint& z);
Jet eval_jet(const Expr& e, std::span<const Complex> z);
Jet eval_jet(const Expr& e, const PolydiscPoint& z);

class SymbolMap;

struct ValidationReport {
    bool passed = false;
    double max_sup_norm = 0.0;          // largest |||m(z)||| seen on the sample
    std::size_t samples = 0;            // points evaluated, origin included
    std::optional<std::vector<Complex>> witness; // first offending point
    std::string failure;                // empty on pass
};

// n component expressions defining a candidate self-map of U^n.
class SymbolMap {
public:
    SymbolMap(std::vector<Expr> components, std::size_t dim, std::string source = {});

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Expr>& components() const noexcept { return components_; }
    const Expr& component(std::size_t j) const { return components_.at(j); }
    const std::string& source() const noexcept { return source_; }

    // Set only through a passing ValidationReport.
    bool validated() const noexcept { return validated_; }
    SymbolMap with_validation(const ValidationReport& report) const;

private:
    std::size_t dim_;
    std::vector<Expr> components_;
    std::string source_;
    bool validated_ = false;
};

Expr parse_expression(std::string_view source, std::size_t dim);
SymbolMap parse_map(std::string_view source, std::size_t dim);

// Componentwise values without the boundary check.
void eval_map_into(const SymbolMap& m, std::span<const Complex> z, std::span<Complex> out);
std::vector<Complex> eval_map_raw(const SymbolMap& m, std::span<const Complex> z);

// Throws EscapeError if any component has modulus >= 1 - kInteriorMargin.
PolydiscPoint eval_map(const SymbolMap& m, const PolydiscPoint& z);

// Images with |||m(z)||| at or above this value fail validation.
inline constexpr double kSelfMapThreshold = 1.0 - 1e-12;

// Evaluates m on the origin plus `budget` points of the boundary-weighted
// sample. A pass is evidence that m maps U^n into itself, not a proof.
ValidationReport validate_self_map(const SymbolMap& m, std::size_t budget, std::uint64_t seed);

} // namespace polybloch
