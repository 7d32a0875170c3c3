#include "node.hpp"

#include "polybloch/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace polybloch {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

std::size_t child_bound(const Expr::Node& n) {
    std::size_t b = 0;
    for (const auto& c : n.children) {
        if (c) b = std::max(b, c->bound);
    }
    return b;
}

void require_finite(Complex c, const char* what) {
    if (!is_finite(c)) throw DomainError(std::string(what) + ": constant is not finite");
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_literal(Complex c) {
    const double re = c.real();
    const double im = c.imag();
    if (im == 0.0) {
        if (std::signbit(re) && re != 0.0) return "(" + format_real(re) + ")";
        return format_real(re == 0.0 ? 0.0 : re);
    }
    if (re == 0.0) return "(" + format_real(im) + "i)";
    const char* sign = std::signbit(im) ? "-" : "+";
    return "(" + format_real(re) + sign + format_real(std::abs(im)) + "i)";
}

Complex ipow(Complex base, unsigned k) {
    Complex result{1.0, 0.0};
    while (k > 0) {
        if (k & 1U) result *= base;
        base *= base;
        k >>= 1U;
    }
    return result;
}

Complex guarded_divide(Complex num, Complex den) {
    if (std::abs(den) < kPoleGuard) throw PoleError("division by a value within 1e-14 of zero");
    return num / den;
}

void check_log_argument(Complex arg) {
    if (std::abs(arg) < kPoleGuard) throw BranchError("log argument within 1e-14 of zero");
}

Complex checked(Complex v) {
    if (!is_finite(v)) throw EvalError("expression value is not finite");
    return v;
}

Complex mobius_denominator(Complex a, Complex e) {
    const Complex den = 1.0 - std::conj(a) * e;
    if (std::abs(den) < kPoleGuard) throw PoleError("mob denominator within 1e-14 of zero");
    return den;
}

Complex eval_node(const Expr::Node& n, std::span<const Complex> z) {
    switch (n.kind) {
    case NodeKind::literal: return n.value;
    case NodeKind::variable:
        if (n.index >= z.size()) throw DomainError("variable index exceeds point dimension");
        return z[n.index];
    case NodeKind::negate: return -eval_node(*n.children[0], z);
    case NodeKind::add: return checked(eval_node(*n.children[0], z) + eval_node(*n.children[1], z));
    case NodeKind::subtract: return checked(eval_node(*n.children[0], z) - eval_node(*n.children[1], z));
    case NodeKind::multiply: return checked(eval_node(*n.children[0], z) * eval_node(*n.children[1], z));
    case NodeKind::divide: {
        const Complex num = eval_node(*n.children[0], z);
        return checked(guarded_divide(num, eval_node(*n.children[1], z)));
    }
    case NodeKind::power: return checked(ipow(eval_node(*n.children[0], z), n.exponent));
    case NodeKind::mobius: {
        const Complex e = eval_node(*n.children[0], z);
        return checked((e - n.value) / mobius_denominator(n.value, e));
    }
    case NodeKind::exp: return checked(std::exp(eval_node(*n.children[0], z)));
    case NodeKind::log: {
        const Complex arg = eval_node(*n.children[0], z);
        check_log_argument(arg);
        return std::log(arg);
    }
    case NodeKind::scale: return checked(n.value * eval_node(*n.children[0], z));
    }
    throw EvalError("unknown node kind");
}

void scale_partials(std::vector<Complex>& p, Complex factor) {
    for (auto& d : p) d *= factor;
}

Jet jet_node(const Expr::Node& n, std::span<const Complex> z) {
    const std::size_t dim = z.size();
    switch (n.kind) {
    case NodeKind::literal: return {n.value, std::vector<Complex>(dim)};
    case NodeKind::variable: {
        if (n.index >= dim) throw DomainError("variable index exceeds point dimension");
        Jet j{z[n.index], std::vector<Complex>(dim)};
        j.partials[n.index] = 1.0;
        return j;
    }
    case NodeKind::negate: {
        Jet j = jet_node(*n.children[0], z);
        j.value = -j.value;
        for (auto& d : j.partials) d = -d;
        return j;
    }
    case NodeKind::add:
    case NodeKind::subtract: {
        Jet a = jet_node(*n.children[0], z);
        const Jet b = jet_node(*n.children[1], z);
        const double sign = n.kind == NodeKind::add ? 1.0 : -1.0;
        a.value = checked(a.value + sign * b.value);
        for (std::size_t k = 0; k < dim; ++k) a.partials[k] += sign * b.partials[k];
        return a;
    }
    case NodeKind::multiply: {
        Jet a = jet_node(*n.children[0], z);
        const Jet b = jet_node(*n.children[1], z);
        for (std::size_t k = 0; k < dim; ++k) a.partials[k] = a.partials[k] * b.value + a.value * b.partials[k];
        a.value = checked(a.value * b.value);
        return a;
    }
    case NodeKind::divide: {
        Jet a = jet_node(*n.children[0], z);
        const Jet b = jet_node(*n.children[1], z);
        const Complex q = guarded_divide(a.value, b.value);
        // (a/b)' = (a' - q b') / b
        for (std::size_t k = 0; k < dim; ++k) a.partials[k] = (a.partials[k] - q * b.partials[k]) / b.value;
        a.value = checked(q);
        return a;
    }
    case NodeKind::power: {
        Jet a = jet_node(*n.children[0], z);
        if (n.exponent == 0) return {1.0, std::vector<Complex>(dim)};
        const Complex lower = ipow(a.value, n.exponent - 1);
        scale_partials(a.partials, static_cast<double>(n.exponent) * lower);
        a.value = checked(lower * a.value);
        return a;
    }
    case NodeKind::mobius: {
        Jet e = jet_node(*n.children[0], z);
        const Complex den = mobius_denominator(n.value, e.value);
        scale_partials(e.partials, (1.0 - std::norm(n.value)) / (den * den));
        e.value = checked((e.value - n.value) / den);
        return e;
    }
    case NodeKind::exp: {
        Jet e = jet_node(*n.children[0], z);
        e.value = checked(std::exp(e.value));
        scale_partials(e.partials, e.value);
        return e;
    }
    case NodeKind::log: {
        Jet e = jet_node(*n.children[0], z);
        check_log_argument(e.value);
        scale_partials(e.partials, 1.0 / e.value);
        e.value = std::log(e.value);
        return e;
    }
    case NodeKind::scale: {
        Jet e = jet_node(*n.children[0], z);
        e.value = checked(n.value * e.value);
        scale_partials(e.partials, n.value);
        return e;
    }
    }
    throw EvalError("unknown node kind");
}

bool equal_nodes(const Expr::Node& a, const Expr::Node& b) {
    if (&a == &b) return true;
    if (a.kind != b.kind || a.value != b.value || a.index != b.index || a.exponent != b.exponent) return false;
    for (std::size_t k = 0; k < 2; ++k) {
        const bool has_a = static_cast<bool>(a.children[k]);
        if (has_a != static_cast<bool>(b.children[k])) return false;
        if (has_a && !equal_nodes(*a.children[k], *b.children[k])) return false;
    }
    return true;
}

void print_node(const Expr::Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        print_node(*n.children[0], out);
        out += op;
        print_node(*n.children[1], out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        print_node(*n.children[0], out);
        out += ')';
    };
    auto with_constant = [&](const char* name) {
        out += name;
        out += '(';
        out += format_literal(n.value);
        out += ", ";
        print_node(*n.children[0], out);
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::literal: out += format_literal(n.value); return;
    case NodeKind::variable: out += "z" + std::to_string(n.index + 1); return;
    case NodeKind::negate:
        out += "(-";
        print_node(*n.children[0], out);
        out += ')';
        return;
    case NodeKind::add: binary(" + "); return;
    case NodeKind::subtract: binary(" - "); return;
    case NodeKind::multiply: binary(" * "); return;
    case NodeKind::divide: binary(" / "); return;
    case NodeKind::power:
        out += "pow(";
        print_node(*n.children[0], out);
        out += ", " + std::to_string(n.exponent) + ")";
        return;
    case NodeKind::mobius: with_constant("mob"); return;
    case NodeKind::exp: call("exp"); return;
    case NodeKind::log: call("log"); return;
    case NodeKind::scale: with_constant("scale"); return;
    }
}

NodePtr make_node(Expr::Node n) {
    n.bound = std::max(n.bound, child_bound(n));
    return std::make_shared<const Expr::Node>(std::move(n));
}

} // namespace

Expr Expr::literal(Complex value) {
    require_finite(value, "literal");
    return Expr(make_node({.kind = NodeKind::literal, .value = value}));
}

Expr Expr::variable(std::size_t index) {
    return Expr(make_node({.kind = NodeKind::variable, .index = index, .bound = index + 1}));
}

Expr Expr::negate(Expr operand) { return Expr(make_node({.kind = NodeKind::negate, .children = {operand.node_}})); }

Expr Expr::add(Expr lhs, Expr rhs) {
    return Expr(make_node({.kind = NodeKind::add, .children = {lhs.node_, rhs.node_}}));
}

Expr Expr::subtract(Expr lhs, Expr rhs) {
    return Expr(make_node({.kind = NodeKind::subtract, .children = {lhs.node_, rhs.node_}}));
}

Expr Expr::multiply(Expr lhs, Expr rhs) {
    return Expr(make_node({.kind = NodeKind::multiply, .children = {lhs.node_, rhs.node_}}));
}

Expr Expr::divide(Expr lhs, Expr rhs) {
    return Expr(make_node({.kind = NodeKind::divide, .children = {lhs.node_, rhs.node_}}));
}

Expr Expr::power(Expr base, unsigned exponent) {
    return Expr(make_node({.kind = NodeKind::power, .exponent = exponent, .children = {base.node_}}));
}

Expr Expr::mobius(Complex a, Expr operand) {
    require_finite(a, "mob");
    if (std::abs(a) >= 1.0) throw DomainError("mob: parameter must satisfy |a| < 1");
    return Expr(make_node({.kind = NodeKind::mobius, .value = a, .children = {operand.node_}}));
}

Expr Expr::exp(Expr operand) { return Expr(make_node({.kind = NodeKind::exp, .children = {operand.node_}})); }

Expr Expr::log(Expr operand) { return Expr(make_node({.kind = NodeKind::log, .children = {operand.node_}})); }

Expr Expr::scale(Complex factor, Expr operand) {
    require_finite(factor, "scale");
    return Expr(make_node({.kind = NodeKind::scale, .value = factor, .children = {operand.node_}}));
}

NodeKind Expr::kind() const noexcept { return node_->kind; }
Complex Expr::constant() const noexcept { return node_->value; }
std::size_t Expr::variable_index() const noexcept { return node_->index; }
unsigned Expr::exponent() const noexcept { return node_->exponent; }
std::size_t Expr::variable_bound() const noexcept { return node_->bound; }

std::size_t Expr::arity() const noexcept {
    return static_cast<std::size_t>(static_cast<bool>(node_->children[0])) +
           static_cast<std::size_t>(static_cast<bool>(node_->children[1]));
}

Expr Expr::operand(std::size_t i) const {
    if (i >= arity()) throw std::out_of_range("Expr::operand");
    return Expr(node_->children[i]);
}

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(*a.node_, *b.node_); }

std::string to_string(const Expr& e) {
    std::string out;
    print_node(ExprAccess::node(e), out);
    return out;
}

Complex eval_scalar(const Expr& e, std::span<const Complex> z) { return eval_node(ExprAccess::node(e), z); }

Complex eval_scalar(const Expr& e, const PolydiscPoint& z) { return eval_scalar(e, z.coords()); }

Jet eval_jet(const Expr& e, std::span<const Complex> z) { return jet_node(ExprAccess::node(e), z); }

Jet eval_jet(const Expr& e, const PolydiscPoint& z) { return eval_jet(e, z.coords()); }

} // namespace polybloch
