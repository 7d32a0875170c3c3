#pragma once

#include "polybloch/symbols.hpp"

#include <array>

namespace polybloch {

struct Expr::Node {
    NodeKind kind;
    Complex value{};          // literal, mob parameter, scale factor
    std::size_t index = 0;    // variable
    unsigned exponent = 0;    // power
    std::size_t bound = 0;    // one past the largest variable index below this node
    std::array<std::shared_ptr<const Node>, 2> children{};
};

struct ExprAccess {
    static const Expr::Node& node(const Expr& e) { return *e.node_; }
};

} // namespace polybloch
