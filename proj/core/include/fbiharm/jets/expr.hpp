#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fbiharm/jets/jet.hpp"

namespace fbiharm {

namespace expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
    double value;
};
struct Coordinate {
    std::size_t index;  // zero-based; printed as x{index+1}
};
struct Negation {
    NodePtr arg;
};
enum class BinaryOp { Add, Subtract, Multiply, Divide };
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Power {
    NodePtr base;
    double exponent;
};
struct Function {
    Elementary fn;
    NodePtr arg;
};

struct Node : std::variant<Constant, Coordinate, Negation, Binary, Power, Function> {
    using variant::variant;
};

}  // namespace expr

/// Immutable symbolic scalar expression over chart coordinates.
///
/// Copies share structure. Domain restrictions (positive log/sqrt argument,
/// nonzero divisor) are checked when evaluating, never when building.
class Expr {
public:
    Expr() : Expr(0.0) {}
    Expr(double value);  // NOLINT: implicit so literals mix into expressions

    static Expr coordinate(std::size_t index);

    const expr::Node& node() const noexcept { return *node_; }
    const expr::NodePtr& node_ptr() const noexcept { return node_; }

    bool is_constant() const noexcept;
    /// Value of an expression free of coordinates; throws otherwise.
    double constant_value() const;
    /// One past the largest coordinate index used (0 for constants).
    std::size_t arity() const;

    double evaluate(std::span<const double> point) const;
    Jet evaluate(std::span<const Jet> jets) const;

    /// Fully parenthesised text that parse_expression() maps back to an equal tree.
    std::string to_string() const;

    friend bool structurally_equal(const Expr& a, const Expr& b);

private:
    explicit Expr(expr::NodePtr node) : node_(std::move(node)) {}
    static Expr make(expr::Node node);

    expr::NodePtr node_;

    friend Expr operator+(const Expr&, const Expr&);
    friend Expr operator-(const Expr&, const Expr&);
    friend Expr operator*(const Expr&, const Expr&);
    friend Expr operator/(const Expr&, const Expr&);
    friend Expr operator-(const Expr&);
    friend Expr pow(const Expr&, double);
    friend Expr apply(Elementary, const Expr&);
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, double exponent);
Expr apply(Elementary fn, const Expr& arg);
inline Expr exp(const Expr& a) { return apply(Elementary::Exp, a); }
inline Expr log(const Expr& a) { return apply(Elementary::Log, a); }
inline Expr sin(const Expr& a) { return apply(Elementary::Sin, a); }
inline Expr cos(const Expr& a) { return apply(Elementary::Cos, a); }
inline Expr sqrt(const Expr& a) { return apply(Elementary::Sqrt, a); }

/// Coordinate x_i with the one-based numbering of the text grammar.
inline Expr x(std::size_t one_based) { return Expr::coordinate(one_based - 1); }

/// Jet of the expression at the point the jets were seeded at.
Jet eval_expression(const Expr& e, std::span<const Jet> jets);

/// Parses the expression grammar: x1..xn, decimal/scientific literals,
/// + - * / ^ (^ right-associative; unary minus binds tighter than * and /
/// but looser than ^), and exp/log/sin/cos/sqrt calls.
Expr parse_expression(std::string_view text);

/// Formats a double so that parsing it back yields the same value.
std::string format_number(double value);

}  // namespace fbiharm
