#include "fbiharm/jets/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fbiharm/error.hpp"

namespace fbiharm {

using namespace expr;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string point_text(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + format_number(p[i]);
    return s + ")";
}

double eval_scalar(const Node& n, std::span<const double> p);

double eval_scalar(const NodePtr& n, std::span<const double> p) { return eval_scalar(*n, p); }

double eval_scalar(const Node& n, std::span<const double> p)
{
    return std::visit(
        overloaded{
            [](const Constant& c) { return c.value; },
            [&](const Coordinate& c) {
                if (c.index >= p.size())
                    throw Error(ErrorKind::InvalidArgument,
                                "coordinate x" + std::to_string(c.index + 1) + " not available in dimension " +
                                    std::to_string(p.size()));
                return p[c.index];
            },
            [&](const Negation& u) { return -eval_scalar(u.arg, p); },
            [&](const Binary& b) {
                const double l = eval_scalar(b.lhs, p);
                const double r = eval_scalar(b.rhs, p);
                switch (b.op) {
                case BinaryOp::Add: return l + r;
                case BinaryOp::Subtract: return l - r;
                case BinaryOp::Multiply: return l * r;
                case BinaryOp::Divide:
                    if (r == 0.0) throw Error(ErrorKind::SingularEvaluation, "division by zero");
                    return l / r;
                }
                return 0.0;
            },
            [&](const Power& pw) {
                const double base = eval_scalar(pw.base, p);
                const bool integral = std::trunc(pw.exponent) == pw.exponent;
                if (integral) {
                    if (base == 0.0 && pw.exponent < 0)
                        throw Error(ErrorKind::SingularEvaluation, "negative power of zero");
                } else if (!(base > 0.0)) {
                    throw DomainError("non-integral power of nonpositive value " + format_number(base), base);
                }
                return std::pow(base, pw.exponent);
            },
            [&](const Function& f) {
                const double a = eval_scalar(f.arg, p);
                switch (f.fn) {
                case Elementary::Exp: return std::exp(a);
                case Elementary::Log:
                    if (!(a > 0.0)) throw DomainError("log of nonpositive value " + format_number(a), a);
                    return std::log(a);
                case Elementary::Sin: return std::sin(a);
                case Elementary::Cos: return std::cos(a);
                case Elementary::Sqrt:
                    if (!(a >= 0.0)) throw DomainError("sqrt of negative value " + format_number(a), a);
                    return std::sqrt(a);
                }
                return 0.0;
            },
        },
        static_cast<const Node::variant&>(n));
}

Jet eval_jet(const Node& n, std::span<const Jet> jets);

Jet eval_jet(const NodePtr& n, std::span<const Jet> jets) { return eval_jet(*n, jets); }

Jet eval_jet(const Node& n, std::span<const Jet> jets)
{
    const Jet& ref = jets.front();
    return std::visit(
        overloaded{
            [&](const Constant& c) { return Jet::constant(c.value, ref.dim(), ref.order()); },
            [&](const Coordinate& c) {
                if (c.index >= jets.size())
                    throw Error(ErrorKind::InvalidArgument,
                                "coordinate x" + std::to_string(c.index + 1) + " not available in dimension " +
                                    std::to_string(jets.size()));
                return jets[c.index];
            },
            [&](const Negation& u) { return -eval_jet(u.arg, jets); },
            [&](const Binary& b) {
                // constant operands stay scalars so they do not cost a jet product
                const Node& lhs = *b.lhs;
                const Node& rhs = *b.rhs;
                if (const auto* c = std::get_if<Constant>(&rhs)) {
                    Jet l = eval_jet(lhs, jets);
                    switch (b.op) {
                    case BinaryOp::Add: return l + c->value;
                    case BinaryOp::Subtract: return l - c->value;
                    case BinaryOp::Multiply: return l * c->value;
                    case BinaryOp::Divide: return l / c->value;
                    }
                }
                if (const auto* c = std::get_if<Constant>(&lhs)) {
                    Jet r = eval_jet(rhs, jets);
                    switch (b.op) {
                    case BinaryOp::Add: return c->value + r;
                    case BinaryOp::Subtract: return c->value - r;
                    case BinaryOp::Multiply: return c->value * r;
                    case BinaryOp::Divide: return c->value / r;
                    }
                }
                Jet l = eval_jet(lhs, jets);
                Jet r = eval_jet(rhs, jets);
                switch (b.op) {
                case BinaryOp::Add: return l + r;
                case BinaryOp::Subtract: return l - r;
                case BinaryOp::Multiply: return l * r;
                case BinaryOp::Divide: return l / r;
                }
                return l;
            },
            [&](const Power& pw) { return pow(eval_jet(pw.base, jets), pw.exponent); },
            [&](const Function& f) { return jet_elementary(f.fn, eval_jet(f.arg, jets)); },
        },
        static_cast<const Node::variant&>(n));
}

bool nodes_equal(const Node& a, const Node& b);

bool nodes_equal(const NodePtr& a, const NodePtr& b) { return a == b || nodes_equal(*a, *b); }

bool nodes_equal(const Node& a, const Node& b)
{
    if (a.index() != b.index()) return false;
    return std::visit(
        overloaded{
            [&](const Constant& c) { return c.value == std::get<Constant>(b).value; },
            [&](const Coordinate& c) { return c.index == std::get<Coordinate>(b).index; },
            [&](const Negation& u) { return nodes_equal(u.arg, std::get<Negation>(b).arg); },
            [&](const Binary& x) {
                const auto& y = std::get<Binary>(b);
                return x.op == y.op && nodes_equal(x.lhs, y.lhs) && nodes_equal(x.rhs, y.rhs);
            },
            [&](const Power& x) {
                const auto& y = std::get<Power>(b);
                return x.exponent == y.exponent && nodes_equal(x.base, y.base);
            },
            [&](const Function& x) {
                const auto& y = std::get<Function>(b);
                return x.fn == y.fn && nodes_equal(x.arg, y.arg);
            },
        },
        static_cast<const Node::variant&>(a));
}

std::size_t node_arity(const Node& n)
{
    return std::visit(overloaded{
                          [](const Constant&) -> std::size_t { return 0; },
                          [](const Coordinate& c) -> std::size_t { return c.index + 1; },
                          [](const Negation& u) { return node_arity(*u.arg); },
                          [](const Binary& b) { return std::max(node_arity(*b.lhs), node_arity(*b.rhs)); },
                          [](const Power& p) { return node_arity(*p.base); },
                          [](const Function& f) { return node_arity(*f.arg); },
                      },
                      static_cast<const Node::variant&>(n));
}

bool node_has_coordinates(const Node& n)
{
    return std::visit(overloaded{
                          [](const Constant&) { return false; },
                          [](const Coordinate&) { return true; },
                          [](const Negation& u) { return node_has_coordinates(*u.arg); },
                          [](const Binary& b) { return node_has_coordinates(*b.lhs) || node_has_coordinates(*b.rhs); },
                          [](const Power& p) { return node_has_coordinates(*p.base); },
                          [](const Function& f) { return node_has_coordinates(*f.arg); },
                      },
                      static_cast<const Node::variant&>(n));
}

void print(const Node& n, std::string& out)
{
    std::visit(overloaded{
                   [&](const Constant& c) {
                       if (c.value < 0 || std::signbit(c.value))
                           out += "(" + format_number(c.value) + ")";
                       else
                           out += format_number(c.value);
                   },
                   [&](const Coordinate& c) { out += "x" + std::to_string(c.index + 1); },
                   [&](const Negation& u) {
                       out += "(-(";
                       print(*u.arg, out);
                       out += "))";
                   },
                   [&](const Binary& b) {
                       static constexpr char ops[] = {'+', '-', '*', '/'};
                       out += '(';
                       print(*b.lhs, out);
                       out += ops[static_cast<int>(b.op)];
                       print(*b.rhs, out);
                       out += ')';
                   },
                   [&](const Power& p) {
                       out += '(';
                       print(*p.base, out);
                       out += '^';
                       print(Node{Constant{p.exponent}}, out);
                       out += ')';
                   },
                   [&](const Function& f) {
                       out += to_string(f.fn);
                       out += '(';
                       print(*f.arg, out);
                       out += ')';
                   },
               },
               static_cast<const Node::variant&>(n));
}

}  // namespace

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

Expr::Expr(double value) : node_(std::make_shared<const Node>(Constant{value})) {}

Expr Expr::make(Node node) { return Expr(std::make_shared<const Node>(std::move(node))); }

Expr Expr::coordinate(std::size_t index) { return make(Coordinate{index}); }

bool Expr::is_constant() const noexcept { return !node_has_coordinates(*node_); }

double Expr::constant_value() const
{
    if (!is_constant()) throw Error(ErrorKind::InvalidArgument, "expression depends on coordinates");
    return eval_scalar(*node_, {});
}

std::size_t Expr::arity() const { return node_arity(*node_); }

double Expr::evaluate(std::span<const double> point) const
{
    try {
        return eval_scalar(*node_, point);
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " at point " + point_text(point), e.value());
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularEvaluation) throw;
        throw Error(e.kind(), std::string(e.what()) + " at point " + point_text(point));
    }
}

Jet Expr::evaluate(std::span<const Jet> jets) const
{
    if (jets.empty()) throw Error(ErrorKind::InvalidArgument, "expression evaluation needs at least one jet");
    try {
        return eval_jet(*node_, jets);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularEvaluation && e.kind() != ErrorKind::Domain) throw;
        std::vector<double> p;
        for (const Jet& j : jets) p.push_back(j.value());
        if (const auto* d = dynamic_cast<const DomainError*>(&e))
            throw DomainError(std::string(e.what()) + " at point " + point_text(p), d->value());
        throw Error(e.kind(), std::string(e.what()) + " at point " + point_text(p));
    }
}

std::string Expr::to_string() const
{
    std::string out;
    print(*node_, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) { return nodes_equal(a.node_, b.node_); }

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Binary{BinaryOp::Add, a.node_, b.node_}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Binary{BinaryOp::Subtract, a.node_, b.node_}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Binary{BinaryOp::Multiply, a.node_, b.node_}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Binary{BinaryOp::Divide, a.node_, b.node_}); }
Expr operator-(const Expr& a) { return Expr::make(Negation{a.node_}); }
Expr pow(const Expr& base, double exponent) { return Expr::make(Power{base.node_, exponent}); }
Expr apply(Elementary fn, const Expr& arg) { return Expr::make(Function{fn, arg.node_}); }

Jet eval_expression(const Expr& e, std::span<const Jet> jets)
{
    for (const Jet& j : jets)
        if (j.dim() != jets.front().dim() || j.order() != jets.front().order())
            throw Error(ErrorKind::InvalidArgument, "expression jets must share dimension and order");
    return e.evaluate(jets);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse()
    {
        Expr e = sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorKind::Parse, what + " at column " + std::to_string(pos_ + 1) + " in \"" +
                                          std::string(text_) + "\"");
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool at_number()
    {
        skip_space();
        return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    }

    double number()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        const std::string token(text_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (token.empty() || end != token.c_str() + token.size()) {
            pos_ = start;
            fail("malformed number '" + token + "'");
        }
        return v;
    }

    Expr sum()
    {
        Expr e = product();
        for (;;) {
            if (accept('+'))
                e = e + product();
            else if (accept('-'))
                e = e - product();
            else
                return e;
        }
    }

    Expr product()
    {
        Expr e = unary();
        for (;;) {
            if (accept('*'))
                e = e * unary();
            else if (accept('/'))
                e = e / unary();
            else
                return e;
        }
    }

    Expr unary()
    {
        if (accept('-')) {
            // "-<literal>" is a negative constant unless the literal is a power base
            const std::size_t save = pos_;
            if (at_number()) {
                const double v = number();
                skip_space();
                if (pos_ >= text_.size() || text_[pos_] != '^') return Expr(-v);
                pos_ = save;
            }
            return -unary();
        }
        if (accept('+')) return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (!accept('^')) return base;
        Expr exponent = unary();
        if (exponent.is_constant()) return pow(base, exponent.constant_value());
        return exp(exponent * log(base));
    }

    Expr primary()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        if (accept('(')) {
            Expr e = sum();
            expect(')');
            return e;
        }
        if (at_number()) return Expr(number());
        if (std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view id = text_.substr(start, pos_ - start);
            if (id.size() > 1 && id[0] == 'x') {
                std::size_t index = 0;
                const auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), index);
                if (ec == std::errc{} && ptr == id.data() + id.size() && index >= 1) return Expr::coordinate(index - 1);
            }
            for (Elementary fn : {Elementary::Exp, Elementary::Log, Elementary::Sin, Elementary::Cos, Elementary::Sqrt}) {
                if (id == to_string(fn)) {
                    expect('(');
                    Expr arg = sum();
                    expect(')');
                    return apply(fn, arg);
                }
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(id) + "'");
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
};

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace fbiharm
