// Small expression language for integrands g(x1..xm [, t1..tm]) and outer
// functions h(y1..ym).
//
// Grammar (also documented in the README):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?            -- right associative
//   atom   := NUMBER | VARIABLE | FUNC '(' expr (',' expr)* ')' | '(' expr ')'
//   VARIABLE := ('x' | 't' | 'y') index    -- index >= 1
//   FUNC   := sin | cos | exp | log | sqrt | abs | pow
//
// '^' binds tighter than unary minus, so -x1^2 is -(x1^2).

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pball {

enum class VarKind { X, T, Y };
enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NumberNode {
    double value;
};
struct VariableNode {
    VarKind kind;
    int index;  // 1-based
};
struct UnaryNode {  // unary minus
    ExprPtr operand;
};
struct BinaryNode {
    char op;  // one of + - * / ^
    ExprPtr lhs, rhs;
};
struct CallNode {
    Func func;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<NumberNode, VariableNode, UnaryNode, BinaryNode, CallNode> node;
};

bool operator==(const Expr& a, const Expr& b);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& message) : std::runtime_error(message) {}
};

ExprPtr parse_expression(std::string_view text);

// Canonical form with minimal parentheses; parse(print(e)) == e structurally
// and printing is idempotent.
std::string print_expression(const Expr& e);

// Variable bindings; x[i-1] is the value of xi, and likewise for t and y.
struct EvalEnv {
    std::span<const double> x{};
    std::span<const double> t{};
    std::span<const double> y{};
};

double eval(const Expr& e, const EvalEnv& env);

struct ExprInfo {
    int arity;    // highest variable index used (y-index for h-expressions)
    bool uses_t;  // any t-variable occurs
    bool is_h;    // expression is over y-variables
};

// Throws std::invalid_argument when y-variables are mixed with x/t ones:
// h-expressions and g-expressions are distinct roles.
ExprInfo arity_check(const Expr& e);

// Closed subinterval of [0,1].
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
};

// A parsed integrand together with its arity and integration intervals.
// Constant integrands are lifted to arity 1 so the functional is always an
// integral over at least one axis.
class FunctionalSpec {
public:
    static FunctionalSpec parse(std::string_view text);
    static FunctionalSpec parse(std::string_view text, std::vector<Interval> intervals);

    const Expr& integrand() const { return *expr_; }
    const ExprPtr& integrand_ptr() const { return expr_; }
    int arity() const { return arity_; }
    bool uses_t() const { return uses_t_; }
    std::span<const Interval> intervals() const { return intervals_; }
    bool full_intervals() const;  // every interval equals [0,1]
    const std::string& source() const { return source_; }

private:
    FunctionalSpec() = default;

    ExprPtr expr_;
    std::string source_;
    int arity_ = 1;
    bool uses_t_ = false;
    std::vector<Interval> intervals_;
};

}  // namespace pball
