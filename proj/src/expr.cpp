#include "pball/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace pball {

namespace {

const std::map<std::string_view, Func, std::less<>> kFunctions = {
    {"sin", Func::Sin}, {"cos", Func::Cos},   {"exp", Func::Exp}, {"log", Func::Log},
    {"sqrt", Func::Sqrt}, {"abs", Func::Abs}, {"pow", Func::Pow},
};

std::string_view func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
        case Func::Pow: return "pow";
    }
    return "?";
}

std::size_t func_argc(Func f) { return f == Func::Pow ? 2 : 1; }

// ---------------------------------------------------------------------------
// tokenizer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            current_ = {Tok::End, start, ""};
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '+': current_ = {Tok::Plus, start, text_.substr(start, 1)}; ++pos_; return;
            case '-': current_ = {Tok::Minus, start, text_.substr(start, 1)}; ++pos_; return;
            case '*': current_ = {Tok::Star, start, text_.substr(start, 1)}; ++pos_; return;
            case '/': current_ = {Tok::Slash, start, text_.substr(start, 1)}; ++pos_; return;
            case '^': current_ = {Tok::Caret, start, text_.substr(start, 1)}; ++pos_; return;
            case '(': current_ = {Tok::LParen, start, text_.substr(start, 1)}; ++pos_; return;
            case ')': current_ = {Tok::RParen, start, text_.substr(start, 1)}; ++pos_; return;
            case ',': current_ = {Tok::Comma, start, text_.substr(start, 1)}; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr == begin) {
                throw ParseError(start, "malformed numeric literal");
            }
            const std::size_t len = static_cast<std::size_t>(ptr - begin);
            current_ = {Tok::Number, start, text_.substr(start, len), value};
            pos_ += len;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
                ++end;
            }
            current_ = {Tok::Ident, start, text_.substr(start, end - start)};
            pos_ = end;
            return;
        }
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_{Tok::End, 0, ""};
};

// ---------------------------------------------------------------------------
// recursive-descent parser

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        const Token& t = lexer_.peek();
        if (t.kind != Tok::End) {
            throw ParseError(t.offset, "expected end of input, operator, or ')'");
        }
        return e;
    }

private:
    static constexpr int kMaxDepth = 256;

    static ExprPtr make(Expr&& e) { return std::make_shared<const Expr>(std::move(e)); }

    struct DepthGuard {
        explicit DepthGuard(Parser& parser) : parser_(parser) {
            if (++parser_.depth_ > kMaxDepth) {
                throw ParseError(parser_.lexer_.peek().offset, "expression nested too deeply");
            }
        }
        ~DepthGuard() { --parser_.depth_; }
        Parser& parser_;
    };

    ExprPtr parse_sum() {
        const DepthGuard guard(*this);
        ExprPtr lhs = parse_term();
        for (;;) {
            const Tok k = lexer_.peek().kind;
            if (k != Tok::Plus && k != Tok::Minus) return lhs;
            const char op = lexer_.take().kind == Tok::Plus ? '+' : '-';
            ExprPtr rhs = parse_term();
            lhs = make(Expr{BinaryNode{op, std::move(lhs), std::move(rhs)}});
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            const Tok k = lexer_.peek().kind;
            if (k != Tok::Star && k != Tok::Slash) return lhs;
            const char op = lexer_.take().kind == Tok::Star ? '*' : '/';
            ExprPtr rhs = parse_unary();
            lhs = make(Expr{BinaryNode{op, std::move(lhs), std::move(rhs)}});
        }
    }

    ExprPtr parse_unary() {
        const DepthGuard guard(*this);
        if (lexer_.peek().kind == Tok::Minus) {
            lexer_.take();
            return make(Expr{UnaryNode{parse_unary()}});
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (lexer_.peek().kind == Tok::Caret) {
            lexer_.take();
            ExprPtr expo = parse_unary();  // right associative, allows x1^-2
            return make(Expr{BinaryNode{'^', std::move(base), std::move(expo)}});
        }
        return base;
    }

    ExprPtr parse_atom() {
        const Token t = lexer_.take();
        switch (t.kind) {
            case Tok::Number: return make(Expr{NumberNode{t.number}});
            case Tok::LParen: {
                ExprPtr inner = parse_sum();
                expect(Tok::RParen, "expected ')'");
                return inner;
            }
            case Tok::Ident: return parse_ident(t);
            case Tok::End: throw ParseError(t.offset, "unexpected end of input, expected expression");
            default:
                throw ParseError(t.offset, "expected a number, variable, function call, or '('");
        }
    }

    ExprPtr parse_ident(const Token& t) {
        if (auto it = kFunctions.find(t.text); it != kFunctions.end()) {
            expect(Tok::LParen, "expected '(' after function name");
            std::vector<ExprPtr> args;
            args.push_back(parse_sum());
            while (lexer_.peek().kind == Tok::Comma) {
                lexer_.take();
                args.push_back(parse_sum());
            }
            expect(Tok::RParen, "expected ')' or ','");
            if (args.size() != func_argc(it->second)) {
                throw ParseError(t.offset, std::string(t.text) + " takes " +
                                               std::to_string(func_argc(it->second)) +
                                               " argument(s), got " + std::to_string(args.size()));
            }
            return make(Expr{CallNode{it->second, std::move(args)}});
        }
        // variable: x<k>, t<k> or y<k> with k >= 1
        const char head = t.text[0];
        if ((head == 'x' || head == 't' || head == 'y') && t.text.size() > 1) {
            int index = 0;
            const char* begin = t.text.data() + 1;
            const char* end = t.text.data() + t.text.size();
            auto [ptr, ec] = std::from_chars(begin, end, index);
            if (ec == std::errc{} && ptr == end && index >= 1) {
                const VarKind kind =
                    head == 'x' ? VarKind::X : (head == 't' ? VarKind::T : VarKind::Y);
                return make(Expr{VariableNode{kind, index}});
            }
        }
        throw ParseError(t.offset, "unknown identifier '" + std::string(t.text) +
                                       "' (variables are x1.., t1.., y1..)");
    }

    void expect(Tok kind, const char* message) {
        const Token& t = lexer_.peek();
        if (t.kind != kind) throw ParseError(t.offset, message);
        lexer_.take();
    }

    Lexer lexer_;
    int depth_ = 0;
};

// ---------------------------------------------------------------------------
// printing

int node_precedence(const Expr& e) {
    struct V {
        int operator()(const NumberNode&) const { return 5; }
        int operator()(const VariableNode&) const { return 5; }
        int operator()(const CallNode&) const { return 5; }
        int operator()(const UnaryNode&) const { return 3; }
        int operator()(const BinaryNode& b) const {
            switch (b.op) {
                case '+':
                case '-': return 1;
                case '*':
                case '/': return 2;
                default: return 4;  // '^'
            }
        }
    };
    return std::visit(V{}, e.node);
}

std::string print_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
    if (node_precedence(child) < min_prec) {
        out += '(';
        print_into(child, out);
        out += ')';
    } else {
        print_into(child, out);
    }
}

void print_into(const Expr& e, std::string& out) {
    struct V {
        std::string& out;
        void operator()(const NumberNode& n) const { out += print_number(n.value); }
        void operator()(const VariableNode& v) const {
            out += (v.kind == VarKind::X ? 'x' : (v.kind == VarKind::T ? 't' : 'y'));
            out += std::to_string(v.index);
        }
        void operator()(const UnaryNode& u) const {
            out += '-';
            print_child(*u.operand, 3, out);
        }
        void operator()(const BinaryNode& b) const {
            const int prec = b.op == '+' || b.op == '-' ? 1 : (b.op == '*' || b.op == '/' ? 2 : 4);
            if (b.op == '^') {
                // right associative, and the base must be atomic
                print_child(*b.lhs, 5, out);
                out += '^';
                print_child(*b.rhs, 3, out);
            } else {
                print_child(*b.lhs, prec, out);
                out += b.op;
                print_child(*b.rhs, prec + 1, out);
            }
        }
        void operator()(const CallNode& c) const {
            out += func_name(c.func);
            out += '(';
            for (std::size_t i = 0; i < c.args.size(); ++i) {
                if (i) out += ',';
                print_into(*c.args[i], out);
            }
            out += ')';
        }
    };
    std::visit(V{out}, e.node);
}

// evaluation helpers --------------------------------------------------------

[[noreturn]] void eval_fail(const Expr& e, const std::string& reason) {
    throw EvalError(reason + " in '" + print_expression(e) + "'");
}

double checked_pow(const Expr& site, double base, double expo) {
    if (base == 0.0 && expo < 0.0) eval_fail(site, "zero raised to a negative power");
    if (base < 0.0) {
        if (std::rint(expo) != expo || std::fabs(expo) > 9.0e15) {
            eval_fail(site, "fractional power of a negative base");
        }
    }
    return std::pow(base, expo);
}

double lookup(const Expr& site, std::span<const double> values, const VariableNode& v) {
    if (v.index > static_cast<int>(values.size())) {
        eval_fail(site, "unbound variable");
    }
    return values[static_cast<std::size_t>(v.index - 1)];
}

}  // namespace

ParseError::ParseError(std::size_t offset, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    struct V {
        const Expr& b;
        bool operator()(const NumberNode& n) const {
            return n.value == std::get<NumberNode>(b.node).value;
        }
        bool operator()(const VariableNode& v) const {
            const auto& o = std::get<VariableNode>(b.node);
            return v.kind == o.kind && v.index == o.index;
        }
        bool operator()(const UnaryNode& u) const {
            return *u.operand == *std::get<UnaryNode>(b.node).operand;
        }
        bool operator()(const BinaryNode& n) const {
            const auto& o = std::get<BinaryNode>(b.node);
            return n.op == o.op && *n.lhs == *o.lhs && *n.rhs == *o.rhs;
        }
        bool operator()(const CallNode& c) const {
            const auto& o = std::get<CallNode>(b.node);
            if (c.func != o.func || c.args.size() != o.args.size()) return false;
            for (std::size_t i = 0; i < c.args.size(); ++i) {
                if (!(*c.args[i] == *o.args[i])) return false;
            }
            return true;
        }
    };
    return std::visit(V{b}, a.node);
}

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string print_expression(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

double eval(const Expr& e, const EvalEnv& env) {
    struct V {
        const Expr& e;
        const EvalEnv& env;
        double operator()(const NumberNode& n) const { return n.value; }
        double operator()(const VariableNode& v) const {
            switch (v.kind) {
                case VarKind::X: return lookup(e, env.x, v);
                case VarKind::T: return lookup(e, env.t, v);
                default: return lookup(e, env.y, v);
            }
        }
        double operator()(const UnaryNode& u) const { return -eval(*u.operand, env); }
        double operator()(const BinaryNode& b) const {
            const double l = eval(*b.lhs, env);
            const double r = eval(*b.rhs, env);
            switch (b.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/':
                    if (r == 0.0) eval_fail(e, "division by zero");
                    return l / r;
                default: return checked_pow(e, l, r);
            }
        }
        double operator()(const CallNode& c) const {
            const double a0 = eval(*c.args[0], env);
            switch (c.func) {
                case Func::Sin: return std::sin(a0);
                case Func::Cos: return std::cos(a0);
                case Func::Exp: return std::exp(a0);
                case Func::Log:
                    if (a0 <= 0.0) eval_fail(e, "log of a nonpositive value");
                    return std::log(a0);
                case Func::Sqrt:
                    if (a0 < 0.0) eval_fail(e, "sqrt of a negative value");
                    return std::sqrt(a0);
                case Func::Abs: return std::fabs(a0);
                case Func::Pow: return checked_pow(e, a0, eval(*c.args[1], env));
            }
            eval_fail(e, "unknown function");
        }
    };
    return std::visit(V{e, env}, e.node);
}

ExprInfo arity_check(const Expr& e) {
    struct Walk {
        int max_x = 0, max_t = 0, max_y = 0;
        void visit(const Expr& e) {
            struct V {
                Walk& w;
                void operator()(const NumberNode&) const {}
                void operator()(const VariableNode& v) const {
                    switch (v.kind) {
                        case VarKind::X: w.max_x = std::max(w.max_x, v.index); break;
                        case VarKind::T: w.max_t = std::max(w.max_t, v.index); break;
                        case VarKind::Y: w.max_y = std::max(w.max_y, v.index); break;
                    }
                }
                void operator()(const UnaryNode& u) const { w.visit(*u.operand); }
                void operator()(const BinaryNode& b) const {
                    w.visit(*b.lhs);
                    w.visit(*b.rhs);
                }
                void operator()(const CallNode& c) const {
                    for (const auto& a : c.args) w.visit(*a);
                }
            };
            std::visit(V{*this}, e.node);
        }
    };
    Walk w;
    w.visit(e);
    if (w.max_y > 0 && (w.max_x > 0 || w.max_t > 0)) {
        throw std::invalid_argument(
            "y-variables cannot be mixed with x/t variables; h-expressions and g-expressions "
            "are distinct roles");
    }
    if (w.max_y > 0) return {w.max_y, false, true};
    return {std::max(w.max_x, w.max_t), w.max_t > 0, false};
}

FunctionalSpec FunctionalSpec::parse(std::string_view text) {
    return parse(text, std::vector<Interval>{});
}

FunctionalSpec FunctionalSpec::parse(std::string_view text, std::vector<Interval> intervals) {
    FunctionalSpec spec;
    spec.expr_ = parse_expression(text);
    spec.source_ = std::string(text);
    const ExprInfo info = arity_check(*spec.expr_);
    if (info.is_h) {
        throw std::invalid_argument("integrand must be over x/t variables, not y-variables");
    }
    spec.arity_ = std::max(1, info.arity);
    spec.uses_t_ = info.uses_t;
    if (intervals.empty()) {
        intervals.assign(static_cast<std::size_t>(spec.arity_), Interval{});
    }
    if (static_cast<int>(intervals.size()) != spec.arity_) {
        throw std::invalid_argument("expected " + std::to_string(spec.arity_) +
                                    " integration interval(s), got " +
                                    std::to_string(intervals.size()));
    }
    for (const Interval& iv : intervals) {
        if (!(iv.lo >= 0.0 && iv.lo <= iv.hi && iv.hi <= 1.0)) {
            throw std::invalid_argument("integration intervals must satisfy 0 <= lo <= hi <= 1");
        }
    }
    spec.intervals_ = std::move(intervals);
    return spec;
}

bool FunctionalSpec::full_intervals() const {
    return std::all_of(intervals_.begin(), intervals_.end(),
                       [](const Interval& iv) { return iv.lo == 0.0 && iv.hi == 1.0; });
}

}  // namespace pball
