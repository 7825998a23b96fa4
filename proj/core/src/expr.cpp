#include "finsler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <set>

namespace finsler {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Kind = Expression::Kind;

// ---------------------------------------------------------------- builders

namespace {

NodePtr make_node(Node node) { return std::make_shared<const Node>(std::move(node)); }

NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    Node n;
    n.kind = Kind::binary;
    n.binary = op;
    n.span = {lhs->span.start, std::max(lhs->span.end, rhs->span.end)};
    n.source = lhs->source ? lhs->source : rhs->source;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    return make_node(std::move(n));
}

}  // namespace

Expression Expression::constant(double v, int dimension) {
    Node n;
    n.kind = Kind::constant;
    n.value = v;
    return Expression(make_node(std::move(n)), dimension);
}

Expression Expression::x(int index, int dimension) {
    Node n;
    n.kind = Kind::x_var;
    n.index = index;
    return Expression(make_node(std::move(n)), dimension);
}

Expression Expression::y(int index, int dimension) {
    Node n;
    n.kind = Kind::y_var;
    n.index = index;
    return Expression(make_node(std::move(n)), dimension);
}

Expression Expression::parameter(std::string name, int dimension) {
    Node n;
    n.kind = Kind::param;
    n.name = std::move(name);
    return Expression(make_node(std::move(n)), dimension);
}

Expression Expression::apply(UnaryOp op) const {
    Node n;
    n.kind = Kind::unary;
    n.unary = op;
    n.span = root_->span;
    n.source = root_->source;
    n.lhs = root_;
    return Expression(make_node(std::move(n)), dimension_);
}

Expression Expression::raised(double exponent) const {
    Node n;
    n.kind = Kind::power;
    n.value = exponent;
    n.span = root_->span;
    n.source = root_->source;
    n.lhs = root_;
    return Expression(make_node(std::move(n)), dimension_);
}

Expression operator+(const Expression& a, const Expression& b) {
    return Expression(make_binary(BinaryOp::add, a.root_, b.root_), std::max(a.dimension_, b.dimension_));
}
Expression operator-(const Expression& a, const Expression& b) {
    return Expression(make_binary(BinaryOp::sub, a.root_, b.root_), std::max(a.dimension_, b.dimension_));
}
Expression operator*(const Expression& a, const Expression& b) {
    return Expression(make_binary(BinaryOp::mul, a.root_, b.root_), std::max(a.dimension_, b.dimension_));
}
Expression operator/(const Expression& a, const Expression& b) {
    return Expression(make_binary(BinaryOp::div, a.root_, b.root_), std::max(a.dimension_, b.dimension_));
}

// ------------------------------------------------------------ tree queries

namespace {

NodePtr bind_node(const NodePtr& node, const std::map<std::string, double>& values) {
    switch (node->kind) {
    case Kind::param: {
        auto it = values.find(node->name);
        if (it == values.end()) return node;
        Node n = *node;
        n.kind = Kind::constant;
        n.value = it->second;
        n.name.clear();
        return make_node(std::move(n));
    }
    case Kind::unary:
    case Kind::power: {
        auto child = bind_node(node->lhs, values);
        if (child == node->lhs) return node;
        Node n = *node;
        n.lhs = std::move(child);
        return make_node(std::move(n));
    }
    case Kind::binary: {
        auto l = bind_node(node->lhs, values);
        auto r = bind_node(node->rhs, values);
        if (l == node->lhs && r == node->rhs) return node;
        Node n = *node;
        n.lhs = std::move(l);
        n.rhs = std::move(r);
        return make_node(std::move(n));
    }
    default: return node;
    }
}

template <class Fn>
void visit(const Node& node, Fn&& fn) {
    fn(node);
    if (node.lhs) visit(*node.lhs, fn);
    if (node.rhs) visit(*node.rhs, fn);
}

bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Kind::constant: return a.value == b.value;
    case Kind::x_var:
    case Kind::y_var: return a.index == b.index;
    case Kind::param: return a.name == b.name;
    case Kind::unary: return a.unary == b.unary && equal_nodes(*a.lhs, *b.lhs);
    case Kind::power: return a.value == b.value && equal_nodes(*a.lhs, *b.lhs);
    case Kind::binary:
        return a.binary == b.binary && equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    }
    return false;
}

// ---------------------------------------------------------------- printer

constexpr int kPrecAdd = 1, kPrecMul = 2, kPrecNeg = 3, kPrecPow = 4, kPrecAtom = 5;

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int digits = 1; digits < 17; ++digits) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", digits, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

int precedence(const Node& n) {
    switch (n.kind) {
    case Kind::constant: return n.value < 0.0 || std::signbit(n.value) ? kPrecNeg : kPrecAtom;
    case Kind::binary:
        return (n.binary == BinaryOp::add || n.binary == BinaryOp::sub) ? kPrecAdd : kPrecMul;
    case Kind::unary: return n.unary == UnaryOp::neg ? kPrecNeg : kPrecAtom;
    case Kind::power: return kPrecPow;
    default: return kPrecAtom;
    }
}

const char* unary_name(UnaryOp op) {
    switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::abs: return "abs";
    }
    return "?";
}

void print(const Node& n, std::string& out);

void print_at_least(const Node& n, int min_prec, std::string& out) {
    if (precedence(n) < min_prec) {
        out += '(';
        print(n, out);
        out += ')';
    } else {
        print(n, out);
    }
}

void print(const Node& n, std::string& out) {
    switch (n.kind) {
    case Kind::constant: out += format_number(n.value); break;
    case Kind::x_var: out += "x" + std::to_string(n.index + 1); break;
    case Kind::y_var: out += "y" + std::to_string(n.index + 1); break;
    case Kind::param: out += n.name; break;
    case Kind::unary:
        if (n.unary == UnaryOp::neg) {
            out += '-';
            // A bare numeric literal after '-' would fold into a negative constant.
            const bool literal = n.lhs->kind == Kind::constant;
            print_at_least(*n.lhs, literal ? kPrecAtom + 1 : kPrecNeg, out);
        } else {
            out += unary_name(n.unary);
            out += '(';
            print(*n.lhs, out);
            out += ')';
        }
        break;
    case Kind::power:
        print_at_least(*n.lhs, kPrecAtom, out);
        out += '^';
        out += format_number(n.value);
        break;
    case Kind::binary: {
        const int p = precedence(n);
        static const char ops[] = {'+', '-', '*', '/'};
        print_at_least(*n.lhs, p, out);
        out += ops[static_cast<int>(n.binary)];
        print_at_least(*n.rhs, p + 1, out);
        break;
    }
    }
}

}  // namespace

Expression Expression::bind(const std::map<std::string, double>& values) const {
    return Expression(bind_node(root_, values), dimension_);
}

std::vector<std::string> Expression::parameters() const {
    std::set<std::string> names;
    visit(*root_, [&](const Node& n) {
        if (n.kind == Kind::param) names.insert(n.name);
    });
    return {names.begin(), names.end()};
}

bool Expression::depends_on_x() const {
    bool found = false;
    visit(*root_, [&](const Node& n) { found = found || n.kind == Kind::x_var; });
    return found;
}

bool Expression::contains_abs() const {
    bool found = false;
    visit(*root_, [&](const Node& n) { found = found || (n.kind == Kind::unary && n.unary == UnaryOp::abs); });
    return found;
}

bool Expression::structurally_equal(const Expression& other) const {
    return equal_nodes(*root_, *other.root_);
}

std::string Expression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

// ----------------------------------------------------------------- parser

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    SourceSpan span;
    double number = 0.0;
    std::string text;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.')) ++i;
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    i = j;
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                }
            }
            Token t{Tok::number, {start, i}};
            const std::string text(src.substr(start, i - start));
            char* end = nullptr;
            t.number = std::strtod(text.c_str(), &end);
            if (end != text.c_str() + text.size())
                throw ParseError("malformed number '" + text + "'", t.span);
            tokens.push_back(t);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            Token t{Tok::ident, {start, i}};
            t.text = std::string(src.substr(start, i - start));
            tokens.push_back(t);
            continue;
        }
        Tok kind;
        switch (c) {
        case '+': kind = Tok::plus; break;
        case '-': kind = Tok::minus; break;
        case '*': kind = Tok::star; break;
        case '/': kind = Tok::slash; break;
        case '^': kind = Tok::caret; break;
        case '(': kind = Tok::lparen; break;
        case ')': kind = Tok::rparen; break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", {start, start + 1});
        }
        ++i;
        tokens.push_back({kind, {start, i}});
    }
    tokens.push_back({Tok::end, {src.size(), src.size()}});
    return tokens;
}

class Parser {
public:
    Parser(std::string_view src, int dimension, const std::vector<std::string>& parameters)
        : source_(std::make_shared<const std::string>(src)),
          tokens_(lex(src)),
          dimension_(dimension),
          parameters_(parameters) {}

    NodePtr parse_all() {
        NodePtr e = expr();
        if (peek().kind != Tok::end) fail_here("unexpected token");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    [[noreturn]] void fail_here(const std::string& what) {
        const Token& t = peek();
        if (t.kind == Tok::end) {
            // Point at the token left dangling before the end of input.
            const SourceSpan span = pos_ > 0 ? tokens_[pos_ - 1].span : t.span;
            throw ParseError(what + ": unexpected end of input", span);
        }
        throw ParseError(what + " '" + std::string(source_->substr(t.span.start, t.span.end - t.span.start)) + "'",
                         t.span);
    }

    NodePtr leaf(Node n, SourceSpan span) {
        n.span = span;
        n.source = source_;
        return make_node(std::move(n));
    }

    NodePtr binary(BinaryOp op, NodePtr l, NodePtr r) {
        Node n;
        n.kind = Kind::binary;
        n.binary = op;
        n.lhs = std::move(l);
        n.rhs = std::move(r);
        return leaf(std::move(n), {n.lhs->span.start, n.rhs->span.end});
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const BinaryOp op = advance().kind == Tok::plus ? BinaryOp::add : BinaryOp::sub;
            lhs = binary(op, lhs, term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const BinaryOp op = advance().kind == Tok::star ? BinaryOp::mul : BinaryOp::div;
            lhs = binary(op, lhs, unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (peek().kind == Tok::minus) {
            const SourceSpan op = advance().span;
            NodePtr operand = unary();
            Node n;
            if (operand->kind == Kind::constant && operand->span.start == op.end) {
                // "-2" is a negative literal, not a negation node.
                n.kind = Kind::constant;
                n.value = -operand->value;
            } else {
                n.kind = Kind::unary;
                n.unary = UnaryOp::neg;
                n.lhs = operand;
            }
            return leaf(std::move(n), {op.start, operand->span.end});
        }
        if (peek().kind == Tok::plus) {
            advance();
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (peek().kind != Tok::caret) return base;
        advance();
        NodePtr exponent = unary();
        bool constant = true;
        visit(*exponent, [&](const Node& n) {
            constant = constant && (n.kind == Kind::constant || n.kind == Kind::unary ||
                                    n.kind == Kind::binary || n.kind == Kind::power);
        });
        if (!constant)
            throw ParseError("pow exponent must be a numeric constant", exponent->span);
        double value = 0.0;
        try {
            value = evaluate<double>(Expression(exponent, dimension_), EvalEnv<double>{});
        } catch (const DomainError&) {
            throw ParseError("pow exponent does not evaluate to a number", exponent->span);
        }
        Node n;
        n.kind = Kind::power;
        n.value = value;
        n.lhs = base;
        return leaf(std::move(n), {base->span.start, exponent->span.end});
    }

    NodePtr primary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::number: {
            advance();
            Node n;
            n.kind = Kind::constant;
            n.value = t.number;
            return leaf(std::move(n), t.span);
        }
        case Tok::lparen: {
            const SourceSpan open = advance().span;
            NodePtr inner = expr();
            if (peek().kind != Tok::rparen) fail_here("expected ')'");
            const SourceSpan close = advance().span;
            // Keep the inner node but widen nothing: spans refer to operators and operands.
            (void)open;
            (void)close;
            return inner;
        }
        case Tok::ident: return identifier();
        default: fail_here("expected an operand");
        }
    }

    NodePtr identifier() {
        const Token t = advance();
        static const std::pair<const char*, UnaryOp> functions[] = {
            {"sqrt", UnaryOp::sqrt}, {"exp", UnaryOp::exp}, {"log", UnaryOp::log},
            {"sin", UnaryOp::sin},   {"cos", UnaryOp::cos}, {"abs", UnaryOp::abs}};
        for (const auto& [name, op] : functions) {
            if (t.text != name) continue;
            if (peek().kind != Tok::lparen) fail_here("expected '(' after function " + t.text);
            advance();
            NodePtr arg = expr();
            if (peek().kind != Tok::rparen) fail_here("expected ')'");
            const SourceSpan close = advance().span;
            Node n;
            n.kind = Kind::unary;
            n.unary = op;
            n.lhs = arg;
            return leaf(std::move(n), {t.span.start, close.end});
        }
        if (t.text == "pi") {
            Node n;
            n.kind = Kind::constant;
            n.value = std::numbers::pi;
            return leaf(std::move(n), t.span);
        }
        if (std::find(parameters_.begin(), parameters_.end(), t.text) != parameters_.end()) {
            Node n;
            n.kind = Kind::param;
            n.name = t.text;
            return leaf(std::move(n), t.span);
        }
        if ((t.text[0] == 'x' || t.text[0] == 'y') && t.text.size() > 1 &&
            std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            int index = 0;
            std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), index);
            if (index < 1 || index > dimension_)
                throw ParseError("variable index out of range in '" + t.text + "' (dimension " +
                                     std::to_string(dimension_) + ")",
                                 t.span);
            Node n;
            n.kind = t.text[0] == 'x' ? Kind::x_var : Kind::y_var;
            n.index = index - 1;
            return leaf(std::move(n), t.span);
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.span);
    }

    std::shared_ptr<const std::string> source_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int dimension_;
    const std::vector<std::string>& parameters_;
};

}  // namespace

Expression parse(std::string_view source, int dimension, const std::vector<std::string>& parameters) {
    if (dimension < 1) throw InputError("parse: dimension must be positive");
    Parser parser(source, dimension, parameters);
    return Expression(parser.parse_all(), dimension);
}

// -------------------------------------------------------------- evaluator

namespace {

[[noreturn]] void domain_failure(const Node& node, const std::string& what) {
    std::string where;
    if (node.source && node.span.end <= node.source->size() && node.span.end > node.span.start)
        where = " in '" + node.source->substr(node.span.start, node.span.end - node.span.start) + "'";
    throw DomainError("domain error: " + what + where, node.span, node.source != nullptr);
}

bool has_derivatives(double) { return false; }
bool has_derivatives(const Jet& j) { return j.order() > 0; }

double unary_value(UnaryOp op, double v) {
    switch (op) {
    case UnaryOp::neg: return -v;
    case UnaryOp::sqrt: return std::sqrt(v);
    case UnaryOp::exp: return std::exp(v);
    case UnaryOp::log: return std::log(v);
    case UnaryOp::sin: return std::sin(v);
    case UnaryOp::cos: return std::cos(v);
    case UnaryOp::abs: return std::fabs(v);
    }
    return v;
}

Jet unary_value(UnaryOp op, const Jet& v) {
    switch (op) {
    case UnaryOp::neg: return -v;
    case UnaryOp::sqrt: return sqrt(v);
    case UnaryOp::exp: return exp(v);
    case UnaryOp::log: return log(v);
    case UnaryOp::sin: return sin(v);
    case UnaryOp::cos: return cos(v);
    case UnaryOp::abs: return abs(v);
    }
    return v;
}

double power_value(double v, double e) { return std::pow(v, e); }
Jet power_value(const Jet& v, double e) { return pow(v, e); }

double make_constant(const double*, double v) { return v; }
Jet make_constant(const Jet* proto, double v) { return proto->constant(v); }

template <class T, class Resolver>
class Evaluator {
public:
    Evaluator(const T* prototype, const Resolver& resolve) : proto_(prototype), resolve_(resolve) {}

    T eval(const Node& n) const {
        switch (n.kind) {
        case Kind::constant:
            if constexpr (std::is_same_v<T, Jet>) {
                if (!proto_) throw InputError("cannot evaluate a constant jet expression without variables");
            }
            return make_constant(proto_, n.value);
        case Kind::x_var:
        case Kind::y_var:
        case Kind::param: return resolve_(n);
        case Kind::unary: {
            T v = eval(*n.lhs);
            const double v0 = value_of(v);
            if (n.unary == UnaryOp::sqrt && (v0 < 0.0 || (v0 == 0.0 && has_derivatives(v))))
                domain_failure(n, "sqrt of non-positive value " + format_number(v0));
            if (n.unary == UnaryOp::log && v0 <= 0.0)
                domain_failure(n, "log of non-positive value " + format_number(v0));
            return unary_value(n.unary, v);
        }
        case Kind::power: {
            T v = eval(*n.lhs);
            const double v0 = value_of(v);
            const double e = n.value;
            const bool integer = std::floor(e) == e;
            if (!integer && (v0 < 0.0 || (v0 == 0.0 && (e < 0.0 || has_derivatives(v)))))
                domain_failure(n, "fractional power of non-positive value " + format_number(v0));
            if (integer && e < 0.0 && v0 == 0.0) domain_failure(n, "negative power of zero");
            return power_value(v, e);
        }
        case Kind::binary: {
            T a = eval(*n.lhs);
            T b = eval(*n.rhs);
            switch (n.binary) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div:
                if (value_of(b) == 0.0) domain_failure(n, "division by zero");
                return a / b;
            }
        }
        }
        throw std::logic_error("unreachable expression node");
    }

private:
    const T* proto_;
    const Resolver& resolve_;
};

template <class T>
const T* first_of(const EvalEnv<T>& env) {
    if (!env.x.empty()) return &env.x[0];
    if (!env.y.empty()) return &env.y[0];
    if (!env.params.empty()) return &env.params[0].value;
    return nullptr;
}

}  // namespace

template <class T>
T evaluate(const Expression& expr, const EvalEnv<T>& env) {
    auto resolve = [&env](const Node& n) -> T {
        switch (n.kind) {
        case Kind::x_var:
            if (n.index >= static_cast<int>(env.x.size())) throw InputError("unbound variable x" + std::to_string(n.index + 1));
            return env.x[n.index];
        case Kind::y_var:
            if (n.index >= static_cast<int>(env.y.size())) throw InputError("unbound variable y" + std::to_string(n.index + 1));
            return env.y[n.index];
        default:
            for (const auto& p : env.params)
                if (p.name == n.name) return p.value;
            throw InputError("unbound parameter '" + n.name + "'");
        }
    };
    Evaluator<T, decltype(resolve)> ev(first_of(env), resolve);
    return ev.eval(expr.root());
}

template <class T>
T evaluate(const Expression& expr, const std::map<std::string, T>& env) {
    auto resolve = [&env](const Node& n) -> T {
        std::string key = n.kind == Kind::x_var   ? "x" + std::to_string(n.index + 1)
                          : n.kind == Kind::y_var ? "y" + std::to_string(n.index + 1)
                                                  : n.name;
        auto it = env.find(key);
        if (it == env.end()) throw InputError("unbound variable '" + key + "'");
        return it->second;
    };
    const T* proto = env.empty() ? nullptr : &env.begin()->second;
    Evaluator<T, decltype(resolve)> ev(proto, resolve);
    return ev.eval(expr.root());
}

template double evaluate<double>(const Expression&, const EvalEnv<double>&);
template Jet evaluate<Jet>(const Expression&, const EvalEnv<Jet>&);
template double evaluate<double>(const Expression&, const std::map<std::string, double>&);
template Jet evaluate<Jet>(const Expression&, const std::map<std::string, Jet>&);

// ------------------------------------------------------------ homogeneity

HomogeneityResult check_homogeneity(const std::function<double(std::span<const double>)>& fn,
                                    int dimension, int degree, int sample_count, double tolerance,
                                    unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    HomogeneityResult result;
    std::vector<double> y(dimension), scaled(dimension);
    for (int s = 0; s < sample_count; ++s) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& v : y) {
                v = normal(rng);
                norm += v * v;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (double& v : y) v /= norm;
        const double base = fn(y);
        for (double lambda : {0.5, 2.0, 7.0}) {
            for (int i = 0; i < dimension; ++i) scaled[i] = lambda * y[i];
            const double r = std::fabs(fn(scaled) - std::pow(lambda, degree) * base);
            result.max_residual = std::max(result.max_residual, r);
        }
    }
    result.pass = result.max_residual <= tolerance;
    return result;
}

HomogeneityResult check_homogeneity(const Expression& expr, int degree, std::span<const double> x,
                                    int sample_count, double tolerance, unsigned seed) {
    std::vector<double> xs(x.begin(), x.end());
    auto fn = [&](std::span<const double> y) {
        return evaluate<double>(expr, EvalEnv<double>{xs, y, {}});
    };
    return check_homogeneity(fn, expr.dimension(), degree, sample_count, tolerance, seed);
}

}  // namespace finsler
