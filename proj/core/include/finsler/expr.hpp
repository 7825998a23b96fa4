#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finsler/error.hpp"
#include "finsler/jet.hpp"

namespace finsler {

enum class UnaryOp { neg, sqrt, exp, log, sin, cos, abs };
enum class BinaryOp { add, sub, mul, div };

// Immutable expression tree over x1..xn, y1..yn and named parameters.
// Nodes are shared, so composing expressions is cheap.
class Expression {
public:
    enum class Kind { constant, x_var, y_var, param, unary, binary, power };

    struct Node {
        Kind kind = Kind::constant;
        double value = 0.0;  // constant value, or the exponent of a power node
        int index = 0;       // 0-based variable index
        std::string name;    // parameter name
        UnaryOp unary = UnaryOp::neg;
        BinaryOp binary = BinaryOp::add;
        std::shared_ptr<const Node> lhs, rhs;
        SourceSpan span;
        std::shared_ptr<const std::string> source;
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expression() = default;
    explicit Expression(NodePtr root, int dimension) : root_(std::move(root)), dimension_(dimension) {}

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }
    int dimension() const { return dimension_; }
    bool empty() const { return !root_; }

    // Builders for programmatic composition.
    static Expression constant(double v, int dimension);
    static Expression x(int index, int dimension);  // 0-based
    static Expression y(int index, int dimension);
    static Expression parameter(std::string name, int dimension);
    Expression apply(UnaryOp op) const;
    Expression raised(double exponent) const;
    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);

    // Replace bound parameters by constants; unbound parameters stay symbolic.
    Expression bind(const std::map<std::string, double>& values) const;

    std::vector<std::string> parameters() const;
    bool depends_on_x() const;
    bool contains_abs() const;

    bool structurally_equal(const Expression& other) const;
    std::string to_string() const;

private:
    NodePtr root_;
    int dimension_ = 0;
};

// Parse `source` with variables x1..xn, y1..yn (n = dimension) and the
// declared parameter names. `pi` is a built-in constant.
Expression parse(std::string_view source, int dimension,
                 const std::vector<std::string>& parameters = {});

// Values for unbound parameters, looked up by name.
template <class T>
struct ParamBinding {
    std::string name;
    T value;
};

template <class T>
struct EvalEnv {
    std::span<const T> x;
    std::span<const T> y;
    std::span<const ParamBinding<T>> params;
};

template <class T>
T evaluate(const Expression& expr, const EvalEnv<T>& env);

// Evaluate with a name -> value map ("x1", "y2", parameter names).
template <class T>
T evaluate(const Expression& expr, const std::map<std::string, T>& env);

extern template double evaluate<double>(const Expression&, const EvalEnv<double>&);
extern template Jet evaluate<Jet>(const Expression&, const EvalEnv<Jet>&);
extern template double evaluate<double>(const Expression&, const std::map<std::string, double>&);
extern template Jet evaluate<Jet>(const Expression&, const std::map<std::string, Jet>&);

struct HomogeneityResult {
    bool pass = false;
    double max_residual = 0.0;
};

// Samples random unit directions y and scales lambda in {0.5, 2, 7}; returns
// max |fn(lambda y) - lambda^degree fn(y)|.
HomogeneityResult check_homogeneity(const std::function<double(std::span<const double>)>& fn,
                                    int dimension, int degree, int sample_count, double tolerance,
                                    unsigned seed = 7);
HomogeneityResult check_homogeneity(const Expression& expr, int degree, std::span<const double> x,
                                    int sample_count, double tolerance, unsigned seed = 7);

}  // namespace finsler
