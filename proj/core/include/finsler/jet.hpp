#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace finsler {

using MultiIndex = std::vector<int>;

// Multi-index bookkeeping shared by every jet of a given (dimension, order).
// Indices are stored in graded lexicographic order, so the layout of order m
// is a prefix of the layout of any order k >= m with the same dimension.
class JetLayout {
public:
    static const JetLayout& get(int dimension, int order);

    int dimension() const { return dimension_; }
    int order() const { return order_; }
    int size() const { return static_cast<int>(indices_.size()); }

    const MultiIndex& index(int position) const { return indices_[position]; }
    int degree(int position) const { return degree_[position]; }
    // Position of `alpha`, or -1 when |alpha| exceeds the order.
    int position(std::span<const int> alpha) const;
    // Position of index(position) + e_var, or -1 past the truncation order.
    int raised(int position, int var) const { return raised_[position * dimension_ + var]; }
    // Number of leading entries with total degree <= m.
    int prefix(int m) const { return prefix_[m]; }
    // alpha! for each position.
    double factorial(int position) const { return factorial_[position]; }

    struct Product {
        int lhs, rhs, out;
    };
    // Every (alpha, beta) with |alpha + beta| <= order, sorted by output degree.
    std::span<const Product> products(int result_order) const {
        return {products_.data(), static_cast<std::size_t>(product_prefix_[result_order])};
    }

private:
    JetLayout(int dimension, int order);

    int dimension_;
    int order_;
    std::vector<MultiIndex> indices_;
    std::vector<int> degree_;
    std::vector<int> raised_;
    std::vector<int> prefix_;
    std::vector<double> factorial_;
    std::vector<Product> products_;
    std::vector<int> product_prefix_;
};

// Truncated multivariate Taylor expansion. Coefficient c_alpha stores
// (d^alpha f)(p) / alpha!.
class Jet {
public:
    static constexpr int kMaxOrder = 4;

    Jet() = default;
    Jet(int dimension, int order, double value);

    // One jet per variable, variable i carrying values[i] and a unit slope.
    static std::vector<Jet> seed(std::span<const double> values, int order);
    static Jet variable(int dimension, int order, int var, double value);

    bool valid() const { return layout_ != nullptr; }
    int dimension() const { return layout_->dimension(); }
    int order() const { return layout_->order(); }
    int size() const { return static_cast<int>(c_.size()); }
    const JetLayout& layout() const { return *layout_; }

    double value() const { return c_[0]; }
    double coefficient(int position) const { return c_[position]; }
    std::span<const double> coefficients() const { return c_; }

    // d^alpha f at the expansion point (coefficient times alpha!).
    double extract(std::span<const int> alpha) const;
    double extract(std::initializer_list<int> alpha) const {
        return extract(std::span<const int>(alpha.begin(), alpha.size()));
    }
    // First partial derivative in `var`, read off the order-1 coefficients.
    double partial(int var) const;

    // Jet of d f / d var, one order lower.
    Jet derivative(int var) const;
    Jet truncated(int order) const;
    // Same dimension and order, constant value.
    Jet constant(double value) const { return Jet(dimension(), order(), value); }

    Jet operator-() const;
    Jet& operator+=(const Jet& other);
    Jet& operator-=(const Jet& other);
    Jet& operator*=(const Jet& other);
    Jet& operator/=(const Jet& other);
    Jet& operator+=(double s);
    Jet& operator-=(double s);
    Jet& operator*=(double s);
    Jet& operator/=(double s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }
    friend Jet operator/(double s, const Jet& a);

    // f(u) given taylor[m] = f^(m)(u0) / m!, m = 0..order.
    Jet compose(std::span<const double> taylor) const;

private:
    Jet(const JetLayout* layout, std::vector<double> c) : layout_(layout), c_(std::move(c)) {}
    void match(const Jet& other);

    const JetLayout* layout_ = nullptr;
    std::vector<double> c_;
};

Jet sqrt(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet abs(const Jet& u);
Jet pow(const Jet& u, double exponent);

inline double value_of(double v) { return v; }
inline double value_of(const Jet& j) { return j.value(); }

// Central finite-difference estimate of d^alpha fn at `point` (|alpha| <= 3),
// one Richardson halving on top of the tensor-product stencil.
double fd_oracle(const std::function<double(std::span<const double>)>& fn,
                 std::span<const double> point, std::span<const int> alpha, double step);

// Step that balances truncation and round-off for a derivative of `order`.
double fd_default_step(int order);

}  // namespace finsler
