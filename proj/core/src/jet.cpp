#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "finsler/error.hpp"

namespace finsler {

namespace {

void enumerate_degree(int dimension, int degree, int var, MultiIndex& current,
                      std::vector<MultiIndex>& out) {
    if (var == dimension - 1) {
        current[var] = degree;
        out.push_back(current);
        return;
    }
    for (int k = degree; k >= 0; --k) {
        current[var] = k;
        enumerate_degree(dimension, degree - k, var + 1, current, out);
    }
    current[var] = 0;
}

double factorial_of(const MultiIndex& alpha) {
    double f = 1.0;
    for (int a : alpha)
        for (int k = 2; k <= a; ++k) f *= k;
    return f;
}

}  // namespace

JetLayout::JetLayout(int dimension, int order) : dimension_(dimension), order_(order) {
    MultiIndex current(dimension, 0);
    prefix_.assign(order + 1, 0);
    for (int d = 0; d <= order; ++d) {
        enumerate_degree(dimension, d, 0, current, indices_);
        prefix_[d] = static_cast<int>(indices_.size());
    }
    const int n = size();
    degree_.resize(n);
    factorial_.resize(n);
    for (int p = 0; p < n; ++p) {
        degree_[p] = std::accumulate(indices_[p].begin(), indices_[p].end(), 0);
        factorial_[p] = factorial_of(indices_[p]);
    }
    raised_.assign(static_cast<std::size_t>(n) * dimension, -1);
    for (int p = 0; p < n; ++p) {
        MultiIndex up = indices_[p];
        for (int v = 0; v < dimension; ++v) {
            ++up[v];
            raised_[p * dimension + v] = position(up);
            --up[v];
        }
    }
    MultiIndex sum(dimension);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (degree_[a] + degree_[b] > order) continue;
            for (int v = 0; v < dimension; ++v) sum[v] = indices_[a][v] + indices_[b][v];
            products_.push_back({a, b, position(sum)});
        }
    }
    std::stable_sort(products_.begin(), products_.end(), [this](const Product& l, const Product& r) {
        return degree_[l.out] < degree_[r.out];
    });
    product_prefix_.assign(order + 1, 0);
    for (int m = 0; m <= order; ++m) {
        product_prefix_[m] = static_cast<int>(
            std::count_if(products_.begin(), products_.end(),
                          [&](const Product& p) { return degree_[p.out] <= m; }));
    }
}

int JetLayout::position(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != dimension_) return -1;
    int degree = 0;
    for (int a : alpha) {
        if (a < 0) return -1;
        degree += a;
    }
    if (degree > order_) return -1;
    // Indices of one degree are contiguous; search that block.
    const int begin = degree == 0 ? 0 : prefix_[degree - 1];
    const int end = prefix_[degree];
    for (int p = begin; p < end; ++p)
        if (std::equal(alpha.begin(), alpha.end(), indices_[p].begin())) return p;
    return -1;
}

const JetLayout& JetLayout::get(int dimension, int order) {
    if (dimension < 1 || order < 0 || order > Jet::kMaxOrder)
        throw std::invalid_argument("jet layout: dimension must be >= 1 and order in [0, 4]");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dimension, order}];
    if (!slot) slot.reset(new JetLayout(dimension, order));
    return *slot;
}

Jet::Jet(int dimension, int order, double value)
    : layout_(&JetLayout::get(dimension, order)), c_(layout_->size(), 0.0) {
    c_[0] = value;
}

Jet Jet::variable(int dimension, int order, int var, double value) {
    Jet j(dimension, order, value);
    if (order >= 1) j.c_[1 + var] = 1.0;
    return j;
}

std::vector<Jet> Jet::seed(std::span<const double> values, int order) {
    const int d = static_cast<int>(values.size());
    std::vector<Jet> out;
    out.reserve(d);
    for (int i = 0; i < d; ++i) out.push_back(variable(d, order, i, values[i]));
    return out;
}

double Jet::extract(std::span<const int> alpha) const {
    const int p = layout_->position(alpha);
    if (p < 0)
        throw std::out_of_range("jet extract: multi-index exceeds truncation order " +
                                std::to_string(order()));
    return c_[p] * layout_->factorial(p);
}

double Jet::partial(int var) const {
    if (order() < 1) throw std::out_of_range("jet partial: order-0 jet has no derivatives");
    return c_[1 + var];
}

Jet Jet::derivative(int var) const {
    if (order() < 1) throw std::out_of_range("jet derivative: order-0 jet");
    const JetLayout& lower = JetLayout::get(dimension(), order() - 1);
    std::vector<double> out(lower.size());
    for (int p = 0; p < lower.size(); ++p) {
        const int q = layout_->raised(p, var);
        out[p] = (lower.index(p)[var] + 1) * c_[q];
    }
    return Jet(&lower, std::move(out));
}

Jet Jet::truncated(int order) const {
    if (order >= this->order()) return *this;
    const JetLayout& lower = JetLayout::get(dimension(), order);
    return Jet(&lower, std::vector<double>(c_.begin(), c_.begin() + lower.size()));
}

void Jet::match(const Jet& other) {
    if (other.dimension() != dimension())
        throw std::invalid_argument("jet arithmetic: dimension mismatch");
    if (other.order() < order()) *this = truncated(other.order());
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (double& c : r.c_) c = -c;
    return r;
}

Jet& Jet::operator+=(const Jet& other) {
    match(other);
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p] += other.c_[p];
    return *this;
}

Jet& Jet::operator-=(const Jet& other) {
    match(other);
    for (std::size_t p = 0; p < c_.size(); ++p) c_[p] -= other.c_[p];
    return *this;
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }
Jet& Jet::operator/=(const Jet& other) { return *this = *this / other; }

Jet& Jet::operator+=(double s) {
    c_[0] += s;
    return *this;
}
Jet& Jet::operator-=(double s) {
    c_[0] -= s;
    return *this;
}
Jet& Jet::operator*=(double s) {
    for (double& c : c_) c *= s;
    return *this;
}
Jet& Jet::operator/=(double s) {
    if (s == 0.0) throw DomainError("jet division by zero");
    for (double& c : c_) c /= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("jet arithmetic: dimension mismatch");
    const int order = std::min(a.order(), b.order());
    const JetLayout& layout = order == a.order() ? a.layout() : b.layout();
    std::vector<double> out(layout.size(), 0.0);
    // Both operand layouts agree on positions up to `order`.
    for (const auto& p : layout.products(order)) out[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
    return Jet(&layout, std::move(out));
}

Jet operator/(const Jet& a, const Jet& b) { return a * pow(b, -1.0); }

Jet operator/(double s, const Jet& a) { return pow(a, -1.0) * s; }

Jet Jet::compose(std::span<const double> taylor) const {
    const int k = order();
    Jet tail = *this;
    tail.c_[0] = 0.0;
    Jet result = constant(taylor[0]);
    if (k == 0) return result;
    Jet power = tail;
    for (int m = 1; m <= k; ++m) {
        if (taylor[m] != 0.0)
            for (std::size_t p = 0; p < result.c_.size(); ++p) result.c_[p] += taylor[m] * power.c_[p];
        if (m < k) power = power * tail;
    }
    return result;
}

namespace {

std::array<double, Jet::kMaxOrder + 1> power_series(double u0, double exponent, int order) {
    std::array<double, Jet::kMaxOrder + 1> t{};
    double binom = 1.0;
    for (int m = 0; m <= order; ++m) {
        t[m] = binom * std::pow(u0, exponent - m);
        binom *= (exponent - m) / (m + 1);
    }
    return t;
}

bool is_integer(double v) { return std::floor(v) == v; }

}  // namespace

Jet pow(const Jet& u, double exponent) {
    const double u0 = u.value();
    const int k = u.order();
    if (exponent == 0.0) return u.constant(1.0);
    if (is_integer(exponent) && exponent > 0.0) {
        // Exact polynomial expansion; valid for any sign of u0.
        std::array<double, Jet::kMaxOrder + 1> t{};
        double binom = 1.0;
        for (int m = 0; m <= k; ++m) {
            t[m] = (exponent - m >= 0.0) ? binom * std::pow(u0, exponent - m) : 0.0;
            binom *= (exponent - m) / (m + 1);
        }
        return u.compose(std::span<const double>(t.data(), k + 1));
    }
    if (is_integer(exponent)) {
        if (u0 == 0.0) throw DomainError("jet pow: zero base with negative exponent");
    } else if (u0 < 0.0 || (u0 == 0.0 && (k > 0 || exponent < 0.0))) {
        throw DomainError("jet pow: non-positive base with fractional exponent");
    }
    auto t = power_series(u0, exponent, k);
    return u.compose(std::span<const double>(t.data(), k + 1));
}

Jet sqrt(const Jet& u) {
    if (u.value() < 0.0 || (u.value() == 0.0 && u.order() > 0))
        throw DomainError("jet sqrt: non-positive argument");
    if (u.order() == 0) return u.constant(std::sqrt(u.value()));
    return pow(u, 0.5);
}

Jet exp(const Jet& u) {
    std::array<double, Jet::kMaxOrder + 1> t{};
    const double e = std::exp(u.value());
    double fact = 1.0;
    for (int m = 0; m <= u.order(); ++m) {
        if (m > 0) fact *= m;
        t[m] = e / fact;
    }
    return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet log(const Jet& u) {
    const double u0 = u.value();
    if (u0 <= 0.0) throw DomainError("jet log: non-positive argument");
    std::array<double, Jet::kMaxOrder + 1> t{};
    t[0] = std::log(u0);
    for (int m = 1; m <= u.order(); ++m) t[m] = ((m % 2 == 1) ? 1.0 : -1.0) / (m * std::pow(u0, m));
    return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet sin(const Jet& u) {
    std::array<double, Jet::kMaxOrder + 1> t{};
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double cycle[4] = {s, c, -s, -c};
    double fact = 1.0;
    for (int m = 0; m <= u.order(); ++m) {
        if (m > 0) fact *= m;
        t[m] = cycle[m % 4] / fact;
    }
    return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet cos(const Jet& u) {
    std::array<double, Jet::kMaxOrder + 1> t{};
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double cycle[4] = {c, -s, -c, s};
    double fact = 1.0;
    for (int m = 0; m <= u.order(); ++m) {
        if (m > 0) fact *= m;
        t[m] = cycle[m % 4] / fact;
    }
    return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

// Non-smooth at 0: the sign of the value decides the branch.
Jet abs(const Jet& u) { return u.value() < 0.0 ? -u : u; }

namespace {

struct Stencil1D {
    std::vector<std::pair<int, double>> taps;  // (offset in steps, weight before h^-m)
};

Stencil1D central_stencil(int m) {
    switch (m) {
    case 0: return {{{0, 1.0}}};
    case 1: return {{{-1, -0.5}, {1, 0.5}}};
    case 2: return {{{-1, 1.0}, {0, -2.0}, {1, 1.0}}};
    case 3: return {{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}}};
    default: throw std::invalid_argument("fd_oracle: per-variable order above 3");
    }
}

double central_difference(const std::function<double(std::span<const double>)>& fn,
                          std::span<const double> point, std::span<const int> alpha, double h) {
    const int d = static_cast<int>(point.size());
    std::vector<Stencil1D> stencils;
    for (int v = 0; v < d; ++v) stencils.push_back(central_stencil(alpha[v]));
    std::vector<double> shifted(point.begin(), point.end());
    std::vector<std::size_t> counter(d, 0);
    double sum = 0.0;
    while (true) {
        double weight = 1.0;
        for (int v = 0; v < d; ++v) {
            const auto& tap = stencils[v].taps[counter[v]];
            shifted[v] = point[v] + tap.first * h;
            weight *= tap.second;
        }
        sum += weight * fn(shifted);
        int v = 0;
        while (v < d && ++counter[v] == stencils[v].taps.size()) counter[v++] = 0;
        if (v == d) break;
    }
    int total = 0;
    for (int a : alpha) total += a;
    return sum / std::pow(h, total);
}

}  // namespace

double fd_oracle(const std::function<double(std::span<const double>)>& fn,
                 std::span<const double> point, std::span<const int> alpha, double step) {
    if (alpha.size() != point.size())
        throw std::invalid_argument("fd_oracle: multi-index and point dimensions differ");
    int total = 0;
    for (int a : alpha) total += a;
    if (total > 3) throw std::invalid_argument("fd_oracle: total order above 3");
    if (total == 0) return fn(point);
    const double coarse = central_difference(fn, point, alpha, step);
    const double fine = central_difference(fn, point, alpha, 0.5 * step);
    return (4.0 * fine - coarse) / 3.0;
}

double fd_default_step(int order) {
    switch (order) {
    case 0:
    case 1: return 1e-3;
    case 2: return 2e-3;
    default: return 1e-2;
    }
}

}  // namespace finsler
