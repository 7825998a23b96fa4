#include "finsler/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/linalg.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

namespace {

void check_direction(std::span<const double> y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    if (std::sqrt(s) < kMinDirectionNorm) throw DomainError("y is on the zero section (|y| < 1e-12)");
}

void check_direction(std::span<const Jet> y) {
    double s = 0.0;
    for (const Jet& v : y) s += v.value() * v.value();
    if (std::sqrt(s) < kMinDirectionNorm) throw DomainError("y is on the zero section (|y| < 1e-12)");
}

std::string point_string(std::span<const double> p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
}

Expression quadratic_form(const std::vector<Expression>& a, int n) {
    Expression sum;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Expression term = a[i * n + j] * Expression::y(i, n) * Expression::y(j, n);
            if (i != j) term = Expression::constant(2.0, n) * term;
            sum = sum.empty() ? term : sum + term;
        }
    return sum;
}

}  // namespace

FinslerMetric::FinslerMetric(Expression F, std::string family, std::map<std::string, double> parameters)
    : F_(std::move(F)), family_(std::move(family)), parameters_(std::move(parameters)) {
    if (F_.empty()) throw InputError("metric expression is empty");
    const auto unbound = F_.parameters();
    if (!unbound.empty()) throw InputError("metric has unbound parameter '" + unbound.front() + "'");
}

double FinslerMetric::F(std::span<const double> x, std::span<const double> y) const {
    check_direction(y);
    return evaluate<double>(F_, EvalEnv<double>{x, y, {}});
}

Jet FinslerMetric::F(std::span<const Jet> x, std::span<const Jet> y) const {
    check_direction(y);
    return evaluate<Jet>(F_, EvalEnv<Jet>{x, y, {}});
}

FinslerMetric euclidean_metric(int n) {
    Expression sum;
    for (int i = 0; i < n; ++i) {
        Expression t = Expression::y(i, n).raised(2.0);
        sum = sum.empty() ? t : sum + t;
    }
    return FinslerMetric(sum.apply(UnaryOp::sqrt), "euclidean");
}

FinslerMetric riemannian_metric(const std::vector<Expression>& a) {
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(a.size()))));
    if (n * n != static_cast<int>(a.size()) || n < 1) throw InputError("riemannian: coefficient matrix is not square");
    return FinslerMetric(quadratic_form(a, n).apply(UnaryOp::sqrt), "riemannian");
}

FinslerMetric randers_metric(const std::vector<Expression>& a, const std::vector<Expression>& b) {
    const int n = static_cast<int>(b.size());
    if (static_cast<int>(a.size()) != n * n) throw InputError("randers: a and b dimensions disagree");
    Expression beta;
    for (int i = 0; i < n; ++i) {
        Expression t = b[i] * Expression::y(i, n);
        beta = beta.empty() ? t : beta + t;
    }
    return FinslerMetric(quadratic_form(a, n).apply(UnaryOp::sqrt) + beta, "randers");
}

FinslerMetric minkowski_metric(const Expression& F) {
    if (F.depends_on_x()) throw InputError("minkowski: F must not depend on x");
    return FinslerMetric(F, "minkowski");
}

std::vector<std::vector<double>> default_probe_points(int n, int count) {
    std::vector<std::vector<double>> pts;
    pts.emplace_back(n, 0.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    while (static_cast<int>(pts.size()) < count) {
        std::vector<double> p(n);
        for (double& v : p) v = u(rng);
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<std::vector<double>> default_directions(int n, int count, unsigned seed) {
    std::vector<std::vector<double>> dirs;
    if (n == 2) {
        for (int k = 0; k < count; ++k) {
            const double t = 2.0 * std::numbers::pi * k / count;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
        return dirs;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    while (static_cast<int>(dirs.size()) < count) {
        std::vector<double> d(n);
        double s = 0.0;
        for (double& v : d) {
            v = normal(rng);
            s += v * v;
        }
        if (s < 1e-12) continue;
        for (double& v : d) v /= std::sqrt(s);
        dirs.push_back(std::move(d));
    }
    return dirs;
}

namespace {

// Coefficient lookup: a_ij accepts "a12" or "a21"; missing off-diagonals are 0.
std::vector<Expression> coefficient_matrix(const MetricSpec& spec, const std::vector<std::string>& params,
                                           bool identity_default) {
    const int n = spec.dimension;
    std::vector<Expression> a(n * n);
    bool any = false;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const std::string k1 = "a" + std::to_string(i + 1) + std::to_string(j + 1);
            const std::string k2 = "a" + std::to_string(j + 1) + std::to_string(i + 1);
            auto it = spec.coefficients.find(k1);
            if (it == spec.coefficients.end()) it = spec.coefficients.find(k2);
            Expression e;
            if (it != spec.coefficients.end()) {
                e = parse(it->second, n, params).bind(spec.parameters);
                any = true;
            } else {
                e = Expression::constant(i == j ? 1.0 : 0.0, n);
            }
            a[i * n + j] = e;
            a[j * n + i] = e;
        }
    if (!any && !identity_default) throw InputError("riemannian: no a_ij coefficients given");
    return a;
}

}  // namespace

FinslerMetric instantiate(const MetricSpec& spec, const InstantiateOptions& options) {
    const int n = spec.dimension;
    if (n < 1 || n > 4) throw InputError("dimension must be between 1 and 4");
    std::vector<std::string> params;
    for (const auto& [k, v] : spec.parameters) params.push_back(k);

    auto bound = [&](const FinslerMetric& m) {
        return FinslerMetric(m.expression(), m.family(), spec.parameters);
    };
    auto single = [&](const char* key) {
        auto it = spec.coefficients.find(key);
        if (it == spec.coefficients.end())
            throw InputError(spec.family + ": missing coefficient \"" + key + "\"");
        return parse(it->second, n, params).bind(spec.parameters);
    };

    if (spec.family == "euclidean") return euclidean_metric(n);
    if (spec.family == "riemannian") return bound(riemannian_metric(coefficient_matrix(spec, params, false)));
    if (spec.family == "minkowski") return bound(minkowski_metric(single("F")));
    if (spec.family == "dsl") return bound(FinslerMetric(single("F"), "dsl"));
    if (spec.family != "randers")
        throw InputError("unknown metric family \"" + spec.family + "\"");

    const auto a = coefficient_matrix(spec, params, true);
    std::vector<Expression> b(n);
    for (int i = 0; i < n; ++i) {
        auto it = spec.coefficients.find("b" + std::to_string(i + 1));
        b[i] = it == spec.coefficients.end() ? Expression::constant(0.0, n) : parse(it->second, n, params).bind(spec.parameters);
    }
    FinslerMetric m = bound(randers_metric(a, b));

    // ||b||_alpha < 1 is needed for strong convexity.
    const auto samples = options.x_samples.empty() ? default_probe_points(n, 5) : options.x_samples;
    for (const auto& x : samples) {
        std::vector<double> am(n * n), bv(n);
        const std::vector<double> ydummy(n, 0.0);
        for (int p = 0; p < n * n; ++p)
            am[p] = evaluate<double>(a[p], EvalEnv<double>{x, ydummy, {}});
        for (int i = 0; i < n; ++i) bv[i] = evaluate<double>(b[i], EvalEnv<double>{x, ydummy, {}});
        const auto ainv = inverse<double>(am, n);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) norm2 += ainv[i * n + j] * bv[i] * bv[j];
        if (!(norm2 < 1.0))
            throw InputError("randers: ||b||_alpha = " + std::to_string(std::sqrt(std::max(norm2, 0.0))) +
                             " >= 1 at x = " + point_string(x) + " (strong convexity fails)");
    }
    return m;
}

ValidationReport validate(const FinslerMetric& metric, const std::vector<std::vector<double>>& x_samples,
                          const std::vector<std::vector<double>>& y_samples, double tolerance) {
    const int n = metric.dimension();
    ValidationReport rep;
    rep.min_F = INFINITY;
    rep.min_eigenvalue = INFINITY;
    rep.min_eigen_ratio = INFINITY;
    std::vector<double> ratio_y;
    if (metric.expression().contains_abs())
        rep.warnings.push_back("expression contains abs(), which is not smooth at 0; g needs two y-derivatives");
    for (const auto& x : x_samples) {
        try {
            const auto h = check_homogeneity(metric.expression(), 1, x, 16, tolerance);
            rep.homogeneity_residual = std::max(rep.homogeneity_residual, h.max_residual);
        } catch (const std::exception& e) {
            rep.errors.push_back(std::string("homogeneity at x = ") + point_string(x) + ": " + e.what());
        }
        std::vector<double> g_first;
        for (const auto& y : y_samples) {
            try {
                const MetricAt m = metric_at(metric, x, y);
                rep.min_F = std::min(rep.min_F, m.F);
                const auto ev = symmetric_eigenvalues(m.g, n);
                if (ev.back() > 0.0 && ev.front() / ev.back() < rep.min_eigen_ratio) {
                    rep.min_eigen_ratio = ev.front() / ev.back();
                    ratio_y = y;
                }
                if (ev.front() < rep.min_eigenvalue) {
                    rep.min_eigenvalue = ev.front();
                    rep.min_eigenvalue_x = x;
                    rep.min_eigenvalue_y = y;
                }
                double gyy = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) gyy += m.g[i * n + j] * y[i] * y[j];
                rep.euler_residual = std::max(rep.euler_residual, std::fabs(m.F * m.F - gyy) / (m.F * m.F));
                if (g_first.empty()) g_first = m.g;
                for (int p = 0; p < n * n; ++p)
                    rep.y_variation = std::max(rep.y_variation, std::fabs(m.g[p] - g_first[p]));
            } catch (const std::exception& e) {
                rep.errors.push_back("x = " + point_string(x) + ", y = " + point_string(y) + ": " + e.what());
            }
        }
    }
    if (rep.min_eigenvalue <= tolerance && std::isfinite(rep.min_eigenvalue))
        rep.warnings.push_back("g degenerates near y = " + point_string(rep.min_eigenvalue_y) +
                               " (min eigenvalue " + std::to_string(rep.min_eigenvalue) + ")");
    else if (rep.min_eigen_ratio < kDegenerationRatio)
        rep.warnings.push_back("g is nearly degenerate near y = " + point_string(ratio_y) +
                               " (eigenvalue ratio " + std::to_string(rep.min_eigen_ratio) + ")");
    rep.ok = rep.errors.empty() && rep.homogeneity_residual <= tolerance && rep.min_F > 0.0 &&
             rep.min_eigenvalue > tolerance && rep.euler_residual <= std::max(tolerance, 1e-9);
    return rep;
}

ValidationReport validate(const FinslerMetric& metric, double tolerance) {
    const int n = metric.dimension();
    return validate(metric, default_probe_points(n, 5), default_directions(n, 64), tolerance);
}

}  // namespace finsler
