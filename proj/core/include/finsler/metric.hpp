#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"

namespace finsler {

// y with Euclidean norm below this is treated as the zero section.
inline constexpr double kMinDirectionNorm = 1e-12;

class FinslerMetric {
public:
    FinslerMetric() = default;
    FinslerMetric(Expression F, std::string family, std::map<std::string, double> parameters = {});

    int dimension() const { return F_.dimension(); }
    const std::string& family() const { return family_; }
    const std::map<std::string, double>& parameters() const { return parameters_; }
    const Expression& expression() const { return F_; }
    bool x_independent() const { return !F_.depends_on_x(); }

    double F(std::span<const double> x, std::span<const double> y) const;
    Jet F(std::span<const Jet> x, std::span<const Jet> y) const;

private:
    Expression F_;
    std::string family_;
    std::map<std::string, double> parameters_;
};

struct CurveSpec {
    std::vector<std::string> coordinates;  // expressions in s
    double a = 0.0, b = 1.0;
};

// Declarative metric description, as read from a spec file.
struct MetricSpec {
    int schema_version = 1;
    std::string family;
    int dimension = 0;
    std::map<std::string, std::string> coefficients;
    std::map<std::string, double> parameters;
    std::optional<std::string> measure;
    std::optional<CurveSpec> curve;
};

// Built-in families.
FinslerMetric euclidean_metric(int n);
// a is a symmetric n x n matrix of x-dependent coefficient expressions.
FinslerMetric riemannian_metric(const std::vector<Expression>& a);
// F = sqrt(a_ij y^i y^j) + b_i y^i
FinslerMetric randers_metric(const std::vector<Expression>& a, const std::vector<Expression>& b);
FinslerMetric minkowski_metric(const Expression& F);

struct InstantiateOptions {
    std::vector<std::vector<double>> x_samples;  // empty: default_probe_points
};

// Throws InputError for malformed specs and for Randers data with
// ||b||_alpha >= 1 at a validation sample.
FinslerMetric instantiate(const MetricSpec& spec, const InstantiateOptions& options = {});

// The origin followed by deterministic points in [-0.5, 0.5]^n.
std::vector<std::vector<double>> default_probe_points(int n, int count);
// Unit directions: uniform angles for n = 2, seeded Gaussian otherwise.
std::vector<std::vector<double>> default_directions(int n, int count, unsigned seed = 3);

// Below this eigenvalue ratio validation warns that g is close to degenerate.
inline constexpr double kDegenerationRatio = 1e-2;

struct ValidationReport {
    bool ok = false;
    double homogeneity_residual = 0.0;
    double min_F = 0.0;
    double min_eigenvalue = 0.0;
    std::vector<double> min_eigenvalue_x;
    std::vector<double> min_eigenvalue_y;
    double min_eigen_ratio = 0.0;        // min over samples of lambda_min / lambda_max
    double euler_residual = 0.0;         // relative |F^2 - g(y,y)|
    double y_variation = 0.0;            // max |g(x,y) - g(x,y')|, 0 for Riemannian
    std::vector<std::string> warnings;
    std::vector<std::string> errors;     // evaluation failures, not fatal
};

ValidationReport validate(const FinslerMetric& metric, const std::vector<std::vector<double>>& x_samples,
                          const std::vector<std::vector<double>>& y_samples, double tolerance);
ValidationReport validate(const FinslerMetric& metric, double tolerance = 1e-8);

}  // namespace finsler
