#pragma once

#include <optional>
#include <span>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

// Positive weight on the slit bundle, made 0-homogeneous by evaluating the
// expression at y / F(x, y).
class Measure {
public:
    Measure() = default;  // f = 1
    static Measure constant_one() { return {}; }
    static Measure from_expression(Expression f);

    bool is_constant() const { return !f_.has_value(); }
    const std::optional<Expression>& expression() const { return f_; }

    double operator()(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) const;
    // d f / d x^i at fixed y.
    std::vector<double> dx(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) const;

private:
    std::optional<Expression> f_;
};

struct AveragedMetricValue {
    std::vector<double> h;  // n x n
    double volume = 0.0;    // vol(I_x)
    double mean_f = 0.0;    // <f>
};

AveragedMetricValue averaged_metric_value(const FinslerMetric& metric, const Measure& measure,
                                          std::span<const double> x, const SphereGrid& grid, int workers = 1);

// h_ij(x) = (1/vol) integral of f g_ij over I_x.
std::vector<double> averaged_metric(const FinslerMetric& metric, const Measure& measure, std::span<const double> x,
                                    const SphereGrid& grid, int workers = 1);

// x -> h(x), keeping the metric, measure and grid it was built from.
class AveragedMetric {
public:
    AveragedMetric(FinslerMetric metric, Measure measure, SphereGrid grid, int workers = 1)
        : metric_(std::move(metric)), measure_(std::move(measure)), grid_(std::move(grid)), workers_(workers) {}
    std::vector<double> operator()(std::span<const double> x) const {
        return averaged_metric(metric_, measure_, x, grid_, workers_);
    }
    const FinslerMetric& metric() const { return metric_; }
    const Measure& measure() const { return measure_; }
    const SphereGrid& grid() const { return grid_; }

private:
    FinslerMetric metric_;
    Measure measure_;
    SphereGrid grid_;
    int workers_;
};

// <phi>(x) = (1/vol) integral of phi over I_x.
double averaged_scalar(const FinslerMetric& metric, const Integrand& phi, std::span<const double> x,
                       const SphereGrid& grid, int workers = 1);

// theta^i_j = h^il g_lj(x, y)
TensorTable theta(const FinslerMetric& metric, std::span<const double> h, std::span<const double> x,
                  std::span<const double> y);

// Christoffel symbols of h with d h / dx by Richardson-extrapolated central
// differences of averaged_metric.
TensorTable levi_civita_direct(const FinslerMetric& metric, const Measure& measure, std::span<const double> x,
                               const SphereGrid& grid, double fd_step = 1e-3, int workers = 1);

struct ChristoffelDecomposition {
    TensorTable grad_vol;     // volume-variation term, via tr A_dot
    TensorTable theta_gamma;  // <theta gamma>_f
    TensorTable log_det;      // log sqrt(det g) term
    TensorTable f_term;
    TensorTable sum;
    // The same two terms with theta and h_ij h^kl placed as displayed in the
    // source formula; kept for comparison only.
    TensorTable grad_vol_displayed;
    TensorTable log_det_displayed;
    TensorTable sum_displayed;
    double volume = 0.0;
    std::vector<double> mean_trace;  // <g(tr A_dot, d_i)>_1
    std::vector<double> h;
};

ChristoffelDecomposition levi_civita_decomposed(const FinslerMetric& metric, const Measure& measure,
                                                std::span<const double> x, const SphereGrid& grid,
                                                double fd_step = 1e-3, int workers = 1);

struct SphereInvariance {
    double max_deviation = 0.0;
    std::vector<double> lambdas;
    std::vector<TensorTable> averages;  // <theta gamma>_1 over I(x, lambda)
};

// Averages theta gamma over I(x, lambda) = {F = lambda} for each lambda and
// over I_x; reports the largest deviation from the I_x value.
SphereInvariance sphere_invariance_check(const FinslerMetric& metric, std::span<const double> x,
                                         std::span<const double> lambdas, const SphereGrid& grid, int workers = 1);

}  // namespace finsler
