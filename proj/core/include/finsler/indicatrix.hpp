#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

// Quadrature on the unit Euclidean sphere S^{n-1}.
struct SphereGrid {
    int dimension = 0;
    int resolution = 0;
    std::string descriptor;
    std::vector<double> nodes;  // count x dimension, row-major
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> node(std::size_t a) const {
        return {nodes.data() + a * dimension, static_cast<std::size_t>(dimension)};
    }
};

// n = 2: `resolution` uniform nodes. n = 3: Gauss-Legendre in cos(theta)
// (resolution / 2 nodes) times `resolution` azimuths. n = 4 adds a
// Gauss-Legendre hyperpolar angle with resolution / 2 nodes.
SphereGrid build_grid(int n, int resolution);
int default_resolution(int n);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

// Sum in a fixed binary-tree order.
double pairwise_sum(std::span<const double> values);

struct IndicatrixSample {
    std::vector<double> u;  // sphere direction
    std::vector<double> y;  // point on the indicatrix
    double rho = 0.0;       // 1 / F(x, u)
    double sqrt_det = 0.0;  // sqrt(det g(x, y))
    double weight = 0.0;    // w_a rho^n
    double volume_weight() const { return weight * sqrt_det; }
};

// Radial gauge y = lambda * u / F(x, u); lambda = 1 is the indicatrix.
std::vector<IndicatrixSample> sample_indicatrix(const FinslerMetric& metric, std::span<const double> x,
                                                const SphereGrid& grid, int workers = 1, double lambda = 1.0);

using Integrand = std::function<double(std::span<const double> x, std::span<const double> y)>;

double integrate(const FinslerMetric& metric, std::span<const double> x, const SphereGrid& grid,
                 const Integrand& integrand, int workers = 1);
double volume(const FinslerMetric& metric, std::span<const double> x, const SphereGrid& grid, int workers = 1);

struct BaoShenResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

// lhs = b . grad vol(I_x) by Richardson-extrapolated central differences;
// rhs = -integral of g(tr A_dot, b) over I_x.
BaoShenResult bao_shen_check(const FinslerMetric& metric, std::span<const double> x, std::span<const double> b,
                             const SphereGrid& grid, double fd_step = 1e-4, int workers = 1);

}  // namespace finsler
