#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Dense components along pi at (x, y). Up slots come first in the index
// order, then down slots; storage is row-major.
struct TensorTable {
    std::string name;
    int dimension = 0;
    int up = 0;
    int down = 0;
    std::vector<double> x, y;
    std::string symmetry;  // e.g. "symmetric(0,1)", "total", "antisymmetric(2,3)", ""
    std::vector<double> data;

    TensorTable() = default;
    TensorTable(std::string name, int dimension, int up, int down, std::span<const double> x,
                std::span<const double> y, std::string symmetry = {});

    int rank() const { return up + down; }
    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    double& at(std::initializer_list<int> idx);
    double at(std::initializer_list<int> idx) const;
    double max_abs() const;
    // Largest violation of the declared symmetry.
    double symmetry_residual() const;
};

double max_abs_difference(const TensorTable& a, const TensorTable& b);

struct ChernData {
    TensorTable g, g_inv, A, gamma, N, Gamma;
    double F = 0.0;
};

TensorTable fundamental_tensor(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);
TensorTable cartan_tensor(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);
TensorTable formal_christoffel(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);
TensorTable nonlinear_connection(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);
ChernData chern_coefficients(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);

struct StructureResiduals {
    double torsion = 0.0;
    double horizontal = 0.0;
    double vertical = 0.0;
    double compatibility() const { return horizontal > vertical ? horizontal : vertical; }
};
StructureResiduals verify_structure_equations(const ChernData& data, const FinslerMetric& metric,
                                              std::span<const double> x, std::span<const double> y);

// phi as a function of (x, y) jets; returns delta phi / delta x^j.
using JetField = std::function<Jet(std::span<const Jet> x, std::span<const Jet> y)>;
std::vector<double> horizontal_derivative(const FinslerMetric& metric, std::span<const double> x,
                                          std::span<const double> y, const JetField& phi);

struct Curvatures {
    TensorTable R, P;
};
Curvatures curvatures(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);

struct Landsberg {
    TensorTable A_dot;
    std::vector<double> trace;  // tr A_dot^k
};
Landsberg landsberg_tensor(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);

// Everything at one point from a single jet evaluation of F^2.
struct PointTensors {
    ChernData chern;
    TensorTable dGamma_dx;   // d Gamma^i_jk / d x^l, index (i,j,k,l)
    TensorTable dGamma_dy;   // d Gamma^i_jk / d y^l
    TensorTable dN_dy;       // d N^i_j / d y^k
    TensorTable R, P, A_dot;
    std::vector<double> tr_A_dot;
};
PointTensors point_tensors(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);

// Relative sign s in  l_i P^i_jkl = s * A_dot_jkl,  with l_i = g_im y^m / F.
inline constexpr double kLandsbergSign = 1.0;

// Components l_i P^i_jkl, the flag-direction part of P.
TensorTable flag_component_P(const PointTensors& t);

// Light-weight node data used by quadrature: g and sqrt(det g) from
// order-2 jets in y only.
struct MetricAt {
    double F = 0.0;
    std::vector<double> g;
    double sqrt_det = 0.0;
};
MetricAt metric_at(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y);

}  // namespace finsler
