#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "finsler/metric.hpp"
#include "oracles.hpp"

namespace testing_metrics {

inline finsler::MetricSpec spec(std::string family, std::map<std::string, std::string> coefficients = {}) {
    finsler::MetricSpec s;
    s.family = std::move(family);
    s.dimension = 2;
    s.coefficients = std::move(coefficients);
    return s;
}

inline finsler::FinslerMetric euclidean() { return finsler::euclidean_metric(2); }
inline finsler::FinslerMetric diag49() { return finsler::instantiate(spec("riemannian", {{"a11", "4"}, {"a22", "9"}})); }
inline finsler::FinslerMetric conformal() {
    return finsler::instantiate(spec("riemannian", {{"a11", "exp(2*x1)"}, {"a22", "exp(2*x1)"}}));
}
inline finsler::FinslerMetric randers_const() { return finsler::instantiate(spec("randers", {{"b1", "0.5"}})); }
// the non-Landsberg witness
inline finsler::FinslerMetric randers_x() { return finsler::instantiate(spec("randers", {{"b1", "0.3*x1^2"}})); }
// alpha = dx1^2 + (1 + x2^2) dx2^2 is a product metric and dx1 is parallel
inline finsler::FinslerMetric berwald_randers() {
    return finsler::instantiate(spec("randers", {{"a11", "1"}, {"a22", "1 + x2^2"}, {"b1", "0.5"}}));
}

inline double norm2(std::span<const double> y) { return std::sqrt(y[0] * y[0] + y[1] * y[1]); }

inline const oracle::Finsler F_conformal = [](std::span<const double> x, std::span<const double> y) {
    return std::exp(x[0]) * norm2(y);
};
inline const oracle::Finsler F_randers_const = [](std::span<const double>, std::span<const double> y) {
    return norm2(y) + 0.5 * y[0];
};
inline const oracle::Finsler F_randers_x = [](std::span<const double> x, std::span<const double> y) {
    return norm2(y) + 0.3 * x[0] * x[0] * y[0];
};

}  // namespace testing_metrics

namespace testing_metrics {

// Spray of F = |y| + 0.3 x1^2 y1: alpha is flat and beta is closed, so
// G^i = r_00 y^i / (2F) with r_00 = 0.6 x1 y1^2.
inline double spray_randers_x(std::span<const double> x, std::span<const double> y, int i) {
    return 0.3 * x[0] * y[0] * y[0] * y[i] / F_randers_x(x, y);
}

// N^i_j = dG^i / dy^j
inline std::vector<double> N_randers_x(std::span<const double> x, std::span<const double> y, double h = 1e-3) {
    std::vector<double> out(4);
    std::vector<double> xv(x.begin(), x.end());
    for (int i = 0; i < 2; ++i) {
        oracle::Fn G = [&, i](std::span<const double> q) { return spray_randers_x(xv, q, i); };
        for (int j = 0; j < 2; ++j) out[i * 2 + j] = oracle::d1(G, std::vector<double>(y.begin(), y.end()), j, h);
    }
    return out;
}

// L_ijk = -1/2 y_m d^3 G^m / dy^i dy^j dy^k with y_m = g_mj y^j = 1/2 dF^2/dy^m
inline std::vector<double> landsberg_randers_x(std::span<const double> x, std::span<const double> y, double h = 1e-2) {
    std::vector<double> xv(x.begin(), x.end()), yv(y.begin(), y.end());
    std::vector<double> ym(2);
    for (int m = 0; m < 2; ++m) {
        oracle::Fn half = [&](std::span<const double> q) {
            const double f = F_randers_x(xv, q);
            return 0.5 * f * f;
        };
        ym[m] = oracle::d1(half, yv, m, 1e-3);
    }
    std::vector<double> out(8, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double acc = 0.0;
                for (int m = 0; m < 2; ++m) {
                    oracle::Fn G = [&, m](std::span<const double> q) { return spray_randers_x(xv, q, m); };
                    acc += ym[m] * oracle::partial(G, yv, {i, j, k}, h);
                }
                out[(i * 2 + j) * 2 + k] = -0.5 * acc;
            }
    return out;
}

}  // namespace testing_metrics

namespace testing_metrics {

// dx1^2 + e^{2 x1} dx2^2, Gaussian curvature -1
inline finsler::FinslerMetric instantiate_hyperbolic() {
    return finsler::instantiate(spec("riemannian", {{"a11", "1"}, {"a22", "exp(2*x1)"}}));
}

}  // namespace testing_metrics
