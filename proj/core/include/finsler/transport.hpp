#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// s -> x(s) on [a, b]; coordinates are DSL expressions in the parameter s.
class Curve {
public:
    Curve() = default;
    Curve(std::vector<Expression> coordinates, double a, double b);
    static Curve parse(const std::vector<std::string>& coordinates, double a, double b,
                       const std::map<std::string, double>& parameters = {});
    static Curve line(std::span<const double> from, std::span<const double> to);

    int dimension() const { return static_cast<int>(coords_.size()); }
    double a() const { return a_; }
    double b() const { return b_; }
    void eval(double s, std::vector<double>& x, std::vector<double>& xdot) const;

private:
    std::vector<Expression> coords_;
    double a_ = 0.0, b_ = 1.0;
};

struct TransportResult {
    std::vector<double> s;
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> y;
    std::vector<double> F;
    double step = 0.0;
    int steps = 0;
};

// Fixed-step RK4 for dy^k/ds = -Gamma^k_ij(x(s), y) y^i xdot^j.
TransportResult parallel_transport(const FinslerMetric& metric, const Curve& curve, std::span<const double> y0,
                                   int steps);

double norm_drift(const TransportResult& result);

// chern: de^k/ds = -Gamma^k_ij(x, y_s) e^i xdot^j, which keeps g_y(e_a, e_b)
// fixed for every metric. linearized: the differential of the nonlinear
// transport map, de^k/ds = -(dN^k_j / dy^i) e^i xdot^j.
enum class FrameRule { linearized, chern };

struct FrameTransportResult {
    TransportResult base;
    std::vector<std::vector<std::vector<double>>> frames;  // [sample][a][component]
    double max_drift = 0.0;                                // max |g_ab(s) - g_ab(a)|
    double predicted_drift = 0.0;                          // max |integral of -2 A_dot(e_a, e_b, xdot) ds|
    double max_prediction_error = 0.0;                     // max |drift - prediction| over samples
    double A_dot_integral = 0.0;                           // integral of max |A_dot_ijk| ds
    std::vector<double> final_drift;                       // g_ab(b) - g_ab(a), n x n
};

FrameTransportResult frame_transport_check(const FinslerMetric& metric, const Curve& curve,
                                           std::span<const double> y0,
                                           const std::vector<std::vector<double>>& frame, int steps,
                                           FrameRule rule = FrameRule::linearized);

}  // namespace finsler
