#pragma once

#include <span>
#include <string>
#include <vector>

#include "finsler/averaging.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

// tied: chi = varpi throughout. independent: varpi then chi, Gauss-Seidel,
// each from the same update formula.
enum class GaugeVariant { tied, independent };

struct GaugeOptions {
    double tolerance = 1e-10;
    int max_iterations = 200;
    double relaxation = 0.5;  // 1 is the undamped iteration
    GaugeVariant variant = GaugeVariant::tied;
    int workers = 1;
};

inline constexpr double kGaugeLower = 1e-6;
inline constexpr double kGaugeUpper = 1e6;

// g_t = (1 - t) varpi g + t chi h on the nodes of I_x.
struct HomotopyState {
    double t = 0.0;
    int dimension = 0;
    std::vector<double> x;
    std::vector<double> h;
    FinslerMetric metric;
    GaugeOptions options;

    std::vector<std::vector<double>> u;     // sphere directions
    std::vector<std::vector<double>> ybar;  // radial projections onto I_x
    std::vector<std::vector<double>> g;     // g(x, ybar)
    std::vector<double> sqrt_det_g;
    std::vector<double> grid_weights;
    std::vector<double> chi, varpi;

    double vol_x = 0.0;
    double vol_t = 0.0;
    int iterations = 0;
    double final_update = 0.0;
    bool converged = false;
    std::vector<double> update_history;

    // Gauge value at an arbitrary direction, from the converged fixed point.
    double gauge_at(std::span<const double> y) const;
    // g_t(x, y) as an n x n matrix.
    std::vector<double> matrix_at(std::span<const double> y) const;
    double F_t(std::span<const double> y) const;
};

HomotopyState solve_gauges(const FinslerMetric& metric, std::span<const double> h, std::span<const double> x,
                           double t, const SphereGrid& grid, const GaugeOptions& options = {});

// Refuses unconverged states.
TensorTable interpolated_tensor(const HomotopyState& state, std::span<const double> x, std::span<const double> y);

// Node-wise averages over I_xt for a converged state.
struct HomotopyAverages {
    std::vector<double> mean_g_t;  // <g_t>_f
    TensorTable f_term;
};
HomotopyAverages homotopy_averages(const HomotopyState& state, const Measure& measure);

struct ShenProbe {
    std::vector<double> x;
    double vol_t = 0.0;
    double det_min = 0.0, det_max = 0.0;  // det g_t over the nodes
};

struct InvarianceRow {
    double t = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_update = 0.0;
    double chi_min = 0.0, chi_max = 0.0;
    double varpi_min = 0.0, varpi_max = 0.0;
    double vol_t = 0.0;
    double average_deviation = 0.0;  // max |<g_t>_f - h|
    double f_term_drift = 0.0;       // max |f-term(t) - f-term(0)|
    double homogeneity_residual = 0.0;
    std::vector<ShenProbe> probes;
    double probe_vol_spread = 0.0;
    double probe_det_spread = 0.0;
    std::string error;
};

struct InvarianceReport {
    std::vector<double> h;
    double vol_x = 0.0;
    std::vector<InvarianceRow> rows;
    bool all_converged() const;
};

struct InvarianceOptions {
    GaugeOptions gauge;
    double probe_offset = 0.05;  // Shen side data at x +- offset e_i
    bool shen_probes = true;
};

InvarianceReport invariance_report(const FinslerMetric& metric, const Measure& measure, std::span<const double> x,
                                   std::span<const double> t_list, const SphereGrid& grid,
                                   const InvarianceOptions& options = {});

}  // namespace finsler
