#include "finsler_tools/classify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "finsler/parallel.hpp"
#include "finsler/tensor.hpp"

namespace finsler::tools {

std::vector<std::vector<double>> classification_probes(std::span<const double> x, double offset) {
    std::vector<std::vector<double>> out(3, std::vector<double>(x.begin(), x.end()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[1][i] += offset;
        out[2][i] -= offset;
    }
    return out;
}

namespace {

struct Cell {
    double A = 0.0, P = 0.0, A_dot = 0.0;
    std::vector<double> Gamma;
    std::optional<std::string> error;
};

Verdict verdict(double r, double tol) { return {r <= tol, r, tol}; }

}  // namespace

Classification classify(const FinslerMetric& metric, const std::vector<std::vector<double>>& x_probes,
                        const std::vector<std::vector<double>>& y_probes, const ClassifyOptions& options) {
    const std::size_t nx = x_probes.size(), ny = y_probes.size();
    std::vector<Cell> cells(nx * ny);
    parallel_for(cells.size(), options.workers, [&](std::size_t c) {
        const auto& x = x_probes[c / ny];
        const auto& y = y_probes[c % ny];
        try {
            PointTensors t = point_tensors(metric, x, y);
            cells[c].A = t.chern.A.max_abs();
            cells[c].P = t.P.max_abs();
            cells[c].A_dot = t.A_dot.max_abs();
            cells[c].Gamma = t.chern.Gamma.data;
        } catch (const std::exception& e) {
            cells[c].error = e.what();
        }
    });

    Classification out;
    out.x_probes = x_probes;
    out.directions = static_cast<int>(ny);
    double A = 0.0, P = 0.0, A_dot = 0.0, gv = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const std::vector<double>* ref = nullptr;
        double gx = 0.0;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const Cell& c = cells[ix * ny + iy];
            if (c.error) {
                out.failures.push_back({x_probes[ix], y_probes[iy], *c.error});
                continue;
            }
            out.rows.push_back({x_probes[ix], y_probes[iy], c.A, c.P, c.A_dot});
            A = std::max(A, c.A);
            P = std::max(P, c.P);
            A_dot = std::max(A_dot, c.A_dot);
            if (!ref) {
                ref = &c.Gamma;
                continue;
            }
            for (std::size_t k = 0; k < c.Gamma.size(); ++k) gx = std::max(gx, std::abs(c.Gamma[k] - (*ref)[k]));
        }
        out.gamma_y_variation.push_back(gx);
        gv = std::max(gv, gx);
    }
    const double tol = options.tolerance;
    out.riemannian = verdict(A, tol);
    out.berwald = verdict(P, tol);
    out.berwald_gamma = verdict(gv, tol);
    out.landsberg = verdict(A_dot, tol);
    out.hierarchy_violation = (out.riemannian.holds && !out.berwald.holds) ||
                              (out.berwald.holds && !out.landsberg.holds);
    out.berwald_tests_agree = out.berwald.holds == out.berwald_gamma.holds;
    return out;
}

Classification classify(const FinslerMetric& metric, std::span<const double> x, const ClassifyOptions& options) {
    return classify(metric, classification_probes(x, options.probe_offset),
                    default_directions(metric.dimension(), options.directions), options);
}

}  // namespace finsler::tools
