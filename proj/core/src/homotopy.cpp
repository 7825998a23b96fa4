#include "finsler/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/linalg.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

namespace {

inline int i2(int n, int a, int b) { return a * n + b; }

double quadratic(std::span<const double> M, std::span<const double> v, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += M[i2(n, i, j)] * v[i] * v[j];
    return s;
}

std::vector<double> blend(double t, double varpi, std::span<const double> g, double chi, std::span<const double> h) {
    std::vector<double> M(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) M[p] = (1.0 - t) * varpi * g[p] + t * chi * h[p];
    return M;
}

struct NodeEval {
    double W = 0.0;         // w rho_t^n sqrt(det g_t)
    double sqrt_det = 0.0;  // sqrt(det g_t)
};

NodeEval node_eval(const HomotopyState& s, std::size_t a, double chi, double varpi) {
    const int n = s.dimension;
    const auto M = blend(s.t, varpi, s.g[a], chi, s.h);
    const double det = determinant<double>(M, n);
    const double Q = quadratic(M, s.u[a], n);
    if (!(det > 0.0) || !(Q > 0.0)) {
        std::ostringstream os;
        os << "g_t is not positive definite at node " << a << " (t = " << s.t << ")";
        throw NumericalError(os.str());
    }
    NodeEval e;
    e.sqrt_det = std::sqrt(det);
    e.W = s.grid_weights[a] * std::pow(Q, -0.5 * n) * e.sqrt_det;
    return e;
}

double volume_t(const HomotopyState& s, const std::vector<double>& chi, const std::vector<double>& varpi) {
    std::vector<double> W(s.u.size());
    parallel_for(s.u.size(), s.options.workers, [&](std::size_t a) { W[a] = node_eval(s, a, chi[a], varpi[a]).W; });
    return pairwise_sum(W);
}

// log of the displayed update C = (vol_t / vol_x) sqrt(det g) / sqrt(det g_t)
void log_updates(const HomotopyState& s, const std::vector<double>& chi, const std::vector<double>& varpi,
                 std::vector<double>& out) {
    const double vt = volume_t(s, chi, varpi);
    out.resize(s.u.size());
    parallel_for(s.u.size(), s.options.workers, [&](std::size_t a) {
        const NodeEval e = node_eval(s, a, chi[a], varpi[a]);
        out[a] = std::log(vt / s.vol_x) + std::log(s.sqrt_det_g[a]) - std::log(e.sqrt_det);
    });
}

double relax(std::vector<double>& gauge, const std::vector<double>& log_c, double omega) {
    double worst = 0.0;
    for (std::size_t a = 0; a < gauge.size(); ++a) {
        const double old = std::log(gauge[a]);
        const double next = (1.0 - omega) * old + omega * log_c[a];
        worst = std::max(worst, std::fabs(next - old));
        gauge[a] = std::exp(next);
    }
    return worst;
}

void check_bounds(const HomotopyState& s) {
    for (std::size_t a = 0; a < s.chi.size(); ++a) {
        for (double v : {s.chi[a], s.varpi[a]}) {
            if (!(v >= kGaugeLower && v <= kGaugeUpper)) {
                std::ostringstream os;
                os << "gauge left [" << kGaugeLower << ", " << kGaugeUpper << "] at node " << a << " (value " << v
                   << ", t = " << s.t << ", iteration " << s.iterations << ")";
                throw NumericalError(os.str());
            }
        }
    }
}

}  // namespace

HomotopyState solve_gauges(const FinslerMetric& metric, std::span<const double> h, std::span<const double> x,
                           double t, const SphereGrid& grid, const GaugeOptions& options) {
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("homotopy parameter t must lie in [0, 1]");
    if (!(options.relaxation > 0.0 && options.relaxation <= 1.0))
        throw InputError("gauge relaxation must lie in (0, 1]");
    const int n = metric.dimension();
    HomotopyState s;
    s.t = t;
    s.dimension = n;
    s.x.assign(x.begin(), x.end());
    s.h.assign(h.begin(), h.end());
    s.metric = metric;
    s.options = options;

    const auto samples = sample_indicatrix(metric, x, grid, options.workers);
    const std::size_t count = samples.size();
    s.u.resize(count);
    s.ybar.resize(count);
    s.g.resize(count);
    s.sqrt_det_g.resize(count);
    s.grid_weights = grid.weights;
    std::vector<double> W(count);
    parallel_for(count, options.workers, [&](std::size_t a) {
        s.u[a] = samples[a].u;
        s.ybar[a] = samples[a].y;
        const MetricAt m = metric_at(metric, x, samples[a].y);
        s.g[a] = m.g;
        s.sqrt_det_g[a] = m.sqrt_det;
        W[a] = samples[a].volume_weight();
    });
    s.vol_x = pairwise_sum(W);
    s.chi.assign(count, 1.0);
    s.varpi.assign(count, 1.0);

    std::vector<double> log_c;
    for (s.iterations = 1; s.iterations <= options.max_iterations; ++s.iterations) {
        double update = 0.0;
        if (options.variant == GaugeVariant::tied) {
            log_updates(s, s.chi, s.varpi, log_c);
            update = relax(s.chi, log_c, options.relaxation);
            s.varpi = s.chi;
        } else {
            log_updates(s, s.chi, s.varpi, log_c);
            update = relax(s.varpi, log_c, options.relaxation);
            log_updates(s, s.chi, s.varpi, log_c);
            update = std::max(update, relax(s.chi, log_c, options.relaxation));
        }
        s.final_update = update;
        s.update_history.push_back(update);
        check_bounds(s);
        if (update < options.tolerance) {
            s.converged = true;
            break;
        }
    }
    s.iterations = std::min(s.iterations, options.max_iterations);
    s.vol_t = volume_t(s, s.chi, s.varpi);
    return s;
}

double HomotopyState::gauge_at(std::span<const double> y) const {
    const int n = dimension;
    const MetricAt m = metric_at(metric, x, y);
    std::vector<double> B(n * n);
    for (int p = 0; p < n * n; ++p) B[p] = (1.0 - t) * m.g[p] + t * h[p];
    const double det_b = determinant<double>(B, n);
    if (!(det_b > 0.0)) throw NumericalError("g_t is not positive definite");
    // Fixed point of chi = (vol_t / vol_x) sqrt(det g) / (chi^(n/2) sqrt(det B)).
    const double K = (vol_t / vol_x) * m.sqrt_det / std::sqrt(det_b);
    return std::pow(K, 2.0 / (n + 2.0));
}

std::vector<double> HomotopyState::matrix_at(std::span<const double> y) const {
    if (!converged) throw ConvergenceError("homotopy gauges did not converge; refusing to build g_t");
    const double c = gauge_at(y);
    const MetricAt m = metric_at(metric, x, y);
    return blend(t, c, m.g, c, h);
}

double HomotopyState::F_t(std::span<const double> y) const {
    const auto M = matrix_at(y);
    return std::sqrt(quadratic(M, y, dimension));
}

TensorTable interpolated_tensor(const HomotopyState& state, std::span<const double> x, std::span<const double> y) {
    if (!state.converged) throw ConvergenceError("homotopy gauges did not converge; refusing to build g_t");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != state.x[i]) throw InputError("interpolated_tensor: x differs from the state's base point");
    TensorTable T("g_t", state.dimension, 0, 2, x, y, "symmetric(0,1)");
    T.data = state.matrix_at(y);
    return T;
}

HomotopyAverages homotopy_averages(const HomotopyState& s, const Measure& measure) {
    if (!s.converged) throw ConvergenceError("homotopy gauges did not converge");
    const int n = s.dimension;
    const int n2 = n * n, n3 = n2 * n;
    const auto h_inv = inverse<double>(s.h, n);
    const std::size_t count = s.u.size();
    const std::size_t width = n2 + n3 + 1;
    std::vector<std::vector<double>> rows(count, std::vector<double>(width));
    parallel_for(count, s.options.workers, [&](std::size_t a) {
        const auto M = blend(s.t, s.varpi[a], s.g[a], s.chi[a], s.h);
        const double W = node_eval(s, a, s.chi[a], s.varpi[a]).W;
        const double f = measure(s.metric, s.x, s.ybar[a]);
        const auto df = measure.dx(s.metric, s.x, s.ybar[a]);
        auto& row = rows[a];
        for (int p = 0; p < n2; ++p) row[p] = W * f * M[p];
        // theta_t g_t^-1 = h^-1
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < n; ++l)
                        acc += h_inv[i2(n, k, l)] * (df[i] * M[i2(n, l, j)] + df[j] * M[i2(n, i, l)] - df[l] * M[i2(n, i, j)]);
                    row[n2 + (k * n + i) * n + j] = 0.5 * W * acc;
                }
        row[n2 + n3] = W;
    });
    std::vector<double> sums(width), column(count);
    for (std::size_t c = 0; c < width; ++c) {
        for (std::size_t a = 0; a < count; ++a) column[a] = rows[a][c];
        sums[c] = pairwise_sum(column);
    }
    const double V = sums[n2 + n3];
    HomotopyAverages out;
    out.mean_g_t.assign(sums.begin(), sums.begin() + n2);
    for (double& v : out.mean_g_t) v /= V;
    out.f_term = TensorTable("f_term_t", n, 1, 2, s.x, {}, "symmetric(1,2)");
    for (int p = 0; p < n3; ++p) out.f_term.data[p] = sums[n2 + p] / V;
    return out;
}

bool InvarianceReport::all_converged() const {
    return std::all_of(rows.begin(), rows.end(), [](const InvarianceRow& r) { return r.converged; });
}

InvarianceReport invariance_report(const FinslerMetric& metric, const Measure& measure, std::span<const double> x,
                                   std::span<const double> t_list, const SphereGrid& grid,
                                   const InvarianceOptions& options) {
    const int n = metric.dimension();
    InvarianceReport rep;
    const auto hv = averaged_metric_value(metric, measure, x, grid, options.gauge.workers);
    rep.h = hv.h;
    rep.vol_x = hv.volume;

    const HomotopyState s0 = solve_gauges(metric, rep.h, x, 0.0, grid, options.gauge);
    const TensorTable f0 = homotopy_averages(s0, measure).f_term;

    std::vector<std::vector<double>> probe_points{std::vector<double>(x.begin(), x.end())};
    std::vector<std::vector<double>> probe_h{rep.h};
    if (options.shen_probes) {
        for (int i = 0; i < n; ++i)
            for (double sgn : {-1.0, 1.0}) {
                std::vector<double> xp(x.begin(), x.end());
                xp[i] += sgn * options.probe_offset;
                probe_h.push_back(averaged_metric(metric, measure, xp, grid, options.gauge.workers));
                probe_points.push_back(std::move(xp));
            }
    }

    for (double t : t_list) {
        InvarianceRow row;
        row.t = t;
        try {
            const HomotopyState s = solve_gauges(metric, rep.h, x, t, grid, options.gauge);
            row.iterations = s.iterations;
            row.converged = s.converged;
            row.final_update = s.final_update;
            row.vol_t = s.vol_t;
            const auto [cmin, cmax] = std::minmax_element(s.chi.begin(), s.chi.end());
            const auto [vmin, vmax] = std::minmax_element(s.varpi.begin(), s.varpi.end());
            row.chi_min = *cmin;
            row.chi_max = *cmax;
            row.varpi_min = *vmin;
            row.varpi_max = *vmax;
            if (s.converged) {
                const auto avg = homotopy_averages(s, measure);
                for (int p = 0; p < n * n; ++p)
                    row.average_deviation = std::max(row.average_deviation, std::fabs(avg.mean_g_t[p] - rep.h[p]));
                row.f_term_drift = max_abs_difference(avg.f_term, f0);
                auto Ft = [&s](std::span<const double> y) { return s.F_t(y); };
                row.homogeneity_residual = check_homogeneity(Ft, n, 1, 8, 1e-8).max_residual;
                for (std::size_t p = 0; p < probe_points.size() && options.shen_probes; ++p) {
                    const HomotopyState sp =
                        p == 0 ? s : solve_gauges(metric, probe_h[p], probe_points[p], t, grid, options.gauge);
                    ShenProbe probe;
                    probe.x = probe_points[p];
                    probe.vol_t = sp.vol_t;
                    probe.det_min = INFINITY;
                    probe.det_max = -INFINITY;
                    for (std::size_t a = 0; a < sp.u.size(); ++a) {
                        const double d = std::pow(node_eval(sp, a, sp.chi[a], sp.varpi[a]).sqrt_det, 2.0);
                        probe.det_min = std::min(probe.det_min, d);
                        probe.det_max = std::max(probe.det_max, d);
                    }
                    row.probes.push_back(std::move(probe));
                }
                for (const auto& pr : row.probes) {
                    row.probe_vol_spread = std::max(row.probe_vol_spread, std::fabs(pr.vol_t - row.probes[0].vol_t));
                    row.probe_det_spread = std::max({row.probe_det_spread, std::fabs(pr.det_min - row.probes[0].det_min),
                                                     std::fabs(pr.det_max - row.probes[0].det_max)});
                }
            } else {
                row.error = "gauge iteration did not converge (final update " + std::to_string(s.final_update) + ")";
            }
        } catch (const NumericalError& e) {
            row.error = e.what();
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace finsler
