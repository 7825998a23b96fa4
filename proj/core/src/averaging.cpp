#include "finsler/averaging.hpp"

#include <cmath>

#include "finsler/error.hpp"
#include "finsler/linalg.hpp"
#include "finsler/parallel.hpp"

namespace finsler {

namespace {

inline int i2(int n, int a, int b) { return a * n + b; }
inline int i3(int n, int a, int b, int c) { return (a * n + b) * n + c; }

// Component-wise pairwise sums of per-node contributions.
std::vector<double> reduce_nodes(const std::vector<std::vector<double>>& per_node, std::size_t width) {
    std::vector<double> out(width), column(per_node.size());
    for (std::size_t c = 0; c < width; ++c) {
        for (std::size_t a = 0; a < per_node.size(); ++a) column[a] = per_node[a][c];
        out[c] = pairwise_sum(column);
    }
    return out;
}

double richardson(const std::function<double(double)>& f, double h) {
    const double d1 = (f(h) - f(-h)) / (2.0 * h);
    const double d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

Measure Measure::from_expression(Expression f) {
    if (!f.parameters().empty()) throw InputError("measure has unbound parameter '" + f.parameters().front() + "'");
    Measure m;
    m.f_ = std::move(f);
    return m;
}

double Measure::operator()(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) const {
    if (!f_) return 1.0;
    const double F = metric.F(x, y);
    std::vector<double> u(y.begin(), y.end());
    for (double& v : u) v /= F;
    const double value = evaluate<double>(*f_, EvalEnv<double>{x, u, {}});
    if (!(value > 0.0)) throw DomainError("measure is not positive (f = " + std::to_string(value) + ")");
    return value;
}

std::vector<double> Measure::dx(const FinslerMetric& metric, std::span<const double> x,
                                std::span<const double> y) const {
    const int n = metric.dimension();
    if (!f_) return std::vector<double>(n, 0.0);
    const auto xs = Jet::seed(x, 1);
    std::vector<Jet> ys;
    for (int i = 0; i < n; ++i) ys.emplace_back(n, 1, y[i]);
    const Jet F = metric.F(xs, ys);
    for (Jet& v : ys) v = v / F;
    const Jet f = evaluate<Jet>(*f_, EvalEnv<Jet>{xs, ys, {}});
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = f.partial(i);
    return out;
}

AveragedMetricValue averaged_metric_value(const FinslerMetric& metric, const Measure& measure,
                                          std::span<const double> x, const SphereGrid& grid, int workers) {
    const int n = metric.dimension();
    const auto samples = sample_indicatrix(metric, x, grid, workers);
    const std::size_t width = n * n + 2;
    std::vector<std::vector<double>> per_node(samples.size(), std::vector<double>(width));
    parallel_for(samples.size(), workers, [&](std::size_t a) {
        const auto& s = samples[a];
        const MetricAt m = metric_at(metric, x, s.y);
        const double W = s.volume_weight();
        const double f = measure(metric, x, s.y);
        auto& row = per_node[a];
        for (int p = 0; p < n * n; ++p) row[p] = W * f * m.g[p];
        row[n * n] = W;
        row[n * n + 1] = W * f;
    });
    const auto sums = reduce_nodes(per_node, width);
    AveragedMetricValue v;
    v.volume = sums[n * n];
    v.mean_f = sums[n * n + 1] / v.volume;
    v.h.assign(sums.begin(), sums.begin() + n * n);
    for (double& c : v.h) c /= v.volume;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) v.h[i2(n, j, i)] = v.h[i2(n, i, j)];
    return v;
}

std::vector<double> averaged_metric(const FinslerMetric& metric, const Measure& measure, std::span<const double> x,
                                    const SphereGrid& grid, int workers) {
    return averaged_metric_value(metric, measure, x, grid, workers).h;
}

double averaged_scalar(const FinslerMetric& metric, const Integrand& phi, std::span<const double> x,
                       const SphereGrid& grid, int workers) {
    const auto samples = sample_indicatrix(metric, x, grid, workers);
    std::vector<double> num(samples.size()), den(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t a) {
        den[a] = samples[a].volume_weight();
        num[a] = phi(x, samples[a].y) * den[a];
    });
    return pairwise_sum(num) / pairwise_sum(den);
}

TensorTable theta(const FinslerMetric& metric, std::span<const double> h, std::span<const double> x,
                  std::span<const double> y) {
    const int n = metric.dimension();
    const auto h_inv = inverse<double>(h, n);
    const MetricAt m = metric_at(metric, x, y);
    TensorTable t("theta", n, 1, 1, x, y);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int l = 0; l < n; ++l) acc += h_inv[i2(n, i, l)] * m.g[i2(n, l, j)];
            t.data[i2(n, i, j)] = acc;
        }
    return t;
}

TensorTable levi_civita_direct(const FinslerMetric& metric, const Measure& measure, std::span<const double> x,
                               const SphereGrid& grid, double fd_step, int workers) {
    const int n = metric.dimension();
    const auto h = averaged_metric(metric, measure, x, grid, workers);
    const auto h_inv = inverse<double>(h, n);
    // dh[l][i][j] = d_l h_ij
    std::vector<double> dh(n * n * n);
    for (int l = 0; l < n; ++l) {
        std::vector<std::vector<double>> cache;
        auto h_at = [&](double step) {
            std::vector<double> xs(x.begin(), x.end());
            xs[l] += step;
            return averaged_metric(metric, measure, xs, grid, workers);
        };
        const auto hp = h_at(fd_step), hm = h_at(-fd_step);
        const auto hp2 = h_at(0.5 * fd_step), hm2 = h_at(-0.5 * fd_step);
        for (int p = 0; p < n * n; ++p) {
            const double d1 = (hp[p] - hm[p]) / (2.0 * fd_step);
            const double d2 = (hp2[p] - hm2[p]) / fd_step;
            dh[l * n * n + p] = (4.0 * d2 - d1) / 3.0;
        }
    }
    TensorTable G("Gamma_h", n, 1, 2, x, {}, "symmetric(1,2)");
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += h_inv[i2(n, k, l)] * (dh[i3(n, i, l, j)] + dh[i3(n, j, i, l)] - dh[i3(n, l, i, j)]);
                G.data[i3(n, k, i, j)] = 0.5 * acc;
            }
    return G;
}

ChristoffelDecomposition levi_civita_decomposed(const FinslerMetric& metric, const Measure& measure,
                                                std::span<const double> x, const SphereGrid& grid, double fd_step,
                                                int workers) {
    const int n = metric.dimension();
    const int n2 = n * n, n3 = n * n * n;
    const auto samples = sample_indicatrix(metric, x, grid, workers);

    struct Node {
        double W = 0.0, f = 0.0;
        std::vector<double> g, gamma, T, L, df;
    };
    std::vector<Node> nodes(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t a) {
        const auto& s = samples[a];
        Node& nd = nodes[a];
        const PointTensors t = point_tensors(metric, x, s.y);
        nd.W = s.volume_weight();
        nd.f = measure(metric, x, s.y);
        nd.df = measure.dx(metric, x, s.y);
        nd.g = t.chern.g.data;
        nd.gamma = t.chern.gamma.data;
        nd.T.assign(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) nd.T[i] += t.chern.g_inv.data[i2(n, p, q)] * t.A_dot.data[i3(n, p, q, i)];
        // log of the node density sqrt(det g(x, u)) F(x, u)^-n at fixed u
        nd.L.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            auto density = [&](double step) {
                std::vector<double> xs(x.begin(), x.end());
                xs[i] += step;
                const MetricAt m = metric_at(metric, xs, s.u);
                return std::log(m.sqrt_det) - n * std::log(m.F);
            };
            nd.L[i] = richardson(density, fd_step);
        }
    });

    // First pass: V, h and <T>_1.
    std::vector<std::vector<double>> first(nodes.size(), std::vector<double>(n2 + 1 + n));
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const Node& nd = nodes[a];
        for (int p = 0; p < n2; ++p) first[a][p] = nd.W * nd.f * nd.g[p];
        first[a][n2] = nd.W;
        for (int i = 0; i < n; ++i) first[a][n2 + 1 + i] = nd.W * nd.T[i];
    }
    const auto s1 = reduce_nodes(first, n2 + 1 + n);
    const double V = s1[n2];
    std::vector<double> h(s1.begin(), s1.begin() + n2);
    for (double& v : h) v /= V;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) h[i2(n, j, i)] = h[i2(n, i, j)];
    std::vector<double> Tm(n);
    for (int i = 0; i < n; ++i) Tm[i] = s1[n2 + 1 + i] / V;
    const auto h_inv = inverse<double>(h, n);

    // Second pass: node integrands of the four terms and the displayed variants.
    enum { kThetaGamma, kLog, kF, kGradDisplayed, kLogDisplayed, kTerms };
    std::vector<std::vector<double>> second(nodes.size(), std::vector<double>(kTerms * n3));
    parallel_for(nodes.size(), workers, [&](std::size_t a) {
        const Node& nd = nodes[a];
        const auto& g = nd.g;
        std::vector<double> th(n2);  // theta^k_j
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) acc += h_inv[i2(n, k, l)] * g[i2(n, l, j)];
                th[i2(n, k, j)] = acc;
            }
        auto& row = second[a];
        const double Wf = nd.W * nd.f;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const int p = i3(n, k, i, j);
                    double tg = 0.0;
                    for (int l = 0; l < n; ++l) tg += th[i2(n, k, l)] * nd.gamma[i3(n, l, i, j)];
                    double hL = 0.0, hT = 0.0, fd = 0.0;
                    for (int l = 0; l < n; ++l) {
                        hL += h_inv[i2(n, k, l)] * nd.L[l];
                        hT += h_inv[i2(n, k, l)] * nd.T[l];
                        fd += h_inv[i2(n, k, l)] *
                              (nd.df[i] * g[i2(n, l, j)] + nd.df[j] * g[i2(n, i, l)] - nd.df[l] * g[i2(n, i, j)]);
                    }
                    row[kThetaGamma * n3 + p] = Wf * tg;
                    row[kLog * n3 + p] = 0.5 * Wf * (th[i2(n, k, j)] * nd.L[i] + th[i2(n, k, i)] * nd.L[j] - g[i2(n, i, j)] * hL);
                    row[kF * n3 + p] = 0.5 * nd.W * fd;
                    row[kGradDisplayed * n3 + p] =
                        0.5 * Wf * (th[i2(n, k, j)] * nd.T[i] + th[i2(n, k, i)] * nd.T[j] - h[i2(n, i, j)] * hT);
                    row[kLogDisplayed * n3 + p] =
                        0.5 * Wf * (th[i2(n, k, j)] * nd.L[i] + th[i2(n, k, i)] * nd.L[j] - h[i2(n, i, j)] * hL);
                }
    });
    auto s2 = reduce_nodes(second, kTerms * n3);
    for (double& v : s2) v /= V;

    ChristoffelDecomposition d;
    d.volume = V;
    d.mean_trace = Tm;
    d.h = h;
    auto table = [&](const char* name, int which) {
        TensorTable t(name, n, 1, 2, x, {}, "symmetric(1,2)");
        if (which >= 0) std::copy(s2.begin() + which * n3, s2.begin() + (which + 1) * n3, t.data.begin());
        return t;
    };
    d.theta_gamma = table("theta_gamma", kThetaGamma);
    d.log_det = table("log_sqrt_det_g", kLog);
    d.f_term = table("f_term", kF);
    d.grad_vol_displayed = table("grad_vol_displayed", kGradDisplayed);
    d.log_det_displayed = table("log_sqrt_det_g_displayed", kLogDisplayed);
    d.grad_vol = table("grad_vol", -1);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double hT = 0.0;
                for (int l = 0; l < n; ++l) hT += h_inv[i2(n, k, l)] * Tm[l];
                d.grad_vol.data[i3(n, k, i, j)] =
                    0.5 * ((k == j ? Tm[i] : 0.0) + (k == i ? Tm[j] : 0.0) - h[i2(n, i, j)] * hT);
            }
    d.sum = table("sum", -1);
    d.sum_displayed = table("sum_displayed", -1);
    for (int p = 0; p < n3; ++p) {
        d.sum.data[p] = d.grad_vol.data[p] + d.theta_gamma.data[p] + d.log_det.data[p] + d.f_term.data[p];
        d.sum_displayed.data[p] = d.grad_vol_displayed.data[p] + d.theta_gamma.data[p] +
                                  d.log_det_displayed.data[p] + d.f_term.data[p];
    }
    return d;
}

SphereInvariance sphere_invariance_check(const FinslerMetric& metric, std::span<const double> x,
                                         std::span<const double> lambdas, const SphereGrid& grid, int workers) {
    const int n = metric.dimension();
    const int n3 = n * n * n;
    const auto h = averaged_metric(metric, Measure{}, x, grid, workers);
    const auto h_inv = inverse<double>(h, n);
    auto average_on = [&](double lambda) {
        const auto samples = sample_indicatrix(metric, x, grid, workers, lambda);
        std::vector<std::vector<double>> per_node(samples.size(), std::vector<double>(n3 + 1));
        parallel_for(samples.size(), workers, [&](std::size_t a) {
            const ChernData c = chern_coefficients(metric, x, samples[a].y);
            const double W = samples[a].volume_weight();
            auto& row = per_node[a];
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double acc = 0.0;
                        for (int m = 0; m < n; ++m)
                            for (int l = 0; l < n; ++l)
                                acc += h_inv[i2(n, k, m)] * c.g.data[i2(n, m, l)] * c.gamma.data[i3(n, l, i, j)];
                        row[i3(n, k, i, j)] = W * acc;
                    }
            row[n3] = W;
        });
        const auto s = reduce_nodes(per_node, n3 + 1);
        TensorTable t("theta_gamma", n, 1, 2, x, {}, "symmetric(1,2)");
        for (int p = 0; p < n3; ++p) t.data[p] = s[p] / s[n3];
        return t;
    };
    SphereInvariance out;
    const TensorTable base = average_on(1.0);
    for (double lambda : lambdas) {
        if (!(lambda > 0.0)) throw InputError("sphere radius must be positive");
        out.lambdas.push_back(lambda);
        out.averages.push_back(average_on(lambda));
        out.max_deviation = std::max(out.max_deviation, max_abs_difference(out.averages.back(), base));
    }
    return out;
}

}  // namespace finsler
