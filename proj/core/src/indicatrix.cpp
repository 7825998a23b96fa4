#include "finsler/indicatrix.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "finsler/error.hpp"
#include "finsler/parallel.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(count, 0.0);
    weights.assign(count, 0.0);
    for (int i = 0; i < (count + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (count == 1) p0 = 1.0, p1 = z;
            dp = count * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        nodes[i] = -z;
        nodes[count - 1 - i] = z;
        weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

int default_resolution(int n) { return n == 2 ? 256 : (n == 3 ? 64 : 32); }

SphereGrid build_grid(int n, int resolution) {
    if (n < 2 || n > 4) throw InputError("sphere grid: dimension must be 2, 3 or 4");
    if (resolution < 4 || (n > 2 && resolution % 2 != 0))
        throw InputError("sphere grid: resolution must be >= 4 (and even for n >= 3)");
    SphereGrid grid;
    grid.dimension = n;
    grid.resolution = resolution;
    const double pi = std::numbers::pi;
    const int N = resolution;
    auto push = [&](std::initializer_list<double> u, double w) {
        grid.nodes.insert(grid.nodes.end(), u);
        grid.weights.push_back(w);
    };
    if (n == 2) {
        for (int k = 0; k < N; ++k) {
            const double t = 2.0 * pi * k / N;
            push({std::cos(t), std::sin(t)}, 2.0 * pi / N);
        }
        grid.descriptor = "trapezoid:" + std::to_string(N);
        return grid;
    }
    std::vector<double> ct, wt;
    gauss_legendre(N / 2, ct, wt);
    const double dphi = 2.0 * pi / N;
    if (n == 3) {
        for (int i = 0; i < N / 2; ++i) {
            const double st = std::sqrt(1.0 - ct[i] * ct[i]);
            for (int k = 0; k < N; ++k) {
                const double phi = dphi * k;
                push({st * std::cos(phi), st * std::sin(phi), ct[i]}, wt[i] * dphi);
            }
        }
        grid.descriptor = "gauss-legendre:" + std::to_string(N / 2) + "x" + std::to_string(N);
        return grid;
    }
    std::vector<double> xp, wp;
    gauss_legendre(N / 2, xp, wp);
    for (int h = 0; h < N / 2; ++h) {
        const double psi = 0.5 * pi * (xp[h] + 1.0);
        const double sp = std::sin(psi), cp = std::cos(psi);
        const double wpsi = 0.5 * pi * wp[h] * sp * sp;
        for (int i = 0; i < N / 2; ++i) {
            const double st = std::sqrt(1.0 - ct[i] * ct[i]);
            for (int k = 0; k < N; ++k) {
                const double phi = dphi * k;
                push({sp * st * std::cos(phi), sp * st * std::sin(phi), sp * ct[i], cp}, wpsi * wt[i] * dphi);
            }
        }
    }
    grid.descriptor = "gauss-legendre:" + std::to_string(N / 2) + "x" + std::to_string(N / 2) + "x" +
                      std::to_string(N);
    return grid;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

std::string node_label(std::size_t a, std::span<const double> u) {
    std::ostringstream os;
    os << "quadrature node " << a << " (u = ";
    for (std::size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
    os << ")";
    return os.str();
}

// Re-throw with the node identity attached, keeping the error category.
template <class Fn>
void at_node(std::size_t a, std::span<const double> u, Fn&& fn) {
    try {
        fn();
    } catch (const InputError& e) {
        throw InputError(node_label(a, u) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(node_label(a, u) + ": " + e.what());
    }
}

}  // namespace

std::vector<IndicatrixSample> sample_indicatrix(const FinslerMetric& metric, std::span<const double> x,
                                                const SphereGrid& grid, int workers, double lambda) {
    const int n = metric.dimension();
    if (grid.dimension != n) throw InputError("sphere grid dimension does not match the metric");
    std::vector<IndicatrixSample> out(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t a) {
        const auto u = grid.node(a);
        at_node(a, u, [&] {
            IndicatrixSample& s = out[a];
            s.u.assign(u.begin(), u.end());
            const double F = metric.F(x, u);
            if (!(F > 0.0)) throw DomainError("F is not positive");
            s.rho = lambda / F;
            s.y.resize(n);
            for (int i = 0; i < n; ++i) s.y[i] = s.rho * u[i];
            s.sqrt_det = metric_at(metric, x, s.y).sqrt_det;
            s.weight = grid.weights[a] * std::pow(s.rho, n);
        });
    });
    return out;
}

double integrate(const FinslerMetric& metric, std::span<const double> x, const SphereGrid& grid,
                 const Integrand& integrand, int workers) {
    const auto samples = sample_indicatrix(metric, x, grid, workers);
    std::vector<double> terms(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t a) {
        at_node(a, samples[a].u, [&] { terms[a] = integrand(x, samples[a].y) * samples[a].volume_weight(); });
    });
    return pairwise_sum(terms);
}

double volume(const FinslerMetric& metric, std::span<const double> x, const SphereGrid& grid, int workers) {
    const auto samples = sample_indicatrix(metric, x, grid, workers);
    std::vector<double> terms(samples.size());
    for (std::size_t a = 0; a < samples.size(); ++a) terms[a] = samples[a].volume_weight();
    return pairwise_sum(terms);
}

BaoShenResult bao_shen_check(const FinslerMetric& metric, std::span<const double> x, std::span<const double> b,
                             const SphereGrid& grid, double fd_step, int workers) {
    const int n = metric.dimension();
    if (static_cast<int>(b.size()) != n) throw InputError("bao-shen: direction has wrong dimension");
    auto vol_at = [&](double h) {
        std::vector<double> xs(x.begin(), x.end());
        for (int i = 0; i < n; ++i) xs[i] += h * b[i];
        return volume(metric, xs, grid, workers);
    };
    auto central = [&](double h) { return (vol_at(h) - vol_at(-h)) / (2.0 * h); };
    BaoShenResult r;
    r.lhs = (4.0 * central(0.5 * fd_step) - central(fd_step)) / 3.0;

    const auto samples = sample_indicatrix(metric, x, grid, workers);
    std::vector<double> terms(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t a) {
        at_node(a, samples[a].u, [&] {
            const PointTensors t = point_tensors(metric, x, samples[a].y);
            const auto& g = t.chern.g.data;
            double gtb = 0.0;
            for (int k = 0; k < n; ++k)
                for (int m = 0; m < n; ++m) gtb += g[k * n + m] * t.tr_A_dot[k] * b[m];
            terms[a] = gtb * samples[a].volume_weight();
        });
    });
    r.rhs = -pairwise_sum(terms);
    r.residual = std::fabs(r.lhs - r.rhs);
    return r;
}

}  // namespace finsler
