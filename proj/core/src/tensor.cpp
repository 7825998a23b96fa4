#include "finsler/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "finsler/error.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

// ------------------------------------------------------------ TensorTable

TensorTable::TensorTable(std::string name_, int dimension_, int up_, int down_, std::span<const double> x_,
                         std::span<const double> y_, std::string symmetry_)
    : name(std::move(name_)),
      dimension(dimension_),
      up(up_),
      down(down_),
      x(x_.begin(), x_.end()),
      y(y_.begin(), y_.end()),
      symmetry(std::move(symmetry_)) {
    std::size_t count = 1;
    for (int r = 0; r < up + down; ++r) count *= dimension;
    data.assign(count, 0.0);
}

namespace {

std::size_t flat_index(int n, std::initializer_list<int> idx) {
    std::size_t p = 0;
    for (int i : idx) p = p * n + i;
    return p;
}

}  // namespace

double& TensorTable::at(std::initializer_list<int> idx) {
    if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("tensor index rank mismatch");
    return data[flat_index(dimension, idx)];
}

double TensorTable::at(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::out_of_range("tensor index rank mismatch");
    return data[flat_index(dimension, idx)];
}

double TensorTable::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::fabs(v));
    return m;
}

double TensorTable::symmetry_residual() const {
    if (symmetry.empty()) return 0.0;
    const int r = rank();
    const int n = dimension;
    std::vector<int> idx(r), swapped(r);
    auto flat = [&](const std::vector<int>& v) {
        std::size_t p = 0;
        for (int i : v) p = p * n + i;
        return p;
    };
    std::vector<std::pair<int, int>> pairs;
    double sign = 1.0;
    if (symmetry == "total") {
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b) pairs.push_back({a, b});
    } else {
        int a = 0, b = 0;
        if (std::sscanf(symmetry.c_str(), "symmetric(%d,%d)", &a, &b) == 2) {
            pairs.push_back({a, b});
        } else if (std::sscanf(symmetry.c_str(), "antisymmetric(%d,%d)", &a, &b) == 2) {
            pairs.push_back({a, b});
            sign = -1.0;
        } else {
            return 0.0;
        }
    }
    double worst = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
        std::size_t q = p;
        for (int s = r - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(q % n);
            q /= n;
        }
        for (auto [a, b] : pairs) {
            swapped = idx;
            std::swap(swapped[a], swapped[b]);
            worst = std::max(worst, std::fabs(data[p] - sign * data[flat(swapped)]));
        }
    }
    return worst;
}

double max_abs_difference(const TensorTable& a, const TensorTable& b) {
    if (a.data.size() != b.data.size()) throw std::invalid_argument("tensor shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::fabs(a.data[i] - b.data[i]));
    return m;
}

// ------------------------------------------------------------- jet pipeline

namespace {

void require_direction(std::span<const double> y) {
    double norm = 0.0;
    for (double v : y) norm += v * v;
    if (std::sqrt(norm) < kMinDirectionNorm)
        throw DomainError("y is on the zero section (|y| < 1e-12)");
}

void require_shape(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    const int n = metric.dimension();
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
        throw InputError("point has wrong dimension (metric dimension " + std::to_string(n) + ")");
    require_direction(y);
}

inline int i2(int n, int a, int b) { return a * n + b; }
inline int i3(int n, int a, int b, int c) { return (a * n + b) * n + c; }

// All Chern objects as jets of order r in z = (x, y), built from one jet of
// F^2 of order r + 3.
struct JetGeometry {
    int n = 0;
    int r = 0;
    Jet F;
    std::vector<Jet> y;
    std::vector<Jet> g, g_inv;
    std::vector<Jet> dgx, dgy;  // [k][i][j] = d_k g_ij
    std::vector<Jet> A, gamma, N, Gamma;
};

JetGeometry jet_geometry(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y,
                         int r) {
    require_shape(metric, x, y);
    const int n = metric.dimension();
    const int K = r + 3;
    std::vector<double> z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    const std::vector<Jet> seeds = Jet::seed(z, K);
    const std::span<const Jet> zx(seeds.data(), n), zy(seeds.data() + n, n);

    JetGeometry G;
    G.n = n;
    G.r = r;
    const Jet Fk = metric.F(zx, zy);
    if (Fk.value() <= 0.0) throw DomainError("F is not positive at this point");
    const Jet F2 = Fk * Fk;

    std::vector<Jet> g_full(n * n);
    for (int i = 0; i < n; ++i) {
        const Jet di = F2.derivative(n + i);
        for (int j = i; j < n; ++j) {
            g_full[i2(n, i, j)] = di.derivative(n + j) * 0.5;
            g_full[i2(n, j, i)] = g_full[i2(n, i, j)];
        }
    }
    G.F = Fk.truncated(r);
    for (int k = 0; k < n; ++k) G.y.push_back(zy[k].truncated(r));
    G.g.resize(n * n);
    for (int p = 0; p < n * n; ++p) G.g[p] = g_full[p].truncated(r);
    G.dgx.resize(n * n * n);
    G.dgy.resize(n * n * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                G.dgx[i3(n, k, i, j)] = g_full[i2(n, i, j)].derivative(k);
                G.dgy[i3(n, k, i, j)] = g_full[i2(n, i, j)].derivative(n + k);
                G.dgx[i3(n, k, j, i)] = G.dgx[i3(n, k, i, j)];
                G.dgy[i3(n, k, j, i)] = G.dgy[i3(n, k, i, j)];
            }
    G.g_inv = inverse<Jet>(G.g, n);

    const Jet zero = G.F.constant(0.0);
    const Jet half_F = G.F * 0.5;
    G.A.assign(n * n * n, zero);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const Jet v = half_F * G.dgy[i3(n, k, i, j)];
                for (auto [a, b, c] : {std::array{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}})
                    G.A[i3(n, a, b, c)] = v;
            }

    // Christoffel combinations of the first kind: c_s,jk = d_k g_sj - d_s g_jk + d_j g_sk
    G.gamma.assign(n * n * n, zero);
    std::vector<Jet> first(n * n * n, zero);
    for (int s = 0; s < n; ++s)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                first[i3(n, s, j, k)] = (G.dgx[i3(n, k, s, j)] - G.dgx[i3(n, s, j, k)] + G.dgx[i3(n, j, s, k)]) * 0.5;
                first[i3(n, s, k, j)] = first[i3(n, s, j, k)];
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet acc = zero;
                for (int s = 0; s < n; ++s) acc += G.g_inv[i2(n, i, s)] * first[i3(n, s, j, k)];
                G.gamma[i3(n, i, j, k)] = acc;
                G.gamma[i3(n, i, k, j)] = acc;
            }

    // A^i_jk
    std::vector<Jet> A_up(n * n * n, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet acc = zero;
                for (int l = 0; l < n; ++l) acc += G.g_inv[i2(n, i, l)] * G.A[i3(n, l, j, k)];
                A_up[i3(n, i, j, k)] = acc;
                A_up[i3(n, i, k, j)] = acc;
            }

    // gamma^k_rs y^r y^s
    std::vector<Jet> spray(n, zero);
    for (int k = 0; k < n; ++k) {
        Jet acc = zero;
        for (int r_ = 0; r_ < n; ++r_)
            for (int s = 0; s < n; ++s) acc += G.gamma[i3(n, k, r_, s)] * G.y[r_] * G.y[s];
        spray[k] = acc;
    }
    const Jet inv_F = 1.0 / G.F;
    G.N.assign(n * n, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet acc = zero;
            for (int k = 0; k < n; ++k) acc += G.gamma[i3(n, i, j, k)] * G.y[k];
            Jet corr = zero;
            for (int k = 0; k < n; ++k) corr += A_up[i3(n, i, j, k)] * spray[k];
            G.N[i2(n, i, j)] = acc - corr * inv_F;
        }

    // B_ijk = A_ijm N^m_k, then Gamma^l_jk = gamma^l_jk - g^li (B_ijk - B_jki + B_kij) / F
    std::vector<Jet> B(n * n * n, zero);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Jet acc = zero;
                for (int m = 0; m < n; ++m) acc += G.A[i3(n, i, j, m)] * G.N[i2(n, m, k)];
                B[i3(n, i, j, k)] = acc;
            }
    G.Gamma.assign(n * n * n, zero);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet acc = zero;
                for (int i = 0; i < n; ++i)
                    acc += G.g_inv[i2(n, l, i)] * (B[i3(n, i, j, k)] - B[i3(n, j, k, i)] + B[i3(n, k, i, j)]);
                const Jet v = G.gamma[i3(n, l, j, k)] - acc * inv_F;
                G.Gamma[i3(n, l, j, k)] = v;
                G.Gamma[i3(n, l, k, j)] = v;
            }
    return G;
}

void fill(TensorTable& t, const std::vector<Jet>& jets) {
    for (std::size_t p = 0; p < jets.size(); ++p) t.data[p] = jets[p].value();
}

ChernData chern_from(const JetGeometry& G, std::span<const double> x, std::span<const double> y) {
    const int n = G.n;
    ChernData d;
    d.F = G.F.value();
    d.g = TensorTable("g", n, 0, 2, x, y, "symmetric(0,1)");
    d.g_inv = TensorTable("g_inv", n, 2, 0, x, y, "symmetric(0,1)");
    d.A = TensorTable("A", n, 0, 3, x, y, "total");
    d.gamma = TensorTable("gamma", n, 1, 2, x, y, "symmetric(1,2)");
    d.N = TensorTable("N", n, 1, 1, x, y);
    d.Gamma = TensorTable("Gamma", n, 1, 2, x, y, "symmetric(1,2)");
    fill(d.g, G.g);
    fill(d.g_inv, G.g_inv);
    fill(d.A, G.A);
    fill(d.gamma, G.gamma);
    fill(d.N, G.N);
    fill(d.Gamma, G.Gamma);
    return d;
}

// y-only jets: F^2 of order k in the n components of y, x held fixed.
Jet squared_norm_in_y(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y,
                      int k) {
    require_shape(metric, x, y);
    const int n = metric.dimension();
    std::vector<Jet> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.emplace_back(n, k, x[i]);
    const std::vector<Jet> ys = Jet::seed(y, k);
    const Jet F = metric.F(xs, ys);
    if (F.value() <= 0.0) throw DomainError("F is not positive at this point");
    return F * F;
}

}  // namespace

MetricAt metric_at(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    const int n = metric.dimension();
    const Jet F2 = squared_norm_in_y(metric, x, y, 2);
    MetricAt m;
    m.F = std::sqrt(F2.value());
    m.g.resize(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> alpha(n, 0);
            alpha[i] += 1;
            alpha[j] += 1;
            m.g[i2(n, i, j)] = 0.5 * F2.extract(alpha);
        }
    const double det = determinant<double>(m.g, n);
    if (!(det > 0.0)) throw DomainError("fundamental tensor is not positive definite (det g = " + std::to_string(det) + ")");
    m.sqrt_det = std::sqrt(det);
    return m;
}

TensorTable fundamental_tensor(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    const int n = metric.dimension();
    const Jet F2 = squared_norm_in_y(metric, x, y, 2);
    TensorTable g("g", n, 0, 2, x, y, "symmetric(0,1)");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> alpha(n, 0);
            alpha[i] += 1;
            alpha[j] += 1;
            g.data[i2(n, i, j)] = 0.5 * F2.extract(alpha);
        }
    const auto ev = symmetric_eigenvalues(g.data, n);
    if (!(ev.front() > 0.0))
        throw NumericalError("fundamental tensor is not positive definite (min eigenvalue " +
                             std::to_string(ev.front()) + ")");
    return g;
}

TensorTable cartan_tensor(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    const int n = metric.dimension();
    const Jet F2 = squared_norm_in_y(metric, x, y, 3);
    const double F = std::sqrt(F2.value());
    TensorTable A("A", n, 0, 3, x, y, "total");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                std::vector<int> alpha(n, 0);
                alpha[i] += 1;
                alpha[j] += 1;
                alpha[k] += 1;
                A.data[i3(n, i, j, k)] = 0.25 * F * F2.extract(alpha);
            }
    return A;
}

TensorTable formal_christoffel(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    return chern_coefficients(metric, x, y).gamma;
}

TensorTable nonlinear_connection(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    return chern_coefficients(metric, x, y).N;
}

ChernData chern_coefficients(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    return chern_from(jet_geometry(metric, x, y, 0), x, y);
}

StructureResiduals verify_structure_equations(const ChernData& data, const FinslerMetric& metric,
                                              std::span<const double> x, std::span<const double> y) {
    const int n = metric.dimension();
    // Independent derivatives of g: F^2 jets of order 3 in (x, y).
    std::vector<double> z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    require_shape(metric, x, y);
    const auto seeds = Jet::seed(z, 3);
    const Jet F = metric.F(std::span<const Jet>(seeds.data(), n), std::span<const Jet>(seeds.data() + n, n));
    const Jet F2 = F * F;
    std::vector<double> dgx(n * n * n), dgy(n * n * n), g(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Jet gij = F2.derivative(n + i).derivative(n + j) * 0.5;
            g[i2(n, i, j)] = gij.value();
            for (int k = 0; k < n; ++k) {
                dgx[i3(n, k, i, j)] = gij.partial(k);
                dgy[i3(n, k, i, j)] = gij.partial(n + k);
            }
        }
    StructureResiduals res;
    const auto& Gm = data.Gamma.data;
    const auto& N = data.N.data;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                res.torsion = std::max(res.torsion, std::fabs(Gm[i3(n, i, j, k)] - Gm[i3(n, i, k, j)]));
                double delta = dgx[i3(n, k, i, j)];
                for (int l = 0; l < n; ++l) delta -= N[i2(n, l, k)] * dgy[i3(n, l, i, j)];
                double conn = 0.0;
                for (int l = 0; l < n; ++l)
                    conn += g[i2(n, l, j)] * Gm[i3(n, l, i, k)] + g[i2(n, i, l)] * Gm[i3(n, l, j, k)];
                res.horizontal = std::max(res.horizontal, std::fabs(delta - conn));
                res.vertical = std::max(res.vertical,
                                        std::fabs(F.value() * dgy[i3(n, k, i, j)] - 2.0 * data.A.data[i3(n, i, j, k)]));
            }
    return res;
}

std::vector<double> horizontal_derivative(const FinslerMetric& metric, std::span<const double> x,
                                          std::span<const double> y, const JetField& phi) {
    const int n = metric.dimension();
    const ChernData d = chern_coefficients(metric, x, y);
    std::vector<double> z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    const auto seeds = Jet::seed(z, 1);
    const Jet v = phi(std::span<const Jet>(seeds.data(), n), std::span<const Jet>(seeds.data() + n, n));
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double acc = v.partial(j);
        for (int i = 0; i < n; ++i) acc -= d.N.data[i2(n, i, j)] * v.partial(n + i);
        out[j] = acc;
    }
    return out;
}

PointTensors point_tensors(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    const JetGeometry G = jet_geometry(metric, x, y, 1);
    const int n = G.n;
    PointTensors t;
    t.chern = chern_from(G, x, y);
    const double F = t.chern.F;
    const auto& N = t.chern.N.data;
    const auto& Gm = t.chern.Gamma.data;
    const auto& g_inv = t.chern.g_inv.data;

    t.dGamma_dx = TensorTable("dGamma_dx", n, 1, 3, x, y);
    t.dGamma_dy = TensorTable("dGamma_dy", n, 1, 3, x, y);
    t.dN_dy = TensorTable("dN_dy", n, 1, 2, x, y);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                t.dN_dy.data[i3(n, i, j, k)] = G.N[i2(n, i, j)].partial(n + k);
                for (int l = 0; l < n; ++l) {
                    const int p = i3(n, i, j, k) * n + l;
                    t.dGamma_dx.data[p] = G.Gamma[i3(n, i, j, k)].partial(l);
                    t.dGamma_dy.data[p] = G.Gamma[i3(n, i, j, k)].partial(n + l);
                }
            }
        }

    // delta Gamma^i_jk / delta x^l
    std::vector<double> dGamma(n * n * n * n);
    for (std::size_t p = 0; p < dGamma.size(); ++p) {
        const int l = static_cast<int>(p % n);
        const std::size_t base = p - l;
        double v = t.dGamma_dx.data[p];
        for (int m = 0; m < n; ++m) v -= N[i2(n, m, l)] * t.dGamma_dy.data[base + m];
        dGamma[p] = v;
    }
    auto dG = [&](int i, int j, int k, int l) { return dGamma[i3(n, i, j, k) * n + l]; };

    t.R = TensorTable("R", n, 1, 3, x, y, "antisymmetric(2,3)");
    t.P = TensorTable("P", n, 1, 3, x, y, "symmetric(1,2)");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = dG(i, j, l, k) - dG(i, j, k, l);
                    for (int h = 0; h < n; ++h)
                        v += Gm[i3(n, i, h, k)] * Gm[i3(n, h, j, l)] - Gm[i3(n, i, h, l)] * Gm[i3(n, h, j, k)];
                    const int p = i3(n, i, j, k) * n + l;
                    t.R.data[p] = v;
                    t.P.data[p] = -F * t.dGamma_dy.data[p];
                }

    // A_ijk|s, then A_dot_ijk = A_ijk|s y^s / F
    const auto& A = t.chern.A.data;
    t.A_dot = TensorTable("A_dot", n, 0, 3, x, y, "total");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Jet& Aj = G.A[i3(n, i, j, k)];
                double acc = 0.0;
                for (int s = 0; s < n; ++s) {
                    double v = Aj.partial(s);
                    for (int m = 0; m < n; ++m) v -= N[i2(n, m, s)] * Aj.partial(n + m);
                    for (int l = 0; l < n; ++l)
                        v -= A[i3(n, l, j, k)] * Gm[i3(n, l, i, s)] + A[i3(n, i, l, k)] * Gm[i3(n, l, j, s)] +
                             A[i3(n, i, j, l)] * Gm[i3(n, l, k, s)];
                    acc += v * y[s];
                }
                t.A_dot.data[i3(n, i, j, k)] = acc / F;
            }
    t.tr_A_dot.assign(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m)
                    acc += g_inv[i2(n, i, j)] * g_inv[i2(n, k, m)] * t.A_dot.data[i3(n, i, j, m)];
        t.tr_A_dot[k] = acc;
    }
    return t;
}

Curvatures curvatures(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    PointTensors t = point_tensors(metric, x, y);
    return {std::move(t.R), std::move(t.P)};
}

Landsberg landsberg_tensor(const FinslerMetric& metric, std::span<const double> x, std::span<const double> y) {
    PointTensors t = point_tensors(metric, x, y);
    return {std::move(t.A_dot), std::move(t.tr_A_dot)};
}

TensorTable flag_component_P(const PointTensors& t) {
    const int n = t.chern.g.dimension;
    const auto& g = t.chern.g.data;
    const auto& y = t.chern.g.y;
    std::vector<double> ell(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m) ell[i] += g[i2(n, i, m)] * y[m] / t.chern.F;
    TensorTable out("lP", n, 0, 3, t.chern.g.x, y);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i) acc += ell[i] * t.P.data[i3(n, i, j, k) * n + l];
                out.data[i3(n, j, k, l)] = acc;
            }
    return out;
}

}  // namespace finsler
