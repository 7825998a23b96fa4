#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

using Fn = std::function<double(std::span<const double>)>;

// Five-point central difference in variable `var`.
inline double d1(const Fn& f, std::vector<double> p, int var, double h) {
    const double c = p[var];
    auto at = [&](double s) {
        p[var] = c + s * h;
        return f(p);
    };
    return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
}

// Nested five-point differences, one variable per entry of `vars`.
inline double partial(const Fn& f, std::span<const double> p, std::vector<int> vars, double h) {
    if (vars.empty()) return f(p);
    const int v = vars.back();
    vars.pop_back();
    Fn inner = [&f, vars, h](std::span<const double> q) { return partial(f, q, vars, h); };
    return d1(inner, std::vector<double>(p.begin(), p.end()), v, h);
}

// F(x, y) written as a plain function of the 2n coordinates (x, y).
using Finsler = std::function<double(std::span<const double> x, std::span<const double> y)>;

inline Fn squared(const Finsler& F, int n) {
    return [F, n](std::span<const double> z) {
        double v = F(z.first(n), z.subspan(n, n));
        return v * v;
    };
}

inline std::vector<double> concat(std::span<const double> x, std::span<const double> y) {
    std::vector<double> z(x.begin(), x.end());
    z.insert(z.end(), y.begin(), y.end());
    return z;
}

// g_ij = 1/2 d^2 F^2 / dy^i dy^j
inline std::vector<double> g(const Finsler& F, std::span<const double> x, std::span<const double> y,
                             double h = 1e-3) {
    const int n = static_cast<int>(x.size());
    auto z = concat(x, y);
    auto F2 = squared(F, n);
    std::vector<double> out(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i * n + j] = 0.5 * partial(F2, z, {n + i, n + j}, h);
    return out;
}

inline std::vector<double> inverse2(const std::vector<double>& a) {
    const double det = a[0] * a[3] - a[1] * a[2];
    return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

// Levi-Civita symbols Gamma^i_jk of a Riemannian metric x -> a(x) (2-D),
// derivatives of a by five-point differences.
inline std::vector<double> levi_civita2(const std::function<std::vector<double>(std::span<const double>)>& a,
                                        std::span<const double> x, double h = 1e-3) {
    const int n = 2;
    std::vector<double> da(n * n * n);  // d_l a_jk at [(j*n + k)*n + l]
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Fn c = [&, j, k](std::span<const double> p) { return a(p)[j * n + k]; };
            for (int l = 0; l < n; ++l) da[(j * n + k) * n + l] = d1(c, std::vector<double>(x.begin(), x.end()), l, h);
        }
    auto ai = inverse2(a(x));
    std::vector<double> G(n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ai[i * n + l] *
                           (da[(l * n + k) * n + j] + da[(l * n + j) * n + k] - da[(j * n + k) * n + l]);
                G[(i * n + j) * n + k] = 0.5 * acc;
            }
    return G;
}

// Composite Simpson rule on [0, 2 pi] with an even number of panels.
inline double simpson_circle(const std::function<double(double)>& f, int panels = 20000) {
    const double h = 2 * std::numbers::pi / panels;
    double acc = f(0) + f(2 * std::numbers::pi);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4 : 2) * f(i * h);
    return acc * h / 3;
}

}  // namespace oracle
