#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finsler/error.hpp"
#include "finsler/jet.hpp"

namespace finsler {

// Row-major n x n matrices over double or Jet.

template <class T>
T zero_like(const T& proto) {
    return proto * 0.0;
}

// Gauss-Jordan with partial pivoting on the value part.
template <class T>
std::vector<T> inverse(std::span<const T> a, int n, double* determinant = nullptr) {
    std::vector<T> m(a.begin(), a.end());
    std::vector<T> inv(n * n, zero_like(a[0]));
    for (int i = 0; i < n; ++i) inv[i * n + i] += 1.0;
    double scale = 0.0;
    for (const T& v : m) scale = std::max(scale, std::fabs(value_of(v)));
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(value_of(m[r * n + c])) > std::fabs(value_of(m[pivot * n + c]))) pivot = r;
        const double p = value_of(m[pivot * n + c]);
        if (!(std::fabs(p) > 1e-14 * std::max(scale, 1e-300)))
            throw SingularMatrixError("singular matrix (pivot " + std::to_string(p) + ")");
        if (pivot != c) {
            det = -det;
            for (int k = 0; k < n; ++k) {
                std::swap(m[pivot * n + k], m[c * n + k]);
                std::swap(inv[pivot * n + k], inv[c * n + k]);
            }
        }
        det *= p;
        const T piv = m[c * n + c];
        for (int k = 0; k < n; ++k) {
            m[c * n + k] = m[c * n + k] / piv;
            inv[c * n + k] = inv[c * n + k] / piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const T f = m[r * n + c];
            for (int k = 0; k < n; ++k) {
                m[r * n + k] -= f * m[c * n + k];
                inv[r * n + k] -= f * inv[c * n + k];
            }
        }
    }
    if (determinant) *determinant = det;
    return inv;
}

// Determinant by Laplace expansion (n <= 4), valid for any scalar type.
template <class T>
T determinant(std::span<const T> a, int n) {
    if (n == 1) return a[0];
    if (n == 2) return a[0] * a[3] - a[1] * a[2];
    T sum = zero_like(a[0]);
    std::vector<T> minor((n - 1) * (n - 1), a[0]);
    for (int c = 0; c < n; ++c) {
        for (int r = 1; r < n; ++r) {
            int k = 0;
            for (int cc = 0; cc < n; ++cc)
                if (cc != c) minor[(r - 1) * (n - 1) + k++] = a[r * n + cc];
        }
        T term = a[c] * determinant<T>(minor, n - 1);
        if (c % 2) sum -= term;
        else sum += term;
    }
    return sum;
}

// Ascending eigenvalues of a symmetric matrix.
std::vector<double> symmetric_eigenvalues(std::span<const double> a, int n);

}  // namespace finsler
