#include "finsler/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace finsler {

std::vector<double> symmetric_eigenvalues(std::span<const double> a, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (a[i * n + j] + a[j * n + i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + n};
}

}  // namespace finsler
