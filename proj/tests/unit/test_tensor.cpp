#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/tensor.hpp"
#include "oracles.hpp"
#include "test_metrics.hpp"

using namespace finsler;
namespace zoo = testing_metrics;

namespace {

std::vector<double> conformal_a(std::span<const double> x) {
    const double e = std::exp(2 * x[0]);
    return {e, 0, 0, e};
}

std::vector<double> hyperbolic_a(std::span<const double> x) { return {1, 0, 0, std::exp(2 * x[0])}; }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

const std::vector<double> kX{0.3, 0.1};
const std::vector<double> kY{0.8, -0.45};

}  // namespace

TEST_SUITE("tensor_engine") {

TEST_CASE("fundamental tensor") {
    auto g = fundamental_tensor(zoo::euclidean(), kX, kY);
    CHECK(max_diff(g.data, {1, 0, 0, 1}) <= 1e-15);
    for (auto y : {std::vector<double>{1, 0}, std::vector<double>{0.2, 3.0}}) {
        auto d = fundamental_tensor(zoo::diag49(), kX, y);
        CHECK(max_diff(d.data, {4, 0, 0, 9}) <= 1e-12);
    }
    std::vector<double> y{0, 1};
    auto r = fundamental_tensor(zoo::randers_const(), kX, y);
    CHECK(max_diff(r.data, oracle::g(zoo::F_randers_const, kX, y)) <= 1e-6);
    CHECK(r.symmetry_residual() == 0.0);
}

TEST_CASE("cartan tensor") {
    CHECK(cartan_tensor(zoo::conformal(), kX, kY).max_abs() <= 1e-12);
    for (auto m : {zoo::randers_const(), zoo::randers_x()}) {
        auto A = cartan_tensor(m, kX, kY);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(A.at({i, j, 0}) * kY[0] + A.at({i, j, 1}) * kY[1]) <= 1e-12);
        CHECK(A.symmetry_residual() <= 1e-14);
    }
    // A_111 = F/2 d g_11 / d y1
    std::vector<double> y{0, 1};
    auto A = cartan_tensor(zoo::randers_const(), kX, y);
    oracle::Fn g11 = [](std::span<const double> q) {
        return oracle::g(zoo::F_randers_const, std::vector<double>{0, 0}, q, 1e-3)[0];
    };
    const double F = zoo::F_randers_const(kX, y);
    CHECK(std::abs(A.at({0, 0, 0}) - 0.5 * F * oracle::d1(g11, y, 0, 1e-2)) <= 1e-5);
}

TEST_CASE("formal christoffel symbols") {
    CHECK(formal_christoffel(zoo::randers_const(), kX, kY).max_abs() == 0.0);
    auto gamma = formal_christoffel(zoo::conformal(), kX, kY);
    CHECK(gamma.at({0, 0, 0}) == doctest::Approx(1.0));
    CHECK(gamma.at({0, 1, 1}) == doctest::Approx(-1.0));
    CHECK(gamma.at({1, 0, 1}) == doctest::Approx(1.0));
    CHECK(gamma.at({1, 1, 0}) == doctest::Approx(1.0));
    CHECK(std::abs(gamma.at({0, 0, 1})) <= 1e-14);
    CHECK(std::abs(gamma.at({1, 0, 0})) <= 1e-14);
    CHECK(std::abs(gamma.at({1, 1, 1})) <= 1e-14);
    CHECK(max_diff(gamma.data, oracle::levi_civita2(conformal_a, kX)) <= 1e-8);
    CHECK(formal_christoffel(zoo::randers_x(), kX, kY).symmetry_residual() <= 1e-14);
}

TEST_CASE("nonlinear connection") {
    CHECK(nonlinear_connection(zoo::randers_const(), kX, kY).max_abs() == 0.0);
    auto gamma = formal_christoffel(zoo::conformal(), kX, kY);
    auto N = nonlinear_connection(zoo::conformal(), kX, kY);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(N.at({i, j}) == doctest::Approx(gamma.at({i, j, 0}) * kY[0] + gamma.at({i, j, 1}) * kY[1]));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int k = 0; k < 10; ++k) {
        std::vector<double> x{u(rng), u(rng)}, y{u(rng), u(rng)};
        auto Nr = nonlinear_connection(zoo::randers_x(), x, y);
        CHECK(max_diff(Nr.data, zoo::N_randers_x(x, y)) <= 1e-5);
    }
}

TEST_CASE("chern connection") {
    // Riemannian: Chern = Levi-Civita
    for (auto [m, a] : {std::pair{zoo::conformal(), &conformal_a}, std::pair{zoo::instantiate_hyperbolic(), &hyperbolic_a}}) {
        auto c = chern_coefficients(m, kX, kY);
        CHECK(max_diff(c.Gamma.data, c.gamma.data) <= 1e-12);
        CHECK(max_diff(c.Gamma.data, oracle::levi_civita2(*a, kX)) <= 1e-8);
    }
    CHECK(chern_coefficients(zoo::randers_const(), kX, kY).Gamma.max_abs() == 0.0);
    auto c = chern_coefficients(zoo::randers_x(), kX, kY);
    auto r = verify_structure_equations(c, zoo::randers_x(), kX, kY);
    CHECK(r.torsion <= 1e-8);
    CHECK(r.compatibility() <= 1e-8);
    // Gamma^i_jk y^j = N^i_k
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            CHECK(c.Gamma.at({i, 0, k}) * kY[0] + c.Gamma.at({i, 1, k}) * kY[1] == doctest::Approx(c.N.at({i, k})));
}

TEST_CASE("structure equation residuals") {
    auto e = chern_coefficients(zoo::euclidean(), kX, kY);
    auto re = verify_structure_equations(e, zoo::euclidean(), kX, kY);
    CHECK(re.torsion == 0.0);
    CHECK(re.compatibility() == 0.0);

    auto m = zoo::conformal();
    auto c = chern_coefficients(m, kX, kY);
    auto rc = verify_structure_equations(c, m, kX, kY);
    CHECK(rc.torsion < 1e-9);
    CHECK(rc.compatibility() < 1e-9);

    c.Gamma.at({0, 1, 1}) += 0.1;
    auto bad = verify_structure_equations(c, m, kX, kY);
    CHECK(bad.compatibility() >= 0.05);
}

TEST_CASE("horizontal derivative") {
    auto m = zoo::conformal();
    JetField F2 = [&](std::span<const Jet> x, std::span<const Jet> y) {
        Jet f = m.F(x, y);
        return f * f;
    };
    auto d = horizontal_derivative(m, kX, kY, F2);
    CHECK(max_abs(d) <= 1e-12);
    // by differences: dF^2/dx^j - N^m_j dF^2/dy^m with N = gamma y by hand
    auto F2o = oracle::squared(zoo::F_conformal, 2);
    auto z = oracle::concat(kX, kY);
    auto N = nonlinear_connection(m, kX, kY);
    for (int j = 0; j < 2; ++j) {
        double v = oracle::d1(F2o, z, j, 1e-3);
        for (int k = 0; k < 2; ++k) v -= N.at({k, j}) * oracle::d1(F2o, z, 2 + k, 1e-3);
        CHECK(std::abs(v) <= 1e-8);
    }

    auto r = zoo::randers_const();
    JetField y1 = [](std::span<const Jet>, std::span<const Jet> y) { return y[0]; };
    CHECK(max_abs(horizontal_derivative(zoo::euclidean(), kX, kY, y1)) == 0.0);
    JetField F = [&](std::span<const Jet> x, std::span<const Jet> y) { return r.F(x, y); };
    CHECK(max_abs(horizontal_derivative(r, kX, kY, F)) == 0.0);
}

TEST_CASE("curvatures") {
    auto e = curvatures(zoo::euclidean(), kX, kY);
    CHECK(e.R.max_abs() == 0.0);
    CHECK(e.P.max_abs() == 0.0);
    for (auto m : {zoo::conformal(), zoo::diag49(), zoo::instantiate_hyperbolic()}) {
        auto c = curvatures(m, kX, kY);
        CHECK(c.P.max_abs() <= 1e-12);
        CHECK(c.R.symmetry_residual() <= 1e-9);
    }
    // e^{2 x1} delta is flat
    CHECK(curvatures(zoo::conformal(), kX, kY).R.max_abs() <= 1e-10);
    // dx1^2 + e^{2 x1} dx2^2 has K = -1: R^i_jkl = K (delta^i_k g_jl - delta^i_l g_jk)
    auto h = curvatures(zoo::instantiate_hyperbolic(), kX, kY);
    const auto a = hyperbolic_a(kX);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const double expect = -((i == k) * a[j * 2 + l] - (i == l) * a[j * 2 + k]);
                    CHECK(std::abs(h.R.at({i, j, k, l}) - expect) <= 1e-9);
                }
    auto rx = curvatures(zoo::randers_x(), kX, kY);
    CHECK(rx.R.symmetry_residual() <= 1e-9);
    CHECK(rx.P.max_abs() > 1e-3);
}

TEST_CASE("landsberg tensor") {
    for (auto m : {zoo::conformal(), zoo::diag49(), zoo::randers_const(), zoo::berwald_randers()}) {
        auto l = landsberg_tensor(m, kX, kY);
        CHECK(l.A_dot.max_abs() <= 1e-10);
        CHECK(max_abs(l.trace) <= 1e-10);
    }
    auto l = landsberg_tensor(zoo::randers_x(), kX, kY);
    CHECK(l.A_dot.max_abs() > 1e-3);
    CHECK(l.A_dot.symmetry_residual() <= 1e-12);
    // independent magnitude: L_ijk = -1/2 y_m G^m_ijk from the closed-form spray
    auto L = zoo::landsberg_randers_x(kX, kY);
    CHECK(max_diff(l.A_dot.data, L) <= 1e-6);
}

TEST_CASE("flag component of P matches the landsberg tensor") {
    for (auto m : {zoo::randers_x(), zoo::randers_const(), zoo::conformal()}) {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(-0.6, 0.6);
        for (int k = 0; k < 5; ++k) {
            std::vector<double> x{u(rng), u(rng)}, y{u(rng) + 0.7, u(rng)};
            auto t = point_tensors(m, x, y);
            CHECK(max_abs_difference(flag_component_P(t), t.A_dot) <= 1e-10);
        }
    }
    // P of a Berwald metric vanishes while its Gamma is nonzero
    auto t = point_tensors(zoo::berwald_randers(), kX, kY);
    CHECK(t.P.max_abs() <= 1e-10);
    CHECK(t.chern.Gamma.max_abs() > 1e-2);
}

TEST_CASE("zero-homogeneity in y") {
    auto m = zoo::randers_x();
    std::vector<double> y2{2 * kY[0], 2 * kY[1]};
    auto a = point_tensors(m, kX, kY), b = point_tensors(m, kX, y2);
    for (auto [p, q] : {std::pair{&a.chern.g, &b.chern.g}, std::pair{&a.chern.A, &b.chern.A},
                        std::pair{&a.chern.gamma, &b.chern.gamma}, std::pair{&a.chern.Gamma, &b.chern.Gamma},
                        std::pair{&a.R, &b.R}, std::pair{&a.P, &b.P}, std::pair{&a.A_dot, &b.A_dot}}) {
        CAPTURE(p->name);
        CHECK(max_abs_difference(*p, *q) <= 1e-10);
    }
    // N is 1-homogeneous
    for (std::size_t i = 0; i < a.chern.N.size(); ++i) CHECK(b.chern.N[i] == doctest::Approx(2 * a.chern.N[i]));
}

TEST_CASE("metric_at refuses degenerate points") {
    auto d = instantiate(zoo::spec("dsl", {{"F", "(y1^4 + y2^4)^0.25"}}));
    CHECK_THROWS_AS(metric_at(d, kX, std::vector<double>{1, 0}), NumericalError);
    CHECK_THROWS_AS(fundamental_tensor(d, kX, std::vector<double>{0, 1}), NumericalError);
}

}  // TEST_SUITE
