#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "finsler/metric.hpp"
#include "oracles.hpp"
#include "test_metrics.hpp"

using namespace finsler;
using testing_metrics::spec;

namespace {

double min_eigen2(const std::vector<double>& g) {
    Eigen::Matrix2d m;
    m << g[0], g[1], g[2], g[3];
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(m).eigenvalues()(0);
}

}  // namespace

TEST_SUITE("metric_zoo") {

TEST_CASE("instantiate built-in families") {
    std::vector<double> x{0.4, -0.2};
    auto e = instantiate(spec("euclidean"));
    CHECK(e.F(x, std::vector<double>{3, 4}) == doctest::Approx(5.0));
    CHECK(e.family() == "euclidean");

    auto r = testing_metrics::randers_const();
    CHECK(r.F(x, std::vector<double>{1, 0}) == doctest::Approx(1.5));
    CHECK(r.x_independent());
    CHECK_FALSE(testing_metrics::randers_x().x_independent());

    auto d = instantiate(spec("dsl", {{"F", "(y1^4 + y2^4)^0.25"}}));
    CHECK(d.F(x, std::vector<double>{1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("randers with ||b|| >= 1 is rejected") {
    CHECK_THROWS_AS(instantiate(spec("randers", {{"b1", "1.1"}})), InputError);
    // independent scan: F = |y| + 1.1 y1 is not even positive, and its Hessian loses definiteness
    oracle::Finsler F = [](std::span<const double>, std::span<const double> y) {
        return testing_metrics::norm2(y) + 1.1 * y[0];
    };
    double worst_F = 1e300, worst_eig = 1e300;
    std::vector<double> x{0, 0};
    for (int k = 0; k < 64; ++k) {
        const double t = 2 * std::numbers::pi * k / 64;
        std::vector<double> y{std::cos(t), std::sin(t)};
        worst_F = std::min(worst_F, F(x, y));
        worst_eig = std::min(worst_eig, min_eigen2(oracle::g(F, x, y)));
    }
    CHECK(worst_F < 0);
    CHECK(worst_eig <= 0);
}

TEST_CASE("malformed specs") {
    CHECK_THROWS_AS(instantiate(spec("torus")), InputError);
    CHECK_THROWS_AS(instantiate(spec("riemannian")), InputError);
    CHECK_NOTHROW(instantiate(spec("riemannian", {{"a11", "2"}})));
    CHECK_THROWS_AS(instantiate(spec("dsl", {{"F", "sqrt(y1^2 + y3^2)"}})), InputError);
    MetricSpec s = spec("randers", {{"b1", "c*x1"}});
    CHECK_THROWS_AS(instantiate(s), InputError);
    s.parameters["c"] = 0.2;
    CHECK_NOTHROW(instantiate(s));
    MetricSpec bad = spec("euclidean");
    bad.dimension = 0;
    CHECK_THROWS_AS(instantiate(bad), InputError);
}

TEST_CASE("riemannian accepts either off-diagonal key") {
    auto a = instantiate(spec("riemannian", {{"a11", "2"}, {"a12", "0.5"}, {"a22", "1"}}));
    auto b = instantiate(spec("riemannian", {{"a11", "2"}, {"a21", "0.5"}, {"a22", "1"}}));
    std::vector<double> x{0, 0}, y{0.3, -0.7};
    CHECK(a.F(x, y) == doctest::Approx(b.F(x, y)));
    CHECK(a.F(x, y) == doctest::Approx(std::sqrt(2 * 0.09 + 2 * 0.5 * 0.3 * -0.7 + 0.49)));
}

TEST_CASE("validation") {
    auto e = validate(testing_metrics::euclidean());
    CHECK(e.ok);
    CHECK(std::abs(e.min_eigenvalue - 1.0) <= 1e-15);
    CHECK(e.y_variation <= 1e-12);

    auto d = validate(testing_metrics::diag49());
    CHECK(d.ok);
    CHECK(d.min_eigenvalue == doctest::Approx(4.0));
    CHECK(d.y_variation <= 1e-10);

    for (auto m : {testing_metrics::conformal(), testing_metrics::diag49()}) {
        auto v = validate(m);
        CHECK(v.y_variation <= 1e-10);
        CHECK(v.euler_residual <= 1e-9);
    }
    auto r = validate(testing_metrics::randers_x());
    CHECK(r.ok);
    CHECK(r.euler_residual <= 1e-9);
    CHECK(r.y_variation > 1e-3);
}

TEST_CASE("quartic norm degenerates near the axes") {
    auto m = instantiate(spec("dsl", {{"F", "(y1^4 + y2^4)^0.25"}}));
    std::vector<std::vector<double>> xs{{0, 0}};
    std::vector<std::vector<double>> off_axis, all;
    for (int k = 0; k < 64; ++k) {
        const double t = 2 * std::numbers::pi * (k + 0.5) / 64;
        all.push_back({std::cos(t), std::sin(t)});
    }
    for (int k = 0; k < 4; ++k) {
        const double t = std::numbers::pi / 4 + k * std::numbers::pi / 2;
        off_axis.push_back({std::cos(t), std::sin(t)});
    }
    auto good = validate(m, xs, off_axis, 1e-8);
    CHECK(good.min_eigenvalue > 0.1);
    auto scan = validate(m, xs, all, 1e-8);
    CHECK(scan.min_eigenvalue < good.min_eigenvalue);
    CHECK_FALSE(scan.warnings.empty());
    // on the axis the quartic's Hessian has a zero eigenvalue
    oracle::Finsler F = [](std::span<const double>, std::span<const double> y) {
        return std::pow(std::pow(y[0], 4) + std::pow(y[1], 4), 0.25);
    };
    CHECK(std::abs(min_eigen2(oracle::g(F, std::vector<double>{0, 0}, std::vector<double>{1, 0}))) < 1e-4);
}

TEST_CASE("abs nodes are flagged") {
    auto m = instantiate(spec("dsl", {{"F", "sqrt(y1^2 + y2^2) + 0.1*abs(y1)"}}));
    auto v = validate(m);
    bool flagged = false;
    for (const auto& w : v.warnings) flagged = flagged || w.find("abs") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("zero direction is refused") {
    auto m = testing_metrics::euclidean();
    CHECK_THROWS(m.F(std::vector<double>{0, 0}, std::vector<double>{0, 0}));
}

TEST_CASE("probe points are deterministic") {
    auto a = default_probe_points(3, 5), b = default_probe_points(3, 5);
    CHECK(a == b);
    CHECK(a[0] == std::vector<double>{0, 0, 0});
    for (const auto& p : a)
        for (double c : p) CHECK(std::abs(c) <= 0.5);
    auto d = default_directions(2, 16);
    CHECK(d.size() == 16);
    for (const auto& u : d) CHECK(std::hypot(u[0], u[1]) == doctest::Approx(1.0));
}

}  // TEST_SUITE
