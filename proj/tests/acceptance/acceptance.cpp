// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/averaging.hpp"
#include "finsler/homotopy.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/tensor.hpp"
#include "finsler/transport.hpp"
#include "finsler_tools/cli.hpp"
#include "oracles.hpp"
#include "test_metrics.hpp"

using namespace finsler;
namespace zoo = testing_metrics;
using std::numbers::pi;

namespace {

struct Named {
    const char* name;
    FinslerMetric metric;
    bool riemannian;
};

std::vector<Named> all_metrics() {
    return {{"euclidean", zoo::euclidean(), true},
            {"diag49", zoo::diag49(), true},
            {"conformal", zoo::conformal(), true},
            {"hyperbolic", zoo::instantiate_hyperbolic(), true},
            {"randers_const", zoo::randers_const(), false},
            {"randers_x", zoo::randers_x(), false},
            {"berwald_randers", zoo::berwald_randers(), false}};
}

Measure weight() {
    return Measure::from_expression(
        parse("1 + 0.3*x1*y1^2/(y1^2 + y2^2) + 0.2*sin(x2)*y1*y2/(y1^2 + y2^2)", 2));
}

std::vector<double> diff(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

// conformal e^{2 x1}: gamma^1_11 = 1, gamma^1_22 = -1, gamma^2_12 = gamma^2_21 = 1
std::vector<double> hand_gamma(const char* name) {
    if (std::string(name) == "conformal") return {1, 0, 0, -1, 0, 1, 1, 0};
    return std::vector<double>(8, 0.0);
}

struct Probe {
    std::vector<double> x, y;
};

std::vector<Probe> random_probes(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(-0.5, 0.5), ang(0.0, 2 * pi), rad(0.8, 1.5);
    std::vector<Probe> out;
    for (int k = 0; k < count; ++k) {
        const double t = ang(rng), r = rad(rng);
        std::vector<double> x{pos(rng), pos(rng)};
        out.push_back({x, {r * std::cos(t), r * std::sin(t)}});
    }
    return out;
}

std::set<int> failed;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) failed.insert(id);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void riemannian_reduction() {
    auto t0 = std::chrono::steady_clock::now();
    auto grid = build_grid(2, 256);
    double worst = 0.0;
    auto probes = random_probes(10, 11);
    for (const char* name : {"euclidean", "diag49", "conformal"}) {
        FinslerMetric m = std::string(name) == "euclidean" ? zoo::euclidean()
                          : std::string(name) == "diag49"  ? zoo::diag49()
                                                           : zoo::conformal();
        auto gamma = hand_gamma(name);
        for (const auto& p : probes) {
            auto t = point_tensors(m, p.x, p.y);
            worst = std::max({worst, max_abs(diff(t.chern.Gamma.data, gamma)), t.chern.A.max_abs(), t.P.max_abs(),
                              t.A_dot.max_abs()});
        }
        std::vector<double> x{0.3, -0.2};
        auto h = averaged_metric(m, Measure{}, x, grid);
        worst = std::max(worst, max_abs(diff(h, metric_at(m, x, std::vector<double>{1, 0}).g)));
        worst = std::max(worst, max_abs(diff(levi_civita_direct(m, Measure{}, x, grid).data, gamma)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, worst <= 1e-6 && secs < 10.0, "riemannian reduction", fmt("max residual %.3g, %.2f s", worst, secs));
}

void structure_equations() {
    double worst = 0.0;
    auto probes = random_probes(20, 12);
    for (const auto& m : all_metrics())
        for (const auto& p : probes) {
            auto c = chern_coefficients(m.metric, p.x, p.y);
            auto r = verify_structure_equations(c, m.metric, p.x, p.y);
            worst = std::max({worst, r.torsion, r.compatibility()});
        }
    report(2, worst <= 1e-8, "structure equations", fmt("max residual %.3g over 7 metrics x 20 probes", worst));
}

void ellipse_volume() {
    double err = 0.0, doubling = 0.0;
    auto g256 = build_grid(2, 256), g512 = build_grid(2, 512);
    auto skew = instantiate(zoo::spec("riemannian", {{"a11", "2 + x2^2"}, {"a12", "0.5"}, {"a22", "1 + sin(x1)^2"}}));
    std::vector<FinslerMetric> ms{zoo::euclidean(), zoo::diag49(), zoo::conformal(), zoo::instantiate_hyperbolic(),
                                  skew};
    for (const auto& m : ms)
        for (const auto& p : random_probes(5, 13)) {
            const double v = volume(m, p.x, g256);
            err = std::max(err, std::abs(v - 2 * pi));
            doubling = std::max(doubling, std::abs(volume(m, p.x, g512) - v));
        }
    report(3, err <= 1e-9 && doubling < 1e-10, "ellipse volume",
           fmt("max |vol - 2 pi| %.3g, doubling change %.3g", err, doubling));
}

void bao_shen() {
    auto grid = build_grid(2, 256);
    double randers = 0.0, riem = 0.0, lhs = 0.0;
    for (const auto& p : random_probes(5, 14)) {
        auto r = bao_shen_check(zoo::randers_x(), p.x, p.y, grid);
        randers = std::max(randers, r.residual);
        lhs = std::max(lhs, std::abs(r.lhs));
        for (auto m : {zoo::conformal(), zoo::diag49(), zoo::instantiate_hyperbolic()}) {
            auto q = bao_shen_check(m, p.x, p.y, grid);
            riem = std::max({riem, std::abs(q.lhs), std::abs(q.rhs)});
        }
    }
    report(4, randers <= 1e-4 && riem <= 1e-8, "bao-shen volume derivative",
           fmt("randers residual %.3g (|lhs| up to %.3g), riemannian sides %.3g", randers, lhs, riem));
}

void decomposition() {
    auto grid = build_grid(2, 256);
    double worst = 0.0, fterm = 0.0;
    std::vector<std::vector<double>> xs{{0.3, 0.1}, {-0.4, 0.2}};
    for (const auto& m : all_metrics())
        for (const auto& meas : {Measure{}, weight()})
            for (const auto& x : xs) {
                auto d = levi_civita_decomposed(m.metric, meas, x, grid);
                worst = std::max(worst, max_abs_difference(d.sum, levi_civita_direct(m.metric, meas, x, grid)));
                fterm = std::max(fterm, d.f_term.max_abs());
            }
    report(5, worst <= 5e-4 && fterm > 1e-3, "levi-civita decomposition",
           fmt("max |sum - direct| %.3g, f-term magnitude %.3g", worst, fterm));
}

nlohmann::json run_report(const std::vector<std::string>& args);

void homotopy() {
    auto grid = build_grid(2, 128), fine = build_grid(2, 256);
    std::vector<double> x{0.3, 0.1};
    double t0 = 0.0, quad = 0.0, riem = 0.0, drift_riem = 0.0, drift_other = 0.0;
    const double ts[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (const auto& m : all_metrics())
        for (const auto& meas : {Measure{}, weight()}) {
            auto rep = invariance_report(m.metric, meas, x, ts, grid);
            auto h_fine = averaged_metric(m.metric, meas, x, fine);
            quad = std::max(quad, max_abs(diff(rep.h, h_fine)));
            t0 = std::max(t0, rep.rows[0].average_deviation);
            for (const auto& row : rep.rows) {
                (m.riemannian ? drift_riem : drift_other) =
                    std::max(m.riemannian ? drift_riem : drift_other, row.f_term_drift);
                if (m.riemannian && row.t > 0 && meas.is_constant()) riem = std::max(riem, row.average_deviation);
            }
        }
    bool diagnostics = true;
    for (const char* f : {"conformal", "randers_x"}) {
        auto j = run_report({"homotopy", "--spec", std::string(DATA_DIR) + "/" + f + ".json", "--x", "0.3,0.1",
                             "--grid", "32", "--t-list", "0,0.5,1"});
        for (const auto& row : j["result"]["rows"])
            for (const char* key : {"iterations", "converged", "final_update", "chi_min", "chi_max"})
                diagnostics = diagnostics && row.contains(key);
        diagnostics = diagnostics && j["result"]["rows"].size() == 3;
    }
    const double drift = std::max(drift_riem, drift_other);
    const bool ok = t0 <= std::max(quad, 1e-12) && riem <= 1e-7 && drift <= 1e-6 && diagnostics;
    report(6, ok, "homotopy endpoint and invariance",
           fmt("t=0 deviation %.3g (quadrature %.3g), riemannian f=1 %.3g", t0, quad, riem) +
               fmt(", f-term drift %.3g riemannian / %.3g finsler", drift_riem, drift_other) +
               (diagnostics ? ", diagnostics emitted" : ", diagnostics missing"));
}

void transport() {
    const double y0[] = {1.0, 0.2};
    auto circle = Curve::parse({"0.4*cos(2*pi*s)", "0.4*sin(2*pi*s)"}, 0.0, 1.0);
    std::vector<double> ls, ld;
    for (int steps : {250, 500, 1000}) {
        ls.push_back(std::log(steps));
        ld.push_back(std::log(norm_drift(parallel_transport(zoo::randers_x(), circle, y0, steps))));
    }
    const double mx = (ls[0] + ls[1] + ls[2]) / 3, my = (ld[0] + ld[1] + ld[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) {
        sxy += (ls[i] - mx) * (ld[i] - my);
        sxx += (ls[i] - mx) * (ls[i] - mx);
    }
    const double slope = -sxy / sxx;

    std::vector<std::vector<double>> frame{{1, 0}, {0, 1}};
    double berwald = 0.0;
    for (auto m : {zoo::randers_const(), zoo::berwald_randers(), zoo::conformal(), zoo::instantiate_hyperbolic()})
        berwald = std::max(berwald, frame_transport_check(m, circle, y0, frame, 400).max_drift);
    const double a[] = {0, 0}, b[] = {0.6, 0.8};
    const double witness = frame_transport_check(zoo::randers_x(), Curve::line(a, b), y0, frame, 400).max_drift;
    report(7, std::abs(slope - 4) <= 0.3 && berwald <= 1e-8 && witness >= 1e-4, "transport",
           fmt("drift slope %.3f, berwald frame drift %.3g, witness drift %.3g", slope, berwald, witness));
}

void sphere_radius() {
    auto grid = build_grid(2, 256);
    const double lambdas[] = {0.5, 1.0, 2.0};
    double worst = 0.0;
    for (const auto& m : all_metrics())
        worst = std::max(worst, sphere_invariance_check(m.metric, std::vector<double>{0.3, 0.1}, lambdas, grid)
                                    .max_deviation);
    report(8, worst <= 1e-9, "sphere radius invariance", fmt("max deviation %.3g", worst));
}

void jets_vs_differences() {
    auto m = zoo::randers_x();
    auto F2 = oracle::squared(zoo::F_randers_x, 2);
    // every multi-index of total order 1..4 in (x1, x2, y1, y2)
    std::vector<std::vector<int>> alphas;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b)
            for (int c = 0; a + b + c <= 4; ++c)
                for (int d = 0; a + b + c + d <= 4; ++d)
                    if (a + b + c + d > 0) alphas.push_back({a, b, c, d});
    double jet_err = 0.0, tensor_err = 0.0;
    for (const auto& p : random_probes(100, 15)) {
        auto z = oracle::concat(p.x, p.y);
        auto seeds = Jet::seed(z, 4);
        std::span<const Jet> sj(seeds);
        Jet f = m.F(sj.first(2), sj.subspan(2, 2));
        Jet f2 = f * f;
        for (const auto& al : alphas) {
            std::vector<int> vars;
            for (int v = 0; v < 4; ++v) vars.insert(vars.end(), al[v], v);
            const int order = static_cast<int>(vars.size());
            const double h = order <= 2 ? 1e-3 : order == 3 ? 4e-3 : 1e-2;
            jet_err = std::max(jet_err, std::abs(f2.extract(al) - oracle::partial(F2, z, vars, h)));
        }

        auto t = point_tensors(m, p.x, p.y);
        auto g = oracle::g(zoo::F_randers_x, p.x, p.y);
        tensor_err = std::max(tensor_err, max_abs(diff(t.chern.g.data, g)));
        const double F = zoo::F_randers_x(p.x, p.y);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double A = 0.25 * F * oracle::partial(F2, z, {2 + i, 2 + j, 2 + k}, 4e-3);
                    tensor_err = std::max(tensor_err, std::abs(t.chern.A.at({i, j, k}) - A));
                }
        tensor_err = std::max(tensor_err, max_abs(diff(t.chern.N.data, zoo::N_randers_x(p.x, p.y))));
        for (int i = 0; i < 2; ++i) {
            oracle::Fn G = [&, i](std::span<const double> q) { return zoo::spray_randers_x(p.x, q, i); };
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    tensor_err = std::max(tensor_err,
                                          std::abs(t.dN_dy.at({i, j, k}) - oracle::partial(G, p.y, {j, k}, 2e-3)));
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    oracle::Fn Gam = [&, i, j, k](std::span<const double> q) {
                        return chern_coefficients(m, q.first(2), q.subspan(2, 2)).Gamma.at({i, j, k});
                    };
                    for (int l = 0; l < 2; ++l) {
                        tensor_err = std::max(
                            tensor_err, std::abs(t.dGamma_dx.at({i, j, k, l}) - oracle::d1(Gam, z, l, 1e-3)));
                        tensor_err = std::max(
                            tensor_err, std::abs(t.dGamma_dy.at({i, j, k, l}) - oracle::d1(Gam, z, 2 + l, 1e-3)));
                    }
                }
    }
    report(9, jet_err <= 1e-4 && tensor_err <= 1e-4, "jets against finite differences",
           fmt("F^2 derivatives to order 4: %.3g, g/A/N/dN/dGamma: %.3g", jet_err, tensor_err));
}

nlohmann::json run_report(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    if (tools::run_command(args, out, err) != 0) return {{"error", err.str()}};
    auto j = nlohmann::json::parse(out.str());
    j.erase("generated_at");
    return j;
}

void determinism() {
    const std::string dir = DATA_DIR;
    std::vector<std::vector<std::string>> suite;
    for (const char* f : {"euclidean2", "conformal", "randers_const", "randers_x", "berwald_randers"}) {
        const std::string spec = dir + "/" + f + ".json";
        const std::vector<std::string> common{"--spec", spec, "--x", "0.3,0.1", "--grid", "64", "--steps", "100",
                                              "--workers", "3"};
        for (const char* cmd : {"analyze", "average", "homotopy", "transport", "baoshen"}) {
            std::vector<std::string> args{cmd};
            args.insert(args.end(), common.begin(), common.end());
            suite.push_back(args);
        }
    }
    std::string first, second;
    int errors = 0;
    for (const auto& args : suite) {
        auto j = run_report(args);
        errors += j.contains("error");
        first += j.dump() + "\n";
    }
    for (const auto& args : suite) second += run_report(args).dump() + "\n";
    report(10, first == second && errors == 0, "deterministic reports",
           fmt("%.0f reports, %.0f bytes, identical: %.0f", static_cast<double>(suite.size()),
               static_cast<double>(first.size()), first == second ? 1.0 : 0.0));
}

}  // namespace

// --expect-red 6,... : exit 0 only when exactly these criteria fail.
int main(int argc, char** argv) {
    std::set<int> expected;
    for (int a = 1; a + 1 < argc; ++a)
        if (std::string(argv[a]) == "--expect-red") {
            std::stringstream ss(argv[a + 1]);
            for (std::string tok; std::getline(ss, tok, ',');) expected.insert(std::stoi(tok));
        }
    std::vector<std::function<void()>> checks{riemannian_reduction, structure_equations, ellipse_volume, bao_shen,
                                              decomposition,        homotopy,            transport,      sphere_radius,
                                              jets_vs_differences,  determinism};
    for (int i = 0; i < static_cast<int>(checks.size()); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(i + 1, false, "exception", e.what());
        }
    }
    if (failed != expected) {
        std::printf("unexpected outcome: %zu red, %zu expected red\n", failed.size(), expected.size());
        return 1;
    }
    if (!failed.empty()) std::printf("%zu criteria red as expected\n", failed.size());
    return 0;
}
