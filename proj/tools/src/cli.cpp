#include "finsler_tools/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "finsler/averaging.hpp"
#include "finsler/error.hpp"
#include "finsler/homotopy.hpp"
#include "finsler/indicatrix.hpp"
#include "finsler/transport.hpp"
#include "finsler_tools/classify.hpp"
#include "finsler_tools/spec_io.hpp"

#ifndef FINSLER_TOOL_VERSION
#define FINSLER_TOOL_VERSION "0.0.0"
#endif

namespace finsler::tools {

using nlohmann::json;

std::string tool_version() { return FINSLER_TOOL_VERSION; }

json tensor_json(const TensorTable& t) {
    return {{"name", t.name},
            {"dimension", t.dimension},
            {"up", t.up},
            {"down", t.down},
            {"symmetry", t.symmetry},
            {"data", t.data},
            {"max_abs", t.max_abs()}};
}

namespace {

std::string fmt_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_scalar(const json& v) {
    if (v.is_number_float()) return fmt_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "null";
    return v.dump();
}

bool is_flat_array(const json& v) {
    return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
}

std::string fmt_cell(const json& v) {
    if (is_flat_array(v)) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt_scalar(v[i]);
        return s + "]";
    }
    if (v.is_primitive()) return fmt_scalar(v);
    return v.dump();
}

bool is_row_array(const json& v) {
    if (!v.is_array() || v.empty()) return false;
    for (const auto& e : v) {
        if (!e.is_object()) return false;
        for (auto& [k, c] : e.items())
            if (!c.is_primitive() && !is_flat_array(c)) return false;
    }
    return true;
}

struct TextBuilder {
    std::vector<std::pair<std::string, std::string>> pending;
    std::ostringstream os;

    void flush() {
        std::size_t w = 0;
        for (auto& [k, v] : pending) w = std::max(w, k.size());
        for (auto& [k, v] : pending) os << k << std::string(w - k.size() + 2, ' ') << v << '\n';
        pending.clear();
    }

    void table(const std::string& path, const json& rows) {
        flush();
        std::vector<std::string> cols;
        for (auto& [k, c] : rows.front().items()) cols.push_back(k);
        std::vector<std::vector<std::string>> cells;
        std::vector<std::size_t> w(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) w[c] = cols[c].size();
        for (const auto& r : rows) {
            std::vector<std::string> line;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                line.push_back(r.contains(cols[c]) ? fmt_cell(r[cols[c]]) : "");
                w[c] = std::max(w[c], line.back().size());
            }
            cells.push_back(std::move(line));
        }
        os << path << ":\n";
        auto emit = [&](const std::vector<std::string>& line) {
            os << ' ';
            for (std::size_t c = 0; c < line.size(); ++c)
                os << ' ' << std::string(w[c] - line[c].size(), ' ') << line[c];
            os << '\n';
        };
        emit(cols);
        for (const auto& line : cells) emit(line);
    }

    void walk(const json& j, const std::string& path) {
        if (j.is_object()) {
            if (j.contains("data") && j.contains("up") && j.contains("down")) {
                pending.emplace_back(path, fmt_cell(j["data"]) + "  (" + j["name"].get<std::string>() +
                                               ", max " + fmt_number(j["max_abs"].get<double>()) + ")");
                return;
            }
            for (auto& [k, v] : j.items()) walk(v, path.empty() ? k : path + "." + k);
        } else if (is_flat_array(j)) {
            pending.emplace_back(path, fmt_cell(j));
        } else if (is_row_array(j)) {
            table(path, j);
        } else if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], path + "[" + std::to_string(i) + "]");
        } else {
            pending.emplace_back(path, fmt_scalar(j));
        }
    }
};

}  // namespace

std::string render_text(const json& report) {
    TextBuilder b;
    b.walk(report, "");
    b.flush();
    return b.os.str();
}

namespace {

struct Settings {
    std::string spec;
    std::vector<double> x, y;
    int grid = 0;
    int steps = 1000;
    std::vector<double> t_list{0.0, 0.25, 0.5, 0.75, 1.0};
    double tol = 1e-6;
    int workers = 1;
    std::string format = "json";
    double relaxation = 0.5;
    int max_iterations = 200;
    std::string variant = "tied";
    std::string frame_rule = "linearized";
};

struct Report {
    json body;
    std::optional<std::string> csv;
    int exit_code = kExitOk;
    std::string message;
};

std::string timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> point_or(const std::vector<double>& v, int n, std::vector<double> fallback, const char* flag) {
    if (v.empty()) return fallback;
    if (static_cast<int>(v.size()) != n)
        throw InputError(std::string("--") + flag + " needs " + std::to_string(n) + " components");
    return v;
}

std::vector<double> nonzero(std::vector<double> v, const char* flag) {
    double s = 0.0;
    for (double c : v) s += c * c;
    if (std::sqrt(s) < kMinDirectionNorm) throw InputError(std::string("--") + flag + " must be nonzero");
    return v;
}

std::vector<double> unit(int n) {
    std::vector<double> e(n, 0.0);
    e[0] = 1.0;
    return e;
}

Measure load_measure(const MetricSpec& spec) {
    if (!spec.measure) return {};
    std::vector<std::string> names;
    for (const auto& [k, v] : spec.parameters) names.push_back(k);
    return Measure::from_expression(parse(*spec.measure, spec.dimension, names).bind(spec.parameters));
}

json metric_json(const MetricSpec& spec, const FinslerMetric& m) {
    json j = spec_to_json(spec);
    j["F"] = m.expression().to_string();
    j["x_independent"] = m.x_independent();
    return j;
}

json verdict_json(const Verdict& v) { return {{"holds", v.holds}, {"residual", v.residual}, {"tolerance", v.tolerance}}; }

json classification_json(const Classification& c) {
    json rows = json::array();
    for (const auto& r : c.rows) rows.push_back({{"x", r.x}, {"y", r.y}, {"A", r.A}, {"P", r.P}, {"A_dot", r.A_dot}});
    json failures = json::array();
    for (const auto& f : c.failures) failures.push_back({{"x", f.x}, {"y", f.y}, {"message", f.message}});
    return {{"scope", "at the probed points"},
            {"riemannian", verdict_json(c.riemannian)},
            {"berwald", verdict_json(c.berwald)},
            {"berwald_gamma_y_variation", verdict_json(c.berwald_gamma)},
            {"landsberg", verdict_json(c.landsberg)},
            {"hierarchy_violation", c.hierarchy_violation},
            {"berwald_tests_agree", c.berwald_tests_agree},
            {"x_probes", c.x_probes},
            {"directions_per_probe", c.directions},
            {"gamma_y_variation", c.gamma_y_variation},
            {"probes", rows},
            {"failures", failures}};
}

json validation_json(const ValidationReport& v) {
    return {{"ok", v.ok},
            {"homogeneity_residual", v.homogeneity_residual},
            {"min_F", v.min_F},
            {"min_eigenvalue", v.min_eigenvalue},
            {"min_eigenvalue_x", v.min_eigenvalue_x},
            {"min_eigenvalue_y", v.min_eigenvalue_y},
            {"min_eigen_ratio", v.min_eigen_ratio},
            {"euler_residual", v.euler_residual},
            {"y_variation", v.y_variation},
            {"warnings", v.warnings},
            {"errors", v.errors}};
}

int resolution(const Settings& s, int n) { return s.grid > 0 ? s.grid : default_resolution(n); }

Report cmd_analyze(const Settings& s, const MetricSpec&, const FinslerMetric& m) {
    const int n = m.dimension();
    auto x = point_or(s.x, n, std::vector<double>(n, 0.0), "x");
    auto y = nonzero(point_or(s.y, n, unit(n), "y"), "y");
    Report r;
    r.body["validation"] = validation_json(validate(m));
    PointTensors t = point_tensors(m, x, y);
    StructureResiduals sr = verify_structure_equations(t.chern, m, x, y);
    TensorTable flag = flag_component_P(t);
    json tensors;
    for (const TensorTable* tt : {&t.chern.g, &t.chern.g_inv, &t.chern.A, &t.chern.gamma, &t.chern.N, &t.chern.Gamma,
                                  &t.R, &t.P, &t.A_dot})
        tensors[tt->name] = tensor_json(*tt);
    r.body["point"] = {{"x", x}, {"y", y}, {"F", t.chern.F}};
    r.body["tensors"] = tensors;
    r.body["tr_A_dot"] = t.tr_A_dot;
    r.body["structure_equations"] = {{"torsion", sr.torsion},
                                     {"horizontal_compatibility", sr.horizontal},
                                     {"vertical_compatibility", sr.vertical}};
    r.body["landsberg_relation"] = {{"sign", kLandsbergSign},
                                    {"residual", max_abs_difference(flag, t.A_dot)}};
    ClassifyOptions co;
    co.tolerance = s.tol;
    co.workers = s.workers;
    r.body["classification"] = classification_json(classify(m, x, co));
    return r;
}

Report cmd_average(const Settings& s, const MetricSpec& spec, const FinslerMetric& m) {
    const int n = m.dimension();
    auto x = point_or(s.x, n, std::vector<double>(n, 0.0), "x");
    Measure f = load_measure(spec);
    SphereGrid grid = build_grid(n, resolution(s, n));
    Report r;
    AveragedMetricValue av = averaged_metric_value(m, f, x, grid, s.workers);
    TensorTable direct = levi_civita_direct(m, f, x, grid, 1e-3, s.workers);
    ChristoffelDecomposition d = levi_civita_decomposed(m, f, x, grid, 1e-3, s.workers);
    const double residual = max_abs_difference(d.sum, direct);
    const double lambdas[] = {0.5, 1.0, 2.0};
    SphereInvariance si = sphere_invariance_check(m, x, lambdas, grid, s.workers);
    r.body["x"] = x;
    r.body["grid"] = grid.descriptor;
    r.body["measure"] = spec.measure ? json(*spec.measure) : json("1");
    r.body["h"] = av.h;
    r.body["volume"] = av.volume;
    r.body["mean_f"] = av.mean_f;
    r.body["levi_civita_direct"] = tensor_json(direct);
    r.body["decomposition"] = {{"grad_vol", tensor_json(d.grad_vol)},
                               {"theta_gamma", tensor_json(d.theta_gamma)},
                               {"log_det", tensor_json(d.log_det)},
                               {"f_term", tensor_json(d.f_term)},
                               {"sum", tensor_json(d.sum)},
                               {"mean_trace", d.mean_trace}};
    r.body["decomposition_check"] = {{"holds", residual <= 5e-4}, {"residual", residual}, {"tolerance", 5e-4}};
    r.body["displayed_variant"] = {{"grad_vol", tensor_json(d.grad_vol_displayed)},
                                   {"log_det", tensor_json(d.log_det_displayed)},
                                   {"sum", tensor_json(d.sum_displayed)},
                                   {"residual_vs_direct", max_abs_difference(d.sum_displayed, direct)}};
    r.body["sphere_radius_invariance"] = {{"lambdas", si.lambdas}, {"max_deviation", si.max_deviation}};
    return r;
}

Report cmd_homotopy(const Settings& s, const MetricSpec& spec, const FinslerMetric& m) {
    const int n = m.dimension();
    auto x = point_or(s.x, n, std::vector<double>(n, 0.0), "x");
    Measure f = load_measure(spec);
    SphereGrid grid = build_grid(n, resolution(s, n));
    InvarianceOptions o;
    o.gauge.relaxation = s.relaxation;
    o.gauge.max_iterations = s.max_iterations;
    o.gauge.variant = s.variant == "independent" ? GaugeVariant::independent : GaugeVariant::tied;
    o.gauge.workers = s.workers;
    InvarianceReport ir = invariance_report(m, f, x, s.t_list, grid, o);
    Report r;
    json rows = json::array(), probe_sets = json::array();
    std::ostringstream csv;
    csv << "t,iterations,converged,final_update,chi_min,chi_max,varpi_min,varpi_max,vol_t,average_deviation,"
           "f_term_drift,homogeneity_residual,probe_vol_spread,probe_det_spread\n";
    for (const auto& row : ir.rows) {
        json probes = json::array();
        for (const auto& p : row.probes)
            probes.push_back({{"x", p.x}, {"vol_t", p.vol_t}, {"det_min", p.det_min}, {"det_max", p.det_max}});
        rows.push_back({{"t", row.t},
                        {"iterations", row.iterations},
                        {"converged", row.converged},
                        {"final_update", row.final_update},
                        {"chi_min", row.chi_min},
                        {"chi_max", row.chi_max},
                        {"varpi_min", row.varpi_min},
                        {"varpi_max", row.varpi_max},
                        {"vol_t", row.vol_t},
                        {"average_deviation", row.average_deviation},
                        {"f_term_drift", row.f_term_drift},
                        {"homogeneity_residual", row.homogeneity_residual},
                        {"probe_vol_spread", row.probe_vol_spread},
                        {"probe_det_spread", row.probe_det_spread},
                        {"error", row.error}});
        char buf[512];
        std::snprintf(buf, sizeof buf, "%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      row.t, row.iterations, row.converged ? 1 : 0, row.final_update, row.chi_min, row.chi_max,
                      row.varpi_min, row.varpi_max, row.vol_t, row.average_deviation, row.f_term_drift,
                      row.homogeneity_residual, row.probe_vol_spread, row.probe_det_spread);
        csv << buf;
        probe_sets.push_back({{"t", row.t}, {"probes", probes}});
    }
    r.body["x"] = x;
    r.body["grid"] = grid.descriptor;
    r.body["h"] = ir.h;
    r.body["vol_x"] = ir.vol_x;
    r.body["gauge"] = {{"relaxation", o.gauge.relaxation},
                       {"max_iterations", o.gauge.max_iterations},
                       {"tolerance", o.gauge.tolerance},
                       {"variant", s.variant}};
    r.body["rows"] = rows;
    r.body["shen_probes"] = probe_sets;
    r.body["all_converged"] = ir.all_converged();
    r.csv = csv.str();
    if (!ir.all_converged()) {
        r.exit_code = kExitNumerical;
        r.message = "homotopy: gauge iteration did not converge for every t (see rows)";
    }
    return r;
}

double fitted_slope(const std::vector<int>& steps, const std::vector<double>& drift) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(drift[i] > 0.0)) continue;
        double a = std::log(1.0 / steps[i]), b = std::log(drift[i]);
        sx += a, sy += b, sxx += a * a, sxy += a * b;
        ++k;
    }
    if (k < 2) return std::nan("");
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

Report cmd_transport(const Settings& s, const MetricSpec& spec, const FinslerMetric& m) {
    const int n = m.dimension();
    if (!spec.curve) throw InputError("transport: spec has no 'curve' section");
    if (s.steps < 4) throw InputError("transport: --steps must be at least 4");
    Curve curve = Curve::parse(spec.curve->coordinates, spec.curve->a, spec.curve->b, spec.parameters);
    auto y0 = nonzero(point_or(s.y, n, unit(n), "y"), "y");
    FrameRule rule;
    if (s.frame_rule == "linearized") rule = FrameRule::linearized;
    else if (s.frame_rule == "chern") rule = FrameRule::chern;
    else throw InputError("transport: unknown frame rule '" + s.frame_rule + "'");

    Report r;
    TransportResult tr = parallel_transport(m, curve, y0, s.steps);
    std::vector<int> study{s.steps / 4, s.steps / 2, s.steps};
    std::vector<double> drift;
    for (int k : study) drift.push_back(k == s.steps ? norm_drift(tr) : norm_drift(parallel_transport(m, curve, y0, k)));

    std::vector<std::vector<double>> frame(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a) frame[a][a] = 1.0;
    FrameTransportResult fr = frame_transport_check(m, curve, y0, frame, s.steps, rule);

    json samples = json::array();
    const int stride = std::max(1, s.steps / 100);
    std::ostringstream csv;
    csv << "s";
    for (int i = 0; i < n; ++i) csv << ",x" << i + 1;
    for (int i = 0; i < n; ++i) csv << ",y" << i + 1;
    csv << ",F\n";
    char buf[64];
    for (std::size_t k = 0; k < tr.s.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", tr.s[k]);
        csv << buf;
        for (double v : tr.x[k]) std::snprintf(buf, sizeof buf, ",%.17g", v), csv << buf;
        for (double v : tr.y[k]) std::snprintf(buf, sizeof buf, ",%.17g", v), csv << buf;
        std::snprintf(buf, sizeof buf, ",%.17g\n", tr.F[k]);
        csv << buf;
        if (k % stride == 0 || k + 1 == tr.s.size())
            samples.push_back({{"s", tr.s[k]}, {"x", tr.x[k]}, {"y", tr.y[k]}, {"F", tr.F[k]}});
    }
    r.body["curve"] = {{"coordinates", spec.curve->coordinates}, {"a", curve.a()}, {"b", curve.b()}};
    r.body["y0"] = y0;
    r.body["steps"] = s.steps;
    r.body["step_size"] = tr.step;
    r.body["norm_drift"] = norm_drift(tr);
    r.body["convergence"] = {{"steps", study}, {"drift", drift}, {"fitted_order", fitted_slope(study, drift)}};
    r.body["frame"] = {{"rule", s.frame_rule},
                       {"max_drift", fr.max_drift},
                       {"predicted_drift", fr.predicted_drift},
                       {"max_prediction_error", fr.max_prediction_error},
                       {"A_dot_integral", fr.A_dot_integral},
                       {"final_drift", fr.final_drift}};
    r.body["samples"] = samples;
    r.csv = csv.str();
    return r;
}

Report cmd_baoshen(const Settings& s, const MetricSpec&, const FinslerMetric& m) {
    const int n = m.dimension();
    auto x = point_or(s.x, n, std::vector<double>(n, 0.0), "x");
    auto b = point_or(s.y, n, unit(n), "y");
    SphereGrid grid = build_grid(n, resolution(s, n));
    BaoShenResult bs = bao_shen_check(m, x, b, grid, 1e-4, s.workers);
    Report r;
    r.body["x"] = x;
    r.body["b"] = b;
    r.body["grid"] = grid.descriptor;
    r.body["volume"] = volume(m, x, grid, s.workers);
    r.body["lhs"] = bs.lhs;
    r.body["rhs"] = bs.rhs;
    r.body["residual"] = bs.residual;
    return r;
}

using Command = Report (*)(const Settings&, const MetricSpec&, const FinslerMetric&);

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finsler geometry toolkit", "finsler"};
    app.set_version_flag("--version", tool_version());
    Settings s;
    app.set_config("--config", "", "TOML config file; flags override it")->envname(kConfigEnv);
    app.add_option("--spec", s.spec, "metric spec JSON file");
    app.add_option("--x", s.x, "base point, comma separated")->delimiter(',');
    app.add_option("--y", s.y, "direction (transport: y0, baoshen: b)")->delimiter(',');
    app.add_option("--grid", s.grid, "sphere grid resolution")->check(CLI::PositiveNumber);
    app.add_option("--steps", s.steps, "RK4 steps")->check(CLI::PositiveNumber);
    app.add_option("--t-list", s.t_list, "homotopy t values")->delimiter(',');
    app.add_option("--tol", s.tol, "classification tolerance")->check(CLI::PositiveNumber);
    app.add_option("--workers", s.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", s.format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_option("--relaxation", s.relaxation, "gauge relaxation in (0, 1]")->check(CLI::Range(1e-6, 1.0));
    app.add_option("--max-iter", s.max_iterations, "gauge iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--variant", s.variant, "gauge variant")->check(CLI::IsMember({"tied", "independent"}));
    app.add_option("--frame-rule", s.frame_rule, "frame transport rule")->check(CLI::IsMember({"linearized", "chern"}));
    app.require_subcommand(1);

    const std::pair<const char*, Command> commands[] = {
        {"analyze", cmd_analyze}, {"average", cmd_average}, {"homotopy", cmd_homotopy},
        {"transport", cmd_transport}, {"baoshen", cmd_baoshen}};
    const char* help[] = {"tensors, structure equations and classification",
                          "averaged metric and both Levi-Civita pipelines",
                          "gauge solve and invariance report", "parallel transport runs",
                          "volume-derivative check"};
    for (std::size_t i = 0; i < std::size(commands); ++i) app.add_subcommand(commands[i].first, help[i])->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    std::string name = app.get_subcommands().front()->get_name();
    Command cmd = nullptr;
    for (const auto& [n, c] : commands)
        if (name == n) cmd = c;

    try {
        if (s.spec.empty()) throw InputError("--spec is required");
        MetricSpec spec = load_spec(s.spec);
        FinslerMetric metric = instantiate(spec);
        Report r = cmd(s, spec, metric);

        json report;
        report["schema_version"] = kReportSchemaVersion;
        report["tool_version"] = tool_version();
        report["generated_at"] = timestamp();
        report["command"] = name;
        report["metric"] = metric_json(spec, metric);
        report["settings"] = {{"grid", s.grid},  {"steps", s.steps}, {"t_list", s.t_list},
                              {"tol", s.tol},    {"workers", s.workers}, {"relaxation", s.relaxation},
                              {"variant", s.variant}, {"frame_rule", s.frame_rule}};
        report["result"] = r.body;

        if (s.format == "csv") {
            if (!r.csv) throw InputError("csv output is available for transport and homotopy only");
            out << *r.csv;
        } else if (s.format == "text") {
            out << render_text(report);
        } else {
            out << report.dump(2) << '\n';
        }
        if (r.exit_code != kExitOk) err << "error: " << r.message << '\n';
        return r.exit_code;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace finsler::tools
