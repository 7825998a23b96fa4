#include "finsler/transport.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/error.hpp"
#include "finsler/tensor.hpp"

namespace finsler {

namespace {

void reject_xy(const Expression::Node& n) {
    if (n.kind == Expression::Kind::x_var || n.kind == Expression::Kind::y_var)
        throw InputError("curve: coordinates may only use the parameter s");
    if (n.lhs) reject_xy(*n.lhs);
    if (n.rhs) reject_xy(*n.rhs);
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

}  // namespace

Curve::Curve(std::vector<Expression> coordinates, double a, double b)
    : coords_(std::move(coordinates)), a_(a), b_(b) {
    if (coords_.empty()) throw InputError("curve: no coordinates");
    if (!(b_ > a_)) throw InputError("curve: need a < b");
    for (const auto& c : coords_) {
        reject_xy(c.root());
        for (const auto& p : c.parameters())
            if (p != "s") throw InputError("curve: unbound parameter '" + p + "'");
    }
}

Curve Curve::parse(const std::vector<std::string>& coordinates, double a, double b,
                   const std::map<std::string, double>& parameters) {
    std::vector<std::string> names{"s"};
    for (const auto& [k, v] : parameters) {
        if (k == "s") throw InputError("curve: 's' is reserved for the curve parameter");
        names.push_back(k);
    }
    std::vector<Expression> exprs;
    for (const auto& c : coordinates) exprs.push_back(finsler::parse(c, 1, names).bind(parameters));
    return Curve(std::move(exprs), a, b);
}

Curve Curve::line(std::span<const double> from, std::span<const double> to) {
    if (from.size() != to.size()) throw InputError("curve: endpoint dimensions differ");
    std::vector<Expression> exprs;
    auto s = Expression::parameter("s", 1);
    for (std::size_t i = 0; i < from.size(); ++i)
        exprs.push_back(Expression::constant(from[i], 1) + Expression::constant(to[i] - from[i], 1) * s);
    return Curve(std::move(exprs), 0.0, 1.0);
}

void Curve::eval(double s, std::vector<double>& x, std::vector<double>& xdot) const {
    const int n = dimension();
    x.resize(n);
    xdot.resize(n);
    ParamBinding<Jet> bind{"s", Jet::variable(1, 1, 0, s)};
    EvalEnv<Jet> env{{}, {}, std::span<const ParamBinding<Jet>>(&bind, 1)};
    for (int i = 0; i < n; ++i) {
        Jet v = evaluate<Jet>(coords_[i], env);
        x[i] = v.value();
        xdot[i] = v.partial(0);
    }
}

namespace {

void check_inputs(const FinslerMetric& metric, const Curve& curve, std::span<const double> y0, int steps) {
    const int n = metric.dimension();
    if (curve.dimension() != n) throw InputError("transport: curve dimension does not match the metric");
    if (static_cast<int>(y0.size()) != n) throw InputError("transport: y0 has the wrong dimension");
    if (norm(y0) < kMinDirectionNorm) throw InputError("transport: y0 must be nonzero");
    if (steps < 1) throw InputError("transport: steps must be positive");
}

void check_y(std::span<const double> y, double s) {
    if (!(norm(y) >= kMinDirectionNorm))
        throw NumericalError("transport: y collapsed to the zero section at s = " + std::to_string(s));
}

// Generic fixed-step RK4 over the curve parameter.
template <class Rhs, class Record>
void rk4(const Curve& curve, std::vector<double> state, int steps, const Rhs& rhs, const Record& record) {
    const double h = (curve.b() - curve.a()) / steps;
    const std::size_t m = state.size();
    std::vector<double> k1(m), k2(m), k3(m), k4(m), tmp(m);
    record(curve.a(), state);
    for (int step = 0; step < steps; ++step) {
        const double s = curve.a() + step * h;
        rhs(s, state, k1);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
        rhs(s + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
        rhs(s + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = state[i] + h * k3[i];
        rhs(s + h, tmp, k4);
        for (std::size_t i = 0; i < m; ++i) state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        record(step + 1 == steps ? curve.b() : curve.a() + (step + 1) * h, state);
    }
}

}  // namespace

TransportResult parallel_transport(const FinslerMetric& metric, const Curve& curve, std::span<const double> y0,
                                   int steps) {
    check_inputs(metric, curve, y0, steps);
    const int n = metric.dimension();
    TransportResult out;
    out.steps = steps;
    out.step = (curve.b() - curve.a()) / steps;

    std::vector<double> x, xdot;
    auto rhs = [&](double s, const std::vector<double>& y, std::vector<double>& dy) {
        check_y(y, s);
        curve.eval(s, x, xdot);
        ChernData c = chern_coefficients(metric, x, y);
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) acc += c.Gamma.at({k, i, j}) * y[i] * xdot[j];
            dy[k] = -acc;
        }
    };
    auto record = [&](double s, const std::vector<double>& y) {
        check_y(y, s);
        std::vector<double> xs, xd;
        curve.eval(s, xs, xd);
        out.s.push_back(s);
        out.F.push_back(metric.F(std::span<const double>(xs), std::span<const double>(y)));
        out.x.push_back(std::move(xs));
        out.y.push_back(y);
    };
    rk4(curve, std::vector<double>(y0.begin(), y0.end()), steps, rhs, record);
    return out;
}

double norm_drift(const TransportResult& result) {
    double d = 0.0;
    for (double f : result.F) d = std::max(d, std::abs(f - result.F.front()));
    return d;
}

FrameTransportResult frame_transport_check(const FinslerMetric& metric, const Curve& curve,
                                           std::span<const double> y0,
                                           const std::vector<std::vector<double>>& frame, int steps,
                                           FrameRule rule) {
    check_inputs(metric, curve, y0, steps);
    const int n = metric.dimension();
    const int r = static_cast<int>(frame.size());
    if (r == 0) throw InputError("frame transport: empty frame");
    for (const auto& e : frame)
        if (static_cast<int>(e.size()) != n) throw InputError("frame transport: frame vector has the wrong dimension");

    // state: y (n), e_a (r * n), predicted drift p_ab (r * r), integral of |A_dot| (1)
    const std::size_t off_e = n, off_p = n + r * n, off_q = off_p + r * r;
    std::vector<double> state(off_q + 1, 0.0);
    std::copy(y0.begin(), y0.end(), state.begin());
    for (int a = 0; a < r; ++a) std::copy(frame[a].begin(), frame[a].end(), state.begin() + off_e + a * n);

    std::vector<double> x, xdot;
    auto rhs = [&](double s, const std::vector<double>& st, std::vector<double>& d) {
        std::span<const double> y(st.data(), n);
        check_y(y, s);
        curve.eval(s, x, xdot);
        PointTensors t = point_tensors(metric, x, y);
        for (int k = 0; k < n; ++k) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) acc += t.chern.Gamma.at({k, i, j}) * y[i] * xdot[j];
            d[k] = -acc;
        }
        for (int a = 0; a < r; ++a) {
            const double* e = st.data() + off_e + a * n;
            for (int k = 0; k < n; ++k) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double c = rule == FrameRule::chern ? t.chern.Gamma.at({k, i, j})
                                                                  : t.dN_dy.at({k, j, i});
                        acc += c * e[i] * xdot[j];
                    }
                d[off_e + a * n + k] = -acc;
            }
        }
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                const double* ea = st.data() + off_e + a * n;
                const double* eb = st.data() + off_e + b * n;
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) acc += t.A_dot.at({i, j, k}) * ea[i] * eb[j] * xdot[k];
                d[off_p + a * r + b] = -2.0 * acc;
            }
        double speed = norm(xdot);
        d[off_q] = t.A_dot.max_abs() * speed;
    };

    FrameTransportResult out;
    out.base.steps = steps;
    out.base.step = (curve.b() - curve.a()) / steps;
    std::vector<double> g0;
    auto gram = [&](std::span<const double> g, const std::vector<double>& st) {
        std::vector<double> m(r * r, 0.0);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                const double* ea = st.data() + off_e + a * n;
                const double* eb = st.data() + off_e + b * n;
                double acc = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) acc += g[i * n + j] * ea[i] * eb[j];
                m[a * r + b] = acc;
            }
        return m;
    };
    auto record = [&](double s, const std::vector<double>& st) {
        std::span<const double> y(st.data(), n);
        check_y(y, s);
        std::vector<double> xs, xd;
        curve.eval(s, xs, xd);
        MetricAt m = metric_at(metric, xs, y);
        auto G = gram(m.g, st);
        if (g0.empty()) g0 = G;
        for (int ab = 0; ab < r * r; ++ab) {
            const double drift = G[ab] - g0[ab];
            const double pred = st[off_p + ab];
            out.max_drift = std::max(out.max_drift, std::abs(drift));
            out.predicted_drift = std::max(out.predicted_drift, std::abs(pred));
            out.max_prediction_error = std::max(out.max_prediction_error, std::abs(drift - pred));
        }
        out.final_drift.assign(r * r, 0.0);
        for (int ab = 0; ab < r * r; ++ab) out.final_drift[ab] = G[ab] - g0[ab];
        out.A_dot_integral = st[off_q];
        std::vector<std::vector<double>> fr(r);
        for (int a = 0; a < r; ++a) fr[a].assign(st.begin() + off_e + a * n, st.begin() + off_e + (a + 1) * n);
        out.frames.push_back(std::move(fr));
        out.base.s.push_back(s);
        out.base.F.push_back(m.F);
        out.base.x.push_back(std::move(xs));
        out.base.y.push_back(std::vector<double>(y.begin(), y.end()));
    };
    rk4(curve, std::move(state), steps, rhs, record);
    return out;
}

}  // namespace finsler
