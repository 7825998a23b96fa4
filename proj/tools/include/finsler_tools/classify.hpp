#pragma once

#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler::tools {

struct Verdict {
    bool holds = false;
    double residual = 0.0;
    double tolerance = 0.0;
};

struct ProbeRow {
    std::vector<double> x, y;
    double A = 0.0, P = 0.0, A_dot = 0.0;  // max abs components
};

struct ProbeFailure {
    std::vector<double> x, y;
    std::string message;
};

// Verdicts hold at the probed points only.
struct Classification {
    Verdict riemannian;        // max |A|
    Verdict berwald;           // max |P|
    Verdict berwald_gamma;     // max y-variation of Gamma at fixed x
    Verdict landsberg;         // max |A_dot|
    bool hierarchy_violation = false;
    bool berwald_tests_agree = true;
    std::vector<std::vector<double>> x_probes;
    std::vector<double> gamma_y_variation;  // per x-probe
    int directions = 0;
    std::vector<ProbeRow> rows;
    std::vector<ProbeFailure> failures;
};

struct ClassifyOptions {
    double tolerance = 1e-6;
    int directions = 16;
    double probe_offset = 0.1;  // x-probes: x, x +- offset (1, ..., 1)
    int workers = 1;
};

std::vector<std::vector<double>> classification_probes(std::span<const double> x, double offset);

Classification classify(const FinslerMetric& metric, const std::vector<std::vector<double>>& x_probes,
                        const std::vector<std::vector<double>>& y_probes, const ClassifyOptions& options = {});
Classification classify(const FinslerMetric& metric, std::span<const double> x, const ClassifyOptions& options = {});

}  // namespace finsler::tools
