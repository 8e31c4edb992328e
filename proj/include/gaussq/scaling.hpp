#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gaussq/covariance.hpp"
#include "gaussq/linalg.hpp"

namespace gaussq {

enum class Characteristic { LambdaMin, LambdaMax, Frob, Kappa };

const char* to_string(Characteristic c);
Characteristic parse_characteristic(const std::string& s);

struct ScalingRow {
    ProcessKind process = ProcessKind::RLfBM;
    CovKind kind = CovKind::PV;
    double H = 0.5;
    int N = 0;
    int dim = 0;
    CovCharacteristics ch;
    bool ok = true;
    std::string error;  // set when the cell failed (e.g. degenerate covariance)

    double value(Characteristic c) const;
};

// Worker count from GAUSSQPIPE_THREADS (default 1, never above the
// hardware concurrency).
int worker_count();

// One row per (H, N), ordered by H then N. Uniform grid on [0, 1]; fOU uses
// lambda = sigma = 1. Failed cells are reported, not thrown.
std::vector<ScalingRow> sweep_characteristics(ProcessKind process, CovKind kind, const std::vector<double>& H_list,
                                              const std::vector<int>& N_list, int threads = 0);

struct ScalingFit {
    double p = 0.0;
    double A_endpoint = 0.0;  // curve A N^p through the leftmost and rightmost tail points
    double A_ols = 0.0;       // exp(intercept) of the log-log regression
    double r2 = 0.0;
    std::vector<std::pair<double, double>> points;  // the tail actually fitted
};

// Log-log least squares on the largest ceil(tail_fraction * n) points.
ScalingFit fit_power_law(std::vector<std::pair<double, double>> points, double tail_fraction = 0.5);

// Endpoint coefficient for a given exponent: A = ((y_r^{1/p} - y_l^{1/p}) / (N_r - N_l))^p,
// or y_r when p is zero.
double endpoint_coefficient(double N_l, double y_l, double N_r, double y_r, double p);

// Tabulated asymptotic exponent of a covariance characteristic. Kappa is
// lambda_max minus lambda_min.
double expected_exponent(ProcessKind process, CovKind kind, Characteristic c, double H);

// True when H sits within `margin` of a regime switch of that cell, where the
// finite-N slope is known to converge slowly.
bool near_regime_boundary(ProcessKind process, CovKind kind, Characteristic c, double H, double margin = 0.1);

// N-exponent of the cost of preparing a sample path through the given
// covariance kind: p(frob / lambda_max) + 1.5 p(kappa) (+1 for the NS route).
double complexity_exponent(ProcessKind process, double H, CovKind route);

// Best-route exponent for fBM paths.
double p_tilde(double H);

}  // namespace gaussq
