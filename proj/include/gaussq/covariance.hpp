#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gaussq {

struct SeriesOptions {
    double tol = 1e-13;
    long max_terms = 1'000'000;
};

// Gauss hypergeometric 2F1(a,b;c;z) for z in [0,1]. z = 1 needs c-a-b > 0.
double eval_2f1(double a, double b, double c, double z, const SeriesOptions& opt = {});

// Generalised hypergeometric 1F2(a;b1,b2;z). Entire in z.
double eval_1f2(double a, double b1, double b2, double z, const SeriesOptions& opt = {});

// Riemann-Liouville fBM, normalised so that Var(W_1) = 1.
double rlfbm_cov(double H, double u, double v);

// Standard (Mandelbrot-van Ness) fBM.
double stdfbm_cov(double H, double t, double s);

// Stationary fractional Ornstein-Uhlenbeck auto-covariance at lag s.
double fou_cov(double H, double lambda, double sigma, double s);

enum class ProcessKind { RLfBM, StdFBM, FOU };
enum class CovKind { PV, NS };

const char* to_string(ProcessKind k);
const char* to_string(CovKind k);
ProcessKind parse_process(const std::string& s);
CovKind parse_cov_kind(const std::string& s);

struct ProcessSpec {
    ProcessKind kind = ProcessKind::RLfBM;
    double H = 0.5;
    double lambda = 1.0;
    double sigma = 1.0;

    void validate() const;
    bool is_fbm() const { return kind != ProcessKind::FOU; }
};

struct GridSpec {
    double T = 1.0;
    int N = 1;
    std::vector<double> points;  // t_0 = 0, ..., t_N = T

    static GridSpec uniform(double T, int N);
    void validate() const;
};

struct CovMatrix {
    Eigen::MatrixXd entries;
    ProcessSpec process;
    GridSpec grid;
    CovKind kind = CovKind::PV;

    Eigen::Index dim() const { return entries.rows(); }
};

// Covariance of path values (PV) or of increments (NS) on the grid.
// fBM kinds use t_1..t_N (dim N); fOU uses t_0..t_N (dim N+1).
// The positive-definiteness check computes the spectrum anyway; pass
// `eigenvalues_out` to keep it (ascending) instead of recomputing.
CovMatrix build_cov(const ProcessSpec& process, const GridSpec& grid, CovKind kind,
                    Eigen::VectorXd* eigenvalues_out = nullptr);

// Dense all-ones lower-triangular N x N matrix.
Eigen::MatrixXd lower_cumsum_matrix(int N);

}  // namespace gaussq
