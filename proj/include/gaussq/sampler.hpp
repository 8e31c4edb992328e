#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "gaussq/covariance.hpp"

namespace gaussq {

std::uint64_t splitmix64(std::uint64_t x);

// Sub-seed for a pipeline stage: independent streams from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stage);

// Counter-based generator: the k-th draw depends only on (seed, k), so a
// vector of length d is a prefix of the same seed's vector of length d' > d.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x6a09e667f3bcc909ULL)) {}
    std::uint64_t next_u64() { return splitmix64(key_ + counter_++); }
    // Uniform on (0, 1].
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }
    // Box-Muller; caches the second variate of each pair.
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::optional<double> spare_;
};

std::pair<Eigen::VectorXd, double> sample_std_normal(int dim, std::uint64_t seed);

struct SampleRecord {
    std::uint64_t seed = 0;
    Eigen::VectorXd z;
    double z_norm = 0.0;
    Eigen::VectorXd x;  // Sigma^{1/2} z
    double x_norm = 0.0;
    std::optional<Eigen::VectorXd> y;  // cumulative sums of x (NS route)
    Eigen::VectorXd direction;         // x / ||x||

    // The path: y for the NS route, x otherwise.
    const Eigen::VectorXd& path() const { return y ? *y : x; }
};

// PV route returns x = Sigma^{1/2} z; NS route also fills y = L x.
SampleRecord sample_path(const CovMatrix& sigma, const Eigen::VectorXd& z, CovKind route);
// Same, reusing a precomputed square root (for Monte Carlo loops).
SampleRecord sample_path_with_root(const Eigen::MatrixXd& root, const Eigen::VectorXd& z, CovKind route);

// Hoelder-type constant C with E[(G_t - G_s)^2] <= C^2 |t-s|^{2H} on [0,1].
double holder_constant(const ProcessSpec& process);

// High-probability sup-norm bound for a path on [0,1].
double xi_bound(const ProcessSpec& process, double beta = 0.9999);

struct RBergomiSpec {
    std::function<double(double)> xi0 = [](double) { return 0.04; };
    double eta = 1.9;
    double H = 0.1;
    double c_tilde = 1.0;  // 1 for the variance path, 1/2 for volatility

    void validate() const;
};

// Prefactors on t_1..t_N and the exponent scale c = c_tilde * eta.
std::pair<Eigen::VectorXd, double> rbergomi_prefactor(const RBergomiSpec& spec, const GridSpec& grid);

Eigen::VectorXd classical_exp_path(const Eigen::VectorXd& f, double c, const Eigen::VectorXd& x);

// (T/N) * sum_i f_i exp(c x_i)
double riemann_sum(const Eigen::VectorXd& f, double c, const Eigen::VectorXd& x, double T);

}  // namespace gaussq
