#include "gaussq/sampler.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "gaussq/errors.hpp"
#include "gaussq/linalg.hpp"

namespace gaussq {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stage) {
    return splitmix64(master ^ splitmix64(stage * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

double CounterRng::normal() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    return r * std::cos(phi);
}

std::pair<Eigen::VectorXd, double> sample_std_normal(int dim, std::uint64_t seed) {
    if (dim < 1) throw InvalidInput("sample_std_normal: dim must be at least 1");
    CounterRng rng(seed);
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) z(i) = rng.normal();
    return {z, z.norm()};
}

SampleRecord sample_path_with_root(const Eigen::MatrixXd& root, const Eigen::VectorXd& z, CovKind route) {
    if (root.cols() != z.size()) throw InvalidInput("sample_path: dimension mismatch between covariance and z");
    SampleRecord rec;
    rec.z = z;
    rec.z_norm = z.norm();
    rec.x = root * z;
    rec.x_norm = rec.x.norm();
    if (route == CovKind::NS) rec.y = cumsum_apply(rec.x);
    rec.direction = rec.x_norm > 0.0 ? Eigen::VectorXd(rec.x / rec.x_norm) : rec.x;
    return rec;
}

SampleRecord sample_path(const CovMatrix& sigma, const Eigen::VectorXd& z, CovKind route) {
    if (sigma.kind != route)
        throw InvalidInput(std::string("sample_path: route ") + to_string(route) +
                           " does not match covariance kind " + to_string(sigma.kind));
    return sample_path_with_root(sqrtm_psd(sigma.entries), z, route);
}

namespace {

double rlfbm_holder_constant(double H) {
    // 100 x 100 grid of [0,1]^2, off-diagonal pairs only.
    constexpr int M = 100;
    std::vector<double> t(M), var(M);
    for (int i = 0; i < M; ++i) {
        t[i] = static_cast<double>(i) / (M - 1);
        var[i] = rlfbm_cov(H, t[i], t[i]);
    }
    double best = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j) {
            const double d = var[i] + var[j] - 2.0 * rlfbm_cov(H, t[i], t[j]);
            best = std::max(best, d / std::pow(t[j] - t[i], 2.0 * H));
        }
    return std::sqrt(best);
}

double fou_holder_constant(double H, double lambda, double sigma) {
    const double r0 = fou_cov(H, lambda, sigma, 0.0);
    // The quotient tends to sigma^2 as the lag shrinks; include that limit.
    double best = sigma * sigma;
    constexpr int M = 1000;
    for (int k = 1; k <= M; ++k) {
        const double tau = static_cast<double>(k) / M;
        const double r = 2.0 * (r0 - fou_cov(H, lambda, sigma, tau));
        best = std::max(best, r / std::pow(tau, 2.0 * H));
    }
    return std::sqrt(best);
}

}  // namespace

double holder_constant(const ProcessSpec& p) {
    p.validate();
    static std::mutex mu;
    static std::map<std::tuple<int, double, double, double>, double> cache;
    const auto key = std::make_tuple(static_cast<int>(p.kind), p.H,
                                     p.kind == ProcessKind::FOU ? p.lambda : 0.0,
                                     p.kind == ProcessKind::FOU ? p.sigma : 0.0);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    double C = 1.0;
    if (p.kind == ProcessKind::RLfBM) C = rlfbm_holder_constant(p.H);
    if (p.kind == ProcessKind::FOU) C = fou_holder_constant(p.H, p.lambda, p.sigma);
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = C;
    return C;
}

double xi_bound(const ProcessSpec& p, double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw InvalidInput("xi_bound: beta must lie in [0,1)");
    p.validate();
    const double mean_bound = 16.3 * holder_constant(p) / std::sqrt(p.H);
    double sd = 1.0;
    if (p.kind == ProcessKind::FOU)
        sd = std::sqrt(p.sigma * p.sigma * std::pow(p.lambda, -2.0 * p.H) * std::tgamma(2.0 * p.H + 1.0) / 2.0);
    return mean_bound + sd * std::sqrt(2.0 * std::log(2.0 / (1.0 - beta)));
}

void RBergomiSpec::validate() const {
    if (!xi0) throw InvalidInput("rBergomi: forward variance curve is missing");
    if (!(eta > 0.0)) throw InvalidInput("rBergomi: eta must be positive");
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("rBergomi: H must lie in (0,1)");
    if (c_tilde != 1.0 && c_tilde != 0.5) throw InvalidInput("rBergomi: c_tilde must be 1 or 1/2");
}

std::pair<Eigen::VectorXd, double> rbergomi_prefactor(const RBergomiSpec& spec, const GridSpec& grid) {
    spec.validate();
    grid.validate();
    Eigen::VectorXd f(grid.N);
    for (int i = 1; i <= grid.N; ++i) {
        const double t = grid.points[i];
        const double xi = spec.xi0(t);
        if (!(xi > 0.0)) throw InvalidInput("rBergomi: forward variance must be positive on the grid");
        f(i - 1) = std::pow(xi, spec.c_tilde) *
                   std::exp(-spec.c_tilde * spec.eta * spec.eta / 2.0 * std::pow(t, 2.0 * spec.H));
    }
    return {f, spec.c_tilde * spec.eta};
}

Eigen::VectorXd classical_exp_path(const Eigen::VectorXd& f, double c, const Eigen::VectorXd& x) {
    if (c == 0.0) throw InvalidInput("exponent scale c must be nonzero");
    if (f.size() != x.size()) throw InvalidInput("f and x must have equal length");
    return f.cwiseProduct((c * x).array().exp().matrix());
}

double riemann_sum(const Eigen::VectorXd& f, double c, const Eigen::VectorXd& x, double T) {
    return T / static_cast<double>(x.size()) * classical_exp_path(f, c, x).sum();
}

}  // namespace gaussq
