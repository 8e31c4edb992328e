#include "gaussq/qroutines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "gaussq/errors.hpp"
#include "gaussq/sampler.hpp"

namespace gaussq {

namespace {

bool is_diagonal(const Eigen::MatrixXd& M) {
    Eigen::MatrixXd off = M;
    off.diagonal().setZero();
    return off.isZero(0.0);
}

void require_symmetric(const Eigen::MatrixXd& B, const char* who) {
    const double asym = (B - B.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) {
        std::ostringstream os;
        os << who << ": encoded block is not Hermitian (asymmetry " << asym << ")";
        throw InvalidInput(os.str());
    }
}

// Applies a scalar function to a symmetric matrix through its eigenvalues.
template <class F>
Eigen::MatrixXd spectral_apply(const Eigen::MatrixXd& B, F&& f) {
    if (is_diagonal(B)) {
        Eigen::VectorXd d = B.diagonal().unaryExpr(f);
        return d.asDiagonal();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()));
    if (es.info() != Eigen::Success) throw NumericError("spectral calculus: eigensolver failed");
    Eigen::VectorXd d = es.eigenvalues().unaryExpr(f);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

BlockEncoding qsvt_apply(const BlockEncoding& be, const PolySpec& P, double delta) {
    const Eigen::Index d = be.sys_dim();
    Eigen::MatrixXd B = be.U.topLeftCorner(d, d);
    require_symmetric(B, "qsvt_apply");
    if (P.meta.sup_bound > 0.5 + 1e-12)
        throw PreconditionError("qsvt_apply: polynomial sup bound " + std::to_string(P.meta.sup_bound) +
                                " exceeds 1/2");
    Eigen::MatrixXd M = spectral_apply(B, [&](double x) { return P(x); });
    BlockEncoding out = dilation_block_encoding(M, 1.0);
    const double k = P.degree;
    out.a = be.a + 2;
    out.eps = 4.0 * k * std::sqrt(be.eps / be.alpha) + delta;
    out.tally = be.tally.scaled(k);
    out.tally.add("qsvt.be_calls", k);
    out.label = "qsvt(" + be.label + ")";
    return out;
}

int power_extra_ancillas(double eps) {
    const double ll = std::log2(std::max(2.0, std::log2(1.0 / eps)));
    return std::max(1, static_cast<int>(std::ceil(ll)));
}

BlockEncoding matrix_power_be(const BlockEncoding& be, double c, double kappa_hat, double eps) {
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidInput("matrix_power_be: c must lie in [0,1]");
    if (!(kappa_hat >= 2.0)) throw InvalidInput("matrix_power_be: kappa_hat must be at least 2");
    if (!(eps > 0.0)) throw InvalidInput("matrix_power_be: eps must be positive");
    const double l3 = std::pow(std::max(1.0, std::log2(kappa_hat / eps)), 3.0);
    if (be.eps > eps / (kappa_hat * l3))
        throw PreconditionError("matrix_power_be: input encoding error too large for the requested accuracy");

    const Eigen::Index off = be.active_offset, cnt = be.active_count;
    Eigen::MatrixXd H = extract_block(be).block(off, off, cnt, cnt);
    require_symmetric(H, "matrix_power_be");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
    if (es.info() != Eigen::Success) throw NumericError("matrix_power_be: eigensolver failed");
    const double tol = 1e-9;
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(cnt - 1);
    if (lo < 1.0 / kappa_hat - tol || hi > 1.0 + tol) {
        std::ostringstream os;
        os << "matrix_power_be: spectrum [" << lo << ", " << hi << "] outside [1/" << kappa_hat << ", 1]";
        throw SpectrumRangeError(os.str());
    }
    Eigen::VectorXd pw = es.eigenvalues().unaryExpr([c](double l) { return std::pow(std::max(l, 0.0), c); });
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(be.sys_dim(), be.sys_dim());
    M.block(off, off, cnt, cnt) = 0.5 * es.eigenvectors() * pw.asDiagonal() * es.eigenvectors().transpose();

    BlockEncoding out = dilation_block_encoding(M, 2.0);
    out.a = be.a + power_extra_ancillas(eps);
    out.eps = eps;
    out.active_offset = off;
    out.active_count = cnt;
    const double l2 = std::pow(std::max(1.0, std::log2(kappa_hat / eps)), 2.0);
    const double calls = std::ceil(be.alpha * kappa_hat * l2);
    out.tally = be.tally.scaled(calls);
    out.tally.add("matrix_power.be_calls", calls);
    out.label = "power(" + be.label + ")";
    return out;
}

double qaa_rounds(double a_lower, double eps) {
    if (!(a_lower > 0.0) || !(eps > 0.0)) throw InvalidInput("qaa_rounds: need a_lower > 0 and eps > 0");
    return std::ceil(std::log(2.0 / eps) / a_lower);
}

std::vector<bool> zero_ancilla_mask(Eigen::Index total_dim, Eigen::Index sys_dim) {
    std::vector<bool> m(total_dim, false);
    for (Eigen::Index i = 0; i < std::min(total_dim, sys_dim); ++i) m[i] = true;
    return m;
}

QAAResult ideal_qaa(const Eigen::VectorXd& prepared, const std::vector<bool>& good, double a_lower, double eps) {
    if (static_cast<Eigen::Index>(good.size()) != prepared.size())
        throw InvalidInput("ideal_qaa: mask size does not match state");
    Eigen::VectorXd proj = prepared;
    for (Eigen::Index i = 0; i < proj.size(); ++i)
        if (!good[i]) proj(i) = 0.0;
    const double amp = proj.norm();
    if (amp < a_lower * (1.0 - 1e-9)) {
        std::ostringstream os;
        os << "ideal_qaa: good amplitude " << amp << " is below the assumed lower bound " << a_lower;
        throw AmplitudeBoundViolation(os.str(), amp, a_lower);
    }
    QAAResult r;
    r.amplitude = amp;
    r.state.amps = proj / amp;
    int n = 0;
    while ((Eigen::Index(1) << n) < proj.size()) ++n;
    r.state.n = n;
    r.rounds = qaa_rounds(a_lower, eps);
    r.tally.add("qaa.rounds", r.rounds);
    r.tally.add("qaa.prep_calls", 2.0 * r.rounds + 1.0);
    return r;
}

QAAResult ideal_qaa(const Eigen::MatrixXd& U, const std::vector<bool>& good, double a_lower, double eps) {
    return ideal_qaa(Eigen::VectorXd(U.col(0)), good, a_lower, eps);
}

int qae_exponent(double eps_qae) {
    if (!(eps_qae > 0.0)) throw InvalidInput("qae: eps must be positive");
    return static_cast<int>(std::ceil(std::log2(std::numbers::pi / eps_qae))) + 1;
}

namespace {

// P(median of n runs is good) when each run is good with probability p.
double median_confidence(double p, int n) {
    double total = 0.0;
    for (int k = n / 2 + 1; k <= n; ++k)
        total += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                          k * std::log(p) + (n - k) * std::log1p(-p));
    return total;
}

// Probability of phase outcome j0 + k when the phase times M is j0 + delta.
double fejer(double delta, double k, double M) {
    if (delta == 0.0) return k == 0.0 ? 1.0 : 0.0;
    const double num = std::sin(std::numbers::pi * delta);
    const double den = M * std::sin(std::numbers::pi * (delta - k) / M);
    const double r = num / den;
    return r * r;
}

}  // namespace

QAEOutcome qae_from_amplitude(double a, double eps_qae, QAEMode mode, std::uint64_t seed, int runs) {
    if (runs < 1) throw InvalidInput("qae: need at least one run");
    a = std::clamp(a, 0.0, 1.0);
    const double theta = std::asin(a);
    const int m = qae_exponent(eps_qae);
    const double M = std::ldexp(1.0, m);

    // The estimate depends on the outcome only through |sin(pi y / M)|, and
    // the two eigenphase branches are mirror images y <-> M - y, so sampling
    // the branch at phase theta/pi gives the exact estimate distribution.
    const double x = std::ldexp(theta / std::numbers::pi, m);
    const double j0 = std::floor(x);
    const double delta = x - j0;
    constexpr double kWindow = 32768.0;
    const bool full = M <= 2.0 * kWindow;
    const double k_lo = full ? -M / 2.0 + 1.0 : -kWindow + 1.0;
    const double k_hi = full ? M / 2.0 : kWindow;
    std::vector<double> ks, cdf;
    ks.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    double mass = 0.0;
    for (double k = k_lo; k <= k_hi; k += 1.0) {
        const double p = fejer(delta, k, M);
        if (p == 0.0) continue;
        mass += p;
        ks.push_back(k);
        cdf.push_back(mass);
    }

    QAEOutcome out;
    out.mode = mode;
    out.eps_qae = eps_qae;
    out.m = m;
    out.grover_queries = M;
    out.runs = runs;
    out.truncated_mass = std::max(0.0, 1.0 - mass);
    for (int r = 0; r < runs; ++r) {
        CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        const double u = rng.uniform() * mass;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const double k = ks[std::min<std::size_t>(it - cdf.begin(), ks.size() - 1)];
        const double th = theta + std::numbers::pi * (k - delta) / M;
        const double s = std::abs(std::sin(th));
        out.run_estimates.push_back(mode == QAEMode::Amplitude ? s : s * s);
    }
    std::vector<double> sorted = out.run_estimates;
    std::nth_element(sorted.begin(), sorted.begin() + runs / 2, sorted.end());
    out.estimate = sorted[runs / 2];
    out.confidence = median_confidence(8.0 / (std::numbers::pi * std::numbers::pi), runs);
    out.tally.add("qae.grover_queries", M * runs);
    out.tally.add("qae.runs", runs);
    return out;
}

QAEOutcome qae(const Eigen::VectorXd& prepared, const std::vector<bool>& good, double eps_qae, QAEMode mode,
               std::uint64_t seed, int runs) {
    if (static_cast<Eigen::Index>(good.size()) != prepared.size()) throw InvalidInput("qae: mask size does not match state");
    double s2 = 0.0;
    for (Eigen::Index i = 0; i < prepared.size(); ++i)
        if (good[i]) s2 += prepared(i) * prepared(i);
    return qae_from_amplitude(std::sqrt(s2), eps_qae, mode, seed, runs);
}

std::vector<double> qae_outcome_distribution(double a, int m) {
    if (m < 1 || m > 22) throw InvalidInput("qae_outcome_distribution: m must lie in [1, 22]");
    const double M = std::ldexp(1.0, m);
    const double phi = std::asin(std::clamp(a, 0.0, 1.0)) / std::numbers::pi;
    auto branch = [&](double ph, double y) {
        const double x = ph * M - y;
        const double den = M * std::sin(std::numbers::pi * x / M);
        if (std::abs(den) < 1e-12) return 1.0;  // phase sits exactly on outcome y
        const double num = std::sin(std::numbers::pi * x);
        return (num / den) * (num / den);
    };
    std::vector<double> p(static_cast<std::size_t>(M));
    for (std::size_t y = 0; y < p.size(); ++y)
        p[y] = 0.5 * (branch(phi, static_cast<double>(y)) + branch(1.0 - phi, static_cast<double>(y)));
    return p;
}

std::vector<double> qae_statevector_distribution(const Eigen::VectorXd& prepared, const std::vector<bool>& good,
                                                 int m) {
    const Eigen::Index d = prepared.size();
    int dq = 0;
    while ((Eigen::Index(1) << dq) < d) ++dq;
    if (m < 1 || m + dq > 22) throw InvalidInput("qae_statevector_distribution: m + log2(dim) must be at most 22");
    if (static_cast<Eigen::Index>(good.size()) != d) throw InvalidInput("qae_statevector_distribution: mask size mismatch");
    const Eigen::Index M = Eigen::Index(1) << m;

    // Grover iterate Q = -(I - 2|psi><psi|)(I - 2 Pi_good).
    auto grover = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd w = v;
        for (Eigen::Index i = 0; i < d; ++i)
            if (good[i]) w(i) = -w(i);
        w -= 2.0 * prepared.dot(w) * prepared;
        return Eigen::VectorXd(-w);
    };
    Eigen::MatrixXd powers(d, M);
    Eigen::VectorXd v = prepared;
    for (Eigen::Index y = 0; y < M; ++y) {
        powers.col(y) = v;
        v = grover(v);
    }
    // Inverse QFT on the counting register, one system component at a time.
    std::vector<double> p(M, 0.0);
    std::vector<std::complex<double>> twiddle(M);
    for (Eigen::Index t = 0; t < M; ++t)
        twiddle[t] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(M));
    for (Eigen::Index k = 0; k < M; ++k) {
        double total = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            std::complex<double> acc = 0.0;
            for (Eigen::Index y = 0; y < M; ++y) acc += twiddle[(y * k) % M] * powers(j, y);
            total += std::norm(acc / static_cast<double>(M));
        }
        p[k] = total;
    }
    return p;
}

}  // namespace gaussq
