#include "gaussq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gaussq/errors.hpp"
#include "gaussq/linalg.hpp"
#include "gaussq/polyapprox.hpp"
#include "gaussq/sampler.hpp"
#include "gaussq/scaling.hpp"

namespace gaussq {

const char* to_string(EstimateMode m) { return m == EstimateMode::Oracle ? "oracle" : "powerlaw"; }
const char* to_string(Route r) { return r == Route::X ? "X" : "Y"; }

EstimateMode parse_estimate_mode(const std::string& s) {
    if (s == "oracle") return EstimateMode::Oracle;
    if (s == "powerlaw") return EstimateMode::PowerLaw;
    throw InvalidInput("unknown estimate mode '" + s + "' (expected oracle or powerlaw)");
}

Route parse_route(const std::string& s) {
    if (s == "X" || s == "x" || s == "pv") return Route::X;
    if (s == "Y" || s == "y" || s == "ns") return Route::Y;
    throw InvalidInput("unknown route '" + s + "' (expected X or Y)");
}

// ---------------------------------------------------------------- estimates

double SpectralEstimates::kappa_hat() const { return std::max(L * kappa_tilde, 2.0); }

void SpectralEstimates::validate() const {
    if (!(lambda_max_tilde > 0.0) || !std::isfinite(lambda_max_tilde))
        throw InvalidInput("estimates: lambda_max_tilde must be positive");
    if (!(kappa_tilde >= 1.0) || !std::isfinite(kappa_tilde)) throw InvalidInput("estimates: kappa_tilde must be >= 1");
    if (!(L >= 1.0) || !(K >= 1.0)) throw InvalidInput("estimates: L and K must be >= 1");
}

namespace {

std::pair<double, double> extreme_eigenvalues(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
    return {es.eigenvalues()(0), es.eigenvalues()(A.rows() - 1)};
}

}  // namespace

void SpectralEstimates::check_against(const CovMatrix& sigma) const {
    validate();
    const auto [lmin, lmax] = extreme_eigenvalues(sigma.entries);
    const double kappa = lmax / lmin;
    constexpr double rel = 1e-9;
    std::ostringstream os;
    if (lambda_max_tilde < lmax * (1 - rel) || lambda_max_tilde > L * lmax * (1 + rel))
        os << "lambda_max_tilde " << lambda_max_tilde << " outside [" << lmax << ", " << L * lmax << "]";
    else if (kappa_tilde < kappa * (1 - rel) || kappa_tilde > K * kappa * (1 + rel))
        os << "kappa_tilde " << kappa_tilde << " outside [" << kappa << ", " << K * kappa << "]";
    if (!os.str().empty()) throw EstimateInconsistency("spectral estimates (" + std::string(to_string(mode)) + "): " + os.str());
}

SpectralEstimates SpectralEstimates::oracle(const CovMatrix& sigma) {
    const auto [lmin, lmax] = extreme_eigenvalues(sigma.entries);
    if (!(lmin > 0.0)) throw DegeneracyError("oracle estimates: covariance is singular", lmin);
    SpectralEstimates e;
    e.lambda_max_tilde = lmax;
    e.kappa_tilde = lmax / lmin;
    e.mode = EstimateMode::Oracle;
    return e;
}

SpectralEstimates SpectralEstimates::powerlaw(const CovMatrix& sigma) {
    static const int ladder[] = {4, 8, 16, 32, 64};
    std::vector<std::pair<double, double>> lam, kap;
    for (int n : ladder) {
        Eigen::VectorXd ev;
        build_cov(sigma.process, GridSpec::uniform(sigma.grid.T, n), sigma.kind, &ev);
        lam.emplace_back(n, ev(ev.size() - 1));
        kap.emplace_back(n, ev(ev.size() - 1) / ev(0));
    }
    const ScalingFit fl = fit_power_law(lam, 1.0);
    const ScalingFit fk = fit_power_law(kap, 1.0);
    const double N = sigma.grid.N;
    // A fit within a factor sqrt(2) of the truth, inflated by sqrt(2), lands
    // inside [truth, 2 truth].
    SpectralEstimates e;
    e.lambda_max_tilde = std::sqrt(2.0) * fl.A_ols * std::pow(N, fl.p);
    e.kappa_tilde = std::max(1.0, std::sqrt(2.0) * fk.A_ols * std::pow(N, fk.p));
    e.L = 2.0;
    e.K = 2.0;
    e.mode = EstimateMode::PowerLaw;
    e.check_against(sigma);
    return e;
}

SpectralEstimates SpectralEstimates::make(const CovMatrix& sigma, EstimateMode mode) {
    return mode == EstimateMode::Oracle ? oracle(sigma) : powerlaw(sigma);
}

// ---------------------------------------------------------------- helpers

double state_fidelity(const QState& state, const Eigen::VectorXd& reference) {
    const Eigen::VectorXd ref = QState::embed(reference).amps;
    if (ref.size() != state.amps.size()) throw InvalidInput("state_fidelity: register sizes differ");
    return std::abs(ref.dot(state.amps));
}

namespace {

void require_inputs(const CovMatrix& sigma, const Eigen::VectorXd& z, double eps) {
    if (z.size() != sigma.dim()) throw InvalidInput("pipeline: z has the wrong dimension");
    if (!(z.norm() > 0.0)) throw InvalidInput("pipeline: z must be nonzero");
    if (!(eps > 0.0 && eps <= 2.0)) throw InvalidInput("pipeline: eps must lie in (0, 2]");
}

// Classical x = Sigma^{1/2} z, or its running sums on route Y.
Eigen::VectorXd classical_path(const CovMatrix& sigma, const Eigen::VectorXd& z, Route route) {
    Eigen::VectorXd x = sqrtm_psd(sigma.entries) * z;
    return route == Route::Y ? cumsum_apply(x) : x;
}

// Ideal loader of z on the system register, placed on the zero ancilla slice.
Eigen::VectorXd zero_slice_input(const Eigen::VectorXd& w, Eigen::Index total) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(total);
    const Eigen::VectorXd e = QState::embed(w).amps;
    v.head(e.size()) = e;
    return v;
}

QState system_slice(const Eigen::VectorXd& full, int n) {
    QState s;
    s.n = n;
    s.amps = full.head(Eigen::Index(1) << n);
    return s;
}

// Prepare-unitary calls made by QAE: one per run plus two per Grover query.
double qae_prep_calls(const QAEOutcome& q) { return q.runs + 2.0 * q.grover_queries; }

// The encoding whose zero-ancilla block is Sigma~^{1/2}/2 (route X) or
// L Sigma~^{1/2} / (2 ||L||_F) (route Y).
struct SqrtStage {
    BlockEncoding be;
    double kappa_hat = 2.0;
    double l_frob = 1.0;
};

SqrtStage sqrt_stage(const CovMatrix& sigma, const SpectralEstimates& est, double eps_power, Route route) {
    if (route == Route::Y && sigma.kind != CovKind::NS)
        throw InvalidInput("route Y needs an increment (NS) covariance");
    SqrtStage s;
    s.kappa_hat = est.kappa_hat();
    const Eigen::MatrixXd scaled = sigma.entries / est.lambda_max_tilde;
    BlockEncoding power = matrix_power_be(cov_block_encoding(scaled), 0.5, s.kappa_hat, eps_power);
    if (route == Route::X) {
        s.be = std::move(power);
        return s;
    }
    const int d = static_cast<int>(sigma.dim());
    BlockEncoding lbe = cov_block_encoding(lower_cumsum_matrix(d));
    lbe.label = "cumsum";
    s.l_frob = lbe.alpha;
    s.be = product_block_encoding(lbe, power);
    return s;
}

PipelineResult prepare_impl(const CovMatrix& sigma, const Eigen::VectorXd& z, double eps,
                            const SpectralEstimates& est, Route route) {
    require_inputs(sigma, z, eps);
    est.check_against(sigma);
    const double kh = est.kappa_hat();
    const double d = static_cast<double>(sigma.dim());

    PipelineResult r;
    r.eps = eps;
    double eps_tilde, a_lower;
    if (route == Route::X) {
        eps_tilde = eps / (4.0 * std::sqrt(kh));
        a_lower = 1.0 / (4.0 * std::sqrt(kh));
    } else {
        eps_tilde = eps / (8.0 * d * std::sqrt(kh));
        a_lower = 1.0 / (std::sqrt(d) * std::sqrt(d + 1.0) * 4.0 * std::sqrt(2.0) * std::sqrt(kh));
    }
    const double eps_chi = eps / 2.0;
    SqrtStage st = sqrt_stage(sigma, est, eps_tilde, route);

    const Eigen::Index sys = st.be.sys_dim();
    const Eigen::VectorXd pre = apply_to_zero_ancilla(st.be, zero_slice_input(z, sys));
    const std::vector<bool> good = zero_ancilla_mask(pre.size(), sys);
    QAAResult q = ideal_qaa(pre, good, a_lower, eps_chi);

    r.register_state = q.state.amps;
    r.state = system_slice(q.state.amps, st.be.n);
    ResourceTally per_call = st.be.tally;
    per_call.add("loader_z.calls", 1);
    r.tally = per_call.scaled(2.0 * q.rounds + 1.0) + q.tally;
    r.classical_reference = classical_path(sigma, z, route);
    r.fidelity = state_fidelity(r.state, r.classical_reference);
    r.ledger = {{"eps", eps},
                {"eps_tilde", eps_tilde},
                {"eps_chi", eps_chi},
                {"kappa_hat", kh},
                {"a_lower", a_lower},
                {"amplitude", q.amplitude},
                {"qaa_rounds", q.rounds}};
    return r;
}

}  // namespace

PipelineResult prepare_x(const CovMatrix& sigma, const Eigen::VectorXd& z, double eps, const SpectralEstimates& est) {
    return prepare_impl(sigma, z, eps, est, Route::X);
}

PipelineResult prepare_y(const CovMatrix& sigma_ns, const Eigen::VectorXd& z, double eps,
                         const SpectralEstimates& est) {
    if (sigma_ns.kind != CovKind::NS) throw InvalidInput("prepare_y: needs an increment (NS) covariance");
    return prepare_impl(sigma_ns, z, eps, est, Route::Y);
}

// ---------------------------------------------------------------- norms

NormEstimate estimate_norm_at(const CovMatrix& sigma, const Eigen::VectorXd& z, double eps_qae, Route route,
                              const SpectralEstimates& est, std::uint64_t seed) {
    require_inputs(sigma, z, 1.0);
    if (!(eps_qae > 0.0)) throw InvalidInput("estimate_norm: QAE tolerance must be positive");
    est.check_against(sigma);
    const double d = static_cast<double>(sigma.dim());

    // Half of the tolerance goes to the power encoding, half to QAE on the
    // flagged amplitude (which carries the 1/2 or 1/(2||L||_F) prefactor).
    const double eps_power = route == Route::X ? eps_qae / 2.0 : eps_qae / (2.0 * d);
    SqrtStage st = sqrt_stage(sigma, est, eps_power, route);
    const double eps_amp = route == Route::X ? eps_qae / 4.0 : eps_qae / (2.0 * std::sqrt(2.0) * (d + 1.0));
    const double rescale = route == Route::X ? 2.0 : 2.0 * st.l_frob;

    const Eigen::Index sys = st.be.sys_dim();
    const Eigen::VectorXd pre = apply_to_zero_ancilla(st.be, zero_slice_input(z, sys));
    NormEstimate out;
    out.qae = qae(pre, zero_ancilla_mask(pre.size(), sys), eps_amp, QAEMode::Amplitude, seed);
    out.eta = rescale * out.qae.estimate;
    out.eps_qae = eps_qae;
    out.z_norm = z.norm();
    out.lambda_max_tilde = est.lambda_max_tilde;
    const double scale = out.z_norm * std::sqrt(est.lambda_max_tilde);
    out.estimate = scale * out.eta;
    out.eps_hat = scale * eps_qae;

    ResourceTally per_call = st.be.tally;
    per_call.add("loader_z.calls", 1);
    out.tally = per_call.scaled(qae_prep_calls(out.qae)) + out.qae.tally;
    out.ledger = {{"eps_qae", eps_qae},
                  {"eps_power", eps_power},
                  {"eps_amplitude", eps_amp},
                  {"eps_hat", out.eps_hat},
                  {"kappa_hat", st.kappa_hat},
                  {"rescale", rescale}};
    return out;
}

NormEstimate estimate_norm(const CovMatrix& sigma, const Eigen::VectorXd& z, NormMode mode, Route route,
                           const SpectralEstimates& est, std::uint64_t seed) {
    if (!(mode.value > 0.0)) throw InvalidInput("estimate_norm: eps_hat / C must be positive");
    double eps_qae;
    if (mode.kind == NormMode::Absolute) {
        eps_qae = mode.value / (z.norm() * std::sqrt(est.lambda_max_tilde));
    } else {
        const double base = 1.0 / (mode.value * std::sqrt(est.L * est.kappa_tilde));
        eps_qae = route == Route::X ? base : base / 2.0;
    }
    return estimate_norm_at(sigma, z, eps_qae, route, est, seed);
}

double calibrate_eta_tilde(const EtaPieces& p, std::optional<double> true_norm) {
    const double scale = p.z_norm * std::sqrt(p.lambda_max_tilde);
    // A tolerance below the rounding error of eta itself cannot be honoured;
    // subtracting a few ulps keeps eta_tilde a genuine lower bound.
    const double margin = std::max(p.eps_qae, 8.0 * std::numeric_limits<double>::epsilon() * p.eta);
    const double eta_tilde = scale * p.eta - scale * margin;
    if (true_norm) {
        const double tol = 1e-12 * *true_norm;
        if (eta_tilde < *true_norm / 2.0 - tol || eta_tilde > *true_norm + tol) {
            std::ostringstream os;
            os << "eta_tilde " << eta_tilde << " outside [" << *true_norm / 2.0 << ", " << *true_norm
               << "]; the norm estimate missed its confidence, rerun with a new seed";
            throw CalibrationError(os.str());
        }
    }
    return eta_tilde;
}

double eta_qae_tolerance(double eps, double c, double Xi, const SpectralEstimates& est, Route route) {
    const double g = 2.0 * std::abs(c) * Xi;
    const double base = (eps / 4.0) / std::sqrt(est.L * est.kappa_tilde) * std::exp(-g) / g;
    return route == Route::X ? base : base / 2.0;
}

// ---------------------------------------------------------------- exponentiation

namespace {

// Everything up to (and excluding) the final amplification or estimation:
// the state U_{H(D)} |0>|0>|f_N> and what it cost to build.
struct ExpCore {
    Eigen::VectorXd pre;
    std::vector<bool> good;
    int n = 0;
    Eigen::VectorXd path;
    ResourceTally setup;     // one-off work (norm estimation)
    ResourceTally per_call;  // one application of the prepare unitary
    ErrorLedger ledger;
    double eta_tilde = 0.0;
    bool precision_limited = false;
    bool skipped = false;
    std::string skip_reason;
};

std::string check_path(const Eigen::VectorXd& v, double Xi, NormPolicy policy) {
    std::ostringstream os;
    const double sup = v.cwiseAbs().maxCoeff(), l2 = v.norm();
    if (sup > Xi)
        os << "sup norm " << sup << " exceeds Xi = " << Xi;
    else if (policy == NormPolicy::Strict && l2 < 4.0 * Xi)
        os << "2-norm " << l2 << " is below 4 Xi = " << 4.0 * Xi;
    return os.str();
}

ExpCore exp_core(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c, double Xi,
                 double eps, const SpectralEstimates& est, const ExpOptions& opt, std::uint64_t norm_stage) {
    require_inputs(sigma, z, eps);
    if (c == 0.0 || !std::isfinite(c)) throw InvalidInput("exponentiate: c must be a nonzero real");
    if (!(Xi > 0.0)) throw InvalidInput("exponentiate: Xi must be positive");
    if (f.size() != sigma.dim()) throw InvalidInput("exponentiate: f has the wrong dimension");
    if (!(f.norm() > 0.0)) throw InvalidInput("exponentiate: f must be nonzero");

    ExpCore core;
    core.path = classical_path(sigma, z, opt.route);
    if (std::string why = check_path(core.path, Xi, opt.policy); !why.empty()) {
        core.skipped = true;
        core.skip_reason = why;
        return core;
    }
    const double ac = std::abs(c);
    const double growth = std::exp(2.0 * ac * Xi);
    const double eps_tilde = (eps / 16.0) * std::exp(-3.0 * ac * Xi);
    const double eps_Hk = 4.0 * growth * (eps_tilde / 2.0);

    // Norm estimate -> eta_tilde, a certified lower bound within a factor 2.
    const double eps_qae = eta_qae_tolerance(eps_Hk, c, Xi, est, opt.route);
    NormEstimate ne = estimate_norm_at(sigma, z, eps_qae, opt.route, est, derive_seed(opt.seed, norm_stage));
    const double path_norm = core.path.norm();
    core.eta_tilde = calibrate_eta_tilde({ne.eta, ne.z_norm, ne.lambda_max_tilde, eps_qae}, path_norm);
    core.setup = ne.tally;

    PolySpec H;
    if (core.eta_tilde >= 2.0 * Xi) {
        H = build_Hk(core.eta_tilde, c, Xi, eps_Hk / 2.0);
    } else if (opt.policy == NormPolicy::SupNormOnly) {
        H = build_Hk_small_norm(core.eta_tilde, c, Xi, eps_Hk / 2.0);
    } else {
        throw PreconditionError("exponentiate: eta_tilde below 2 Xi under the strict policy");
    }
    const PolySpec Hhat = scale_poly(H, 1.0 / (4.0 * growth));
    const double k = H.degree;
    const double eps_rho = eps_tilde * eps_tilde / (16.0 * k * k);
    const double delta0 = eps_tilde / 4.0;

    // |rho>: the prepared path state, ancillas included, at accuracy eps_rho.
    PipelineResult rho = prepare_impl(sigma, z, eps_rho, est, opt.route);
    BlockEncoding diag = diag_block_encoding(rho.register_state);
    diag.eps = eps_rho;
    BlockEncoding q = qsvt_apply(diag, Hhat, delta0);

    const Eigen::Index sys = Eigen::Index(1) << rho.state.n;
    core.n = rho.state.n;
    core.pre = apply_to_zero_ancilla(q, zero_slice_input(f, rho.register_state.size()));
    core.good = zero_ancilla_mask(core.pre.size(), sys);
    core.per_call = q.tally + rho.tally.scaled(q.tally.get("controlled_U_psi"));
    core.per_call.add("loader_f.calls", 1);

    // Measured deviation of the transformed diagonal from e^{c x}/(4 e^{2|c|Xi})
    // on the entries that carry the path.
    double measured = 0.0;
    for (Eigen::Index i = 0; i < core.path.size(); ++i) {
        const double zeta = core.path(i) / path_norm;
        measured = std::max(measured, std::abs(Hhat(zeta) - std::exp(c * core.path(i)) / (4.0 * growth)));
    }
    const double qsvt_proof = k * std::sqrt(eps_rho) + delta0;
    const double block_bound = qsvt_proof + eps_Hk / (4.0 * growth);
    core.precision_limited = H.meta.precision_limited;
    core.ledger = {{"eps", eps},
                   {"eps_tilde", eps_tilde},
                   {"eps_Hk", eps_Hk},
                   {"eps_Hk_realized", 2.0 * H.meta.approx_error},
                   {"eps_qae_eta", eps_qae},
                   {"eta_tilde", core.eta_tilde},
                   {"path_norm", path_norm},
                   {"Xi", Xi},
                   {"degree", k},
                   {"eps_rho", eps_rho},
                   {"delta0", delta0},
                   {"qsvt_error_proof", qsvt_proof},
                   {"qsvt_error_bound", q.eps},
                   {"block_error_bound", block_bound},
                   {"block_error_measured", measured},
                   {"small_norm_branch", core.eta_tilde < 2.0 * Xi ? 1.0 : 0.0}};
    return core;
}

}  // namespace

PipelineResult exponentiate(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c,
                            double Xi, double eps, const SpectralEstimates& est, const ExpOptions& opt) {
    ExpCore core = exp_core(sigma, z, f, c, Xi, eps, est, opt, 1);
    PipelineResult r;
    r.eps = eps;
    if (core.skipped) {
        r.skipped = true;
        r.skip_reason = core.skip_reason;
        return r;
    }
    const double growth3 = std::exp(3.0 * std::abs(c) * Xi);
    const double a_lower = 1.0 / (8.0 * growth3);
    const double eps_chi = eps / 2.0;
    QAAResult q = ideal_qaa(core.pre, core.good, a_lower, eps_chi);

    r.register_state = q.state.amps;
    r.state = system_slice(q.state.amps, core.n);
    r.eta_tilde = core.eta_tilde;
    r.classical_reference = f.cwiseProduct((c * core.path.array()).exp().matrix());
    r.fidelity = state_fidelity(r.state, r.classical_reference);
    r.tally = core.setup + core.per_call.scaled(2.0 * q.rounds + 1.0) + q.tally;
    r.ledger = core.ledger;
    r.ledger["eps_chi"] = eps_chi;
    r.ledger["a_lower"] = a_lower;
    r.ledger["amplitude"] = q.amplitude;
    r.ledger["qaa_rounds"] = q.rounds;
    // Normalising a vector of norm >= 1/(4 e^{3|c|Xi}) perturbed by the block
    // error moves it by at most 2 * 4 e^{3|c|Xi} * block error.
    r.ledger["total_error_bound"] = eps_chi + 8.0 * growth3 * core.ledger["block_error_bound"];
    r.precision_limited = core.precision_limited;
    return r;
}

namespace {

struct PartEstimate {
    double value = 0.0;
    QAEOutcome qae;
    ResourceTally tally;
    ErrorLedger ledger;
    bool precision_limited = false;
};

// One nonnegative part: run the c/2 pipeline on g = sqrt(part) and estimate
// the flagged amplitude (or probability). Returns nullopt when skipped.
std::optional<PartEstimate> sum_part(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& part,
                                     double c, double Xi, double eps_run, double eps_qae, QAEMode mode,
                                     const SpectralEstimates& est, const ExpOptions& opt, std::uint64_t stage,
                                     std::string& skip_reason) {
    const Eigen::VectorXd g = part.cwiseSqrt();
    ExpCore core = exp_core(sigma, z, g, c / 2.0, Xi, eps_run, est, opt, stage);
    if (core.skipped) {
        skip_reason = core.skip_reason;
        return std::nullopt;
    }
    PartEstimate p;
    p.qae = qae(core.pre, core.good, eps_qae, mode, derive_seed(opt.seed, stage + 1));
    const double N = static_cast<double>(part.size());
    const double scale = 16.0 * std::exp(2.0 * std::abs(c) * Xi) * g.squaredNorm() / N;
    p.value = (mode == QAEMode::Probability ? scale : std::sqrt(scale)) * p.qae.estimate;
    p.tally = core.setup + core.per_call.scaled(qae_prep_calls(p.qae)) + p.qae.tally;
    p.ledger = core.ledger;
    p.ledger["eps_qae"] = eps_qae;
    p.ledger["rescale"] = scale;
    p.precision_limited = core.precision_limited;
    return p;
}

void merge_ledger(ErrorLedger& into, const ErrorLedger& from, const std::string& prefix) {
    for (const auto& [k, v] : from) into[prefix + k] = v;
}

}  // namespace

SumResult discrete_sum(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c,
                       double Xi, double eps_hat, const SpectralEstimates& est, const ExpOptions& opt) {
    if (!(eps_hat > 0.0)) throw InvalidInput("discrete_sum: eps_hat must be positive");
    if (f.size() != sigma.dim()) throw InvalidInput("discrete_sum: f has the wrong dimension");
    SumResult r;
    r.eps_hat = eps_hat;
    const Eigen::VectorXd path = classical_path(sigma, z, opt.route);
    const Eigen::VectorXd ecx = (c * path.array()).exp().matrix();
    r.truth = f.dot(ecx) / static_cast<double>(f.size());

    const Eigen::VectorXd fp = f.cwiseMax(0.0), fm = (-f).cwiseMax(0.0);
    const double ac = std::abs(c);
    std::uint64_t stage = 10;
    for (const auto* part : {&fp, &fm}) {
        const double sup = part->cwiseAbs().maxCoeff();
        stage += 10;
        if (sup == 0.0) continue;
        const double eps_run = std::min(2.0, (1.0 / (2.0 * std::exp(0.5 * ac * Xi))) * (1.0 / sup) * (eps_hat / 4.0));
        const double eps_qae = (1.0 / (16.0 * std::exp(2.0 * ac * Xi))) * (1.0 / sup) * (eps_hat / 4.0);
        auto p = sum_part(sigma, z, *part, c, Xi, eps_run, eps_qae, QAEMode::Probability, est, opt, stage,
                          r.skip_reason);
        if (!p) {
            r.skipped = true;
            return r;
        }
        const bool positive = part == &fp;
        (positive ? r.positive_part : r.negative_part) = p->value;
        r.grover_queries += p->qae.grover_queries;
        r.confidence = r.confidence == 0.0 ? p->qae.confidence : r.confidence * p->qae.confidence;
        r.tally += p->tally;
        merge_ledger(r.ledger, p->ledger, positive ? "plus." : "minus.");
        r.ledger[positive ? "plus.eps_run" : "minus.eps_run"] = eps_run;
        r.precision_limited = r.precision_limited || p->precision_limited;
    }
    r.estimate = r.positive_part - r.negative_part;
    return r;
}

SumResult sqrt_discrete_sum(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c,
                            double Xi, double eps_hat, const SpectralEstimates& est, const ExpOptions& opt) {
    if (!(eps_hat > 0.0)) throw InvalidInput("sqrt_discrete_sum: eps_hat must be positive");
    if (f.size() != sigma.dim()) throw InvalidInput("sqrt_discrete_sum: f has the wrong dimension");
    SumResult r;
    r.eps_hat = eps_hat;
    const Eigen::VectorXd af = f.cwiseAbs();
    const Eigen::VectorXd path = classical_path(sigma, z, opt.route);
    const double N = static_cast<double>(f.size());
    r.truth = std::sqrt(af.dot((c * path.array()).exp().matrix()) / N);
    const double sup = af.maxCoeff();
    if (sup == 0.0) return r;

    const double ac = std::abs(c);
    const double root = std::sqrt(sup);
    const double eps_run = std::min(2.0, 2.0 * std::exp(0.5 * ac * Xi) * eps_hat / root);
    const double eps_qae = eps_hat / (8.0 * std::exp(ac * Xi) * root);
    auto p = sum_part(sigma, z, af, c, Xi, eps_run, eps_qae, QAEMode::Amplitude, est, opt, 20, r.skip_reason);
    if (!p) {
        r.skipped = true;
        return r;
    }
    r.estimate = r.positive_part = p->value;
    r.grover_queries = p->qae.grover_queries;
    r.confidence = p->qae.confidence;
    r.tally = p->tally;
    r.ledger = p->ledger;
    r.ledger["eps_run"] = eps_run;
    r.precision_limited = p->precision_limited;
    return r;
}

}  // namespace gaussq
