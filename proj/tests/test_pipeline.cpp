#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaussq/errors.hpp"
#include "gaussq/linalg.hpp"
#include "gaussq/pipeline.hpp"
#include "gaussq/sampler.hpp"

using namespace gaussq;

namespace {

CovMatrix cov(ProcessKind k, double H, int N, CovKind kind) {
    return build_cov({k, H}, GridSpec::uniform(1.0, N), kind);
}

// Identity covariance: the path is z itself, which lets a test pick a path
// that satisfies every norm precondition.
CovMatrix identity_cov(int N) {
    CovMatrix I;
    I.entries = Eigen::MatrixXd::Identity(N, N);
    I.process = {ProcessKind::StdFBM, 0.5};
    I.grid = GridSpec::uniform(1.0, N);
    I.kind = CovKind::PV;
    return I;
}

Eigen::VectorXd flat_path(int N) {
    Eigen::VectorXd z = Eigen::VectorXd::Constant(N, 0.25);
    z(3) = 0.3;
    z(7) = 0.2;
    z(9) = -0.1;
    return z;
}

// |<embed(v)|amps>| computed here, not by the library.
double overlap(const Eigen::VectorXd& amps, const Eigen::VectorXd& v) {
    return std::abs(amps.segment(1, v.size()).dot(v.normalized()));
}

}  // namespace

TEST_CASE("spectral estimates") {
    const CovMatrix S = cov(ProcessKind::RLfBM, 0.3, 8, CovKind::PV);
    const CovCharacteristics ch = cov_characteristics(S);
    const auto o = SpectralEstimates::oracle(S);
    CHECK(o.lambda_max_tilde == doctest::Approx(ch.lambda_max));
    CHECK(o.kappa_tilde == doctest::Approx(ch.kappa));
    CHECK(o.kappa_hat() == doctest::Approx(ch.kappa));
    const auto p = SpectralEstimates::powerlaw(S);
    CHECK(p.L == 2.0);
    CHECK(p.K == 2.0);
    CHECK(p.lambda_max_tilde >= ch.lambda_max);
    CHECK(p.lambda_max_tilde <= 2.0 * ch.lambda_max);
    CHECK(p.kappa_tilde >= ch.kappa);
    CHECK(p.kappa_tilde <= 2.0 * ch.kappa);
    CHECK_NOTHROW(p.check_against(S));
    SpectralEstimates bad = o;
    bad.lambda_max_tilde *= 0.5;
    CHECK_THROWS_AS(bad.check_against(S), EstimateInconsistency);
    bad.L = 0.5;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    CHECK(parse_route("ns") == Route::Y);
    CHECK(parse_estimate_mode("powerlaw") == EstimateMode::PowerLaw);
}

TEST_CASE("prepare_x reproduces the normalised path") {
    for (double H : {0.2, 0.5, 0.8})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const CovMatrix S = cov(ProcessKind::RLfBM, H, 8, CovKind::PV);
            const Eigen::VectorXd z = sample_std_normal(8, seed).first;
            const auto est = SpectralEstimates::oracle(S);
            const PipelineResult r = prepare_x(S, z, 0.01, est);
            const Eigen::VectorXd x = sqrtm_psd(S.entries) * z;
            CHECK(overlap(r.state.amps, x) >= 0.99);
            CHECK((r.classical_reference - x).norm() <= 1e-12 * x.norm());
            CHECK(r.fidelity == doctest::Approx(overlap(r.state.amps, x)));
            const double kh = est.kappa_hat();
            CHECK(r.ledger.at("eps_tilde") == doctest::Approx(0.01 / (4 * std::sqrt(kh))));
            CHECK(r.ledger.at("a_lower") == doctest::Approx(1.0 / (4 * std::sqrt(kh))));
            CHECK(r.ledger.at("amplitude") >= r.ledger.at("a_lower"));
            CHECK(r.ledger.at("qaa_rounds") == std::ceil(std::log(2.0 / 0.005) * 4 * std::sqrt(kh)));
        }
}

TEST_CASE("prepare_y reproduces the cumulative path") {
    for (ProcessKind k : {ProcessKind::RLfBM, ProcessKind::StdFBM, ProcessKind::FOU}) {
        const CovMatrix S = cov(k, 0.35, 8, CovKind::NS);
        const Eigen::VectorXd z = sample_std_normal(static_cast<int>(S.dim()), 17).first;
        const PipelineResult r = prepare_y(S, z, 0.01, SpectralEstimates::powerlaw(S));
        const Eigen::VectorXd y = cumsum_apply(sqrtm_psd(S.entries) * z);
        CHECK(overlap(r.state.amps, y) >= 0.99);
    }
    const CovMatrix P = cov(ProcessKind::RLfBM, 0.35, 8, CovKind::PV);
    CHECK_THROWS_AS(prepare_y(P, sample_std_normal(8, 1).first, 0.01, SpectralEstimates::oracle(P)), InvalidInput);
    CHECK_THROWS_AS(prepare_x(P, sample_std_normal(7, 1).first, 0.01, SpectralEstimates::oracle(P)), InvalidInput);
    CHECK_THROWS_AS(prepare_x(P, sample_std_normal(8, 1).first, 3.0, SpectralEstimates::oracle(P)), InvalidInput);
}

TEST_CASE("path norm estimation") {
    const CovMatrix S = cov(ProcessKind::StdFBM, 0.4, 8, CovKind::PV);
    const auto est = SpectralEstimates::oracle(S);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Eigen::VectorXd z = sample_std_normal(8, seed).first;
        const double truth = (sqrtm_psd(S.entries) * z).norm();
        const NormEstimate ne = estimate_norm(S, z, NormMode::absolute(0.05), Route::X, est, seed);
        hits += std::abs(ne.estimate - truth) <= 0.05;
        CHECK(ne.eps_hat == doctest::Approx(0.05));
    }
    CHECK(hits >= 38);

    const CovMatrix N = cov(ProcessKind::StdFBM, 0.4, 8, CovKind::NS);
    const Eigen::VectorXd z = sample_std_normal(8, 5).first;
    const double ynorm = cumsum_apply(sqrtm_psd(N.entries) * z).norm();
    const NormEstimate ny = estimate_norm(N, z, NormMode::relative(4.0), Route::Y, SpectralEstimates::oracle(N), 5);
    CHECK(std::abs(ny.estimate - ynorm) <= ny.eps_hat);
    CHECK(ny.eps_hat <= ynorm);
}

TEST_CASE("calibrated norm lower bound") {
    EtaPieces p{0.5, 2.0, 4.0, 0.01};
    const double eta_tilde = calibrate_eta_tilde(p);
    CHECK(eta_tilde == doctest::Approx(2.0 * 2.0 * 0.49));
    CHECK_NOTHROW(calibrate_eta_tilde(p, eta_tilde));
    CHECK_NOTHROW(calibrate_eta_tilde(p, 2.0 * eta_tilde));
    CHECK_THROWS_AS(calibrate_eta_tilde(p, 0.9 * eta_tilde), CalibrationError);
    CHECK_THROWS_AS(calibrate_eta_tilde(p, 2.1 * eta_tilde), CalibrationError);
    const auto est = SpectralEstimates::oracle(identity_cov(4));
    CHECK(eta_qae_tolerance(0.1, 1.0, 0.5, est, Route::Y) ==
          doctest::Approx(0.5 * eta_qae_tolerance(0.1, 1.0, 0.5, est, Route::X)));
}

TEST_CASE("exponentiation on a path that meets every precondition") {
    const int N = 31;
    const CovMatrix I = identity_cov(N);
    const Eigen::VectorXd z = flat_path(N), f = Eigen::VectorXd::LinSpaced(N, 0.5, 1.5);
    for (double c : {0.5, -0.5, 1.0}) {
        const PipelineResult r = exponentiate(I, z, f, c, 0.3, 0.05, SpectralEstimates::oracle(I), {});
        REQUIRE_FALSE(r.skipped);
        const Eigen::VectorXd want = classical_exp_path(f, c, z);
        CHECK(overlap(r.state.amps, want) >= 0.95);
        CHECK_FALSE(r.precision_limited);
        CHECK(r.ledger.at("small_norm_branch") == 0.0);
        REQUIRE(r.eta_tilde);
        CHECK(*r.eta_tilde >= z.norm() / 2);
        CHECK(*r.eta_tilde <= z.norm());
        CHECK(r.ledger.at("block_error_measured") <= r.ledger.at("block_error_bound"));
        CHECK(r.ledger.at("total_error_bound") <= 0.05 + 1e-12);
    }
}

TEST_CASE("strict policy skips paths that violate the norm preconditions") {
    const CovMatrix S = cov(ProcessKind::RLfBM, 0.3, 8, CovKind::PV);
    RBergomiSpec rb;
    rb.H = 0.3;
    const auto [f, c] = rbergomi_prefactor(rb, S.grid);
    const double Xi = xi_bound(S.process);
    const Eigen::VectorXd z = sample_std_normal(8, 4).first;
    const PipelineResult r = exponentiate(S, z, f, c, Xi, 0.05, SpectralEstimates::oracle(S), {});
    CHECK(r.skipped);
    CHECK_FALSE(r.skip_reason.empty());

    ExpOptions relaxed;
    relaxed.policy = NormPolicy::SupNormOnly;
    const PipelineResult q = exponentiate(S, z, f, c, Xi, 0.05, SpectralEstimates::oracle(S), relaxed);
    REQUIRE_FALSE(q.skipped);
    const Eigen::VectorXd x = sqrtm_psd(S.entries) * z;
    CHECK(overlap(q.state.amps, classical_exp_path(f, c, x)) >= 0.95);
    CHECK(q.ledger.at("small_norm_branch") == 1.0);
}

TEST_CASE("discrete sums") {
    const int N = 31;
    const CovMatrix I = identity_cov(N);
    const Eigen::VectorXd z = flat_path(N);
    const Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(N, -1.0, 1.5);
    const double c = 0.5, eps_hat = 0.01;
    const SumResult s = discrete_sum(I, z, f, c, 0.3, eps_hat, SpectralEstimates::oracle(I), {});
    REQUIRE_FALSE(s.skipped);
    const double truth = classical_exp_path(f, c, z).sum() / N;
    CHECK(s.truth == doctest::Approx(truth));
    CHECK(std::abs(s.estimate - truth) <= eps_hat);
    CHECK(s.estimate == doctest::Approx(s.positive_part - s.negative_part));

    const Eigen::VectorXd g = Eigen::VectorXd::LinSpaced(N, 0.5, 1.5);
    const SumResult r = sqrt_discrete_sum(I, z, g, c, 0.3, eps_hat, SpectralEstimates::oracle(I), {});
    REQUIRE_FALSE(r.skipped);
    const double root = std::sqrt(classical_exp_path(g, c, z).sum()) / std::sqrt(double(N));
    CHECK(r.truth == doctest::Approx(root));
    CHECK(std::abs(r.estimate - root) <= eps_hat);
    CHECK_THROWS_AS(discrete_sum(I, z, f, c, 0.3, 0.0, SpectralEstimates::oracle(I), {}), InvalidInput);
}

TEST_CASE("runs are reproducible from the seed") {
    const CovMatrix S = cov(ProcessKind::RLfBM, 0.3, 8, CovKind::PV);
    const Eigen::VectorXd z = sample_std_normal(8, 8).first;
    const auto est = SpectralEstimates::oracle(S);
    const NormEstimate a = estimate_norm(S, z, NormMode::relative(), Route::X, est, 77);
    const NormEstimate b = estimate_norm(S, z, NormMode::relative(), Route::X, est, 77);
    CHECK(a.estimate == b.estimate);
    CHECK(a.tally == b.tally);
}
