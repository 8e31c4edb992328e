#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "gaussq/blockenc.hpp"
#include "gaussq/covariance.hpp"
#include "gaussq/qroutines.hpp"
#include "gaussq/tally.hpp"

namespace gaussq {

enum class EstimateMode { Oracle, PowerLaw };
enum class Route { X, Y };

const char* to_string(EstimateMode m);
const char* to_string(Route r);
EstimateMode parse_estimate_mode(const std::string& s);
Route parse_route(const std::string& s);

// Upper estimates of the largest eigenvalue and the condition number, with
// the multiplicative slack factors they are certified to:
//   lambda_max <= lambda_max_tilde <= L lambda_max,  kappa <= kappa_tilde <= K kappa.
struct SpectralEstimates {
    double lambda_max_tilde = 1.0;
    double kappa_tilde = 1.0;
    double L = 1.0;
    double K = 1.0;
    EstimateMode mode = EstimateMode::Oracle;

    double kappa_hat() const;  // max{L kappa_tilde, 2}
    void validate() const;
    // Throws EstimateInconsistency unless the bounds hold for this matrix.
    void check_against(const CovMatrix& sigma) const;

    // Exact values from the spectrum, L = K = 1.
    static SpectralEstimates oracle(const CovMatrix& sigma);
    // Power laws fitted on a small-N ladder of the same process and kind,
    // extrapolated to sigma's N and inflated by sqrt(2); L = K = 2.
    static SpectralEstimates powerlaw(const CovMatrix& sigma);
    static SpectralEstimates make(const CovMatrix& sigma, EstimateMode mode);
};

// Every internal tolerance of a run, keyed by role.
using ErrorLedger = std::map<std::string, double>;

struct PipelineResult {
    QState state;                  // system register after dropping the |0> ancilla slice
    Eigen::VectorXd register_state;  // full register (ancillas, system)
    double eps = 0.0;
    ResourceTally tally;
    std::optional<double> eta_tilde;
    Eigen::VectorXd classical_reference;  // unnormalised oracle vector (length N)
    double fidelity = 0.0;
    ErrorLedger ledger;
    bool precision_limited = false;  // some tolerance fell below double precision
    bool skipped = false;
    std::string skip_reason;
};

// |<embed(reference)|state>| on the system register.
double state_fidelity(const QState& state, const Eigen::VectorXd& reference);

PipelineResult prepare_x(const CovMatrix& sigma, const Eigen::VectorXd& z, double eps, const SpectralEstimates& est);

// Requires an increment (NS) covariance; output is the cumulative-sum path.
PipelineResult prepare_y(const CovMatrix& sigma_ns, const Eigen::VectorXd& z, double eps,
                         const SpectralEstimates& est);

struct NormMode {
    enum Kind { Absolute, Relative } kind = Absolute;
    double value = 0.0;  // eps_hat for Absolute, C for Relative

    static NormMode absolute(double eps_hat) { return {Absolute, eps_hat}; }
    static NormMode relative(double C = 4.0) { return {Relative, C}; }
};

struct NormEstimate {
    double estimate = 0.0;  // of ||x|| (route X) or ||y|| (route Y)
    double eta = 0.0;       // estimate of the normalised amplitude ||S^{1/2}|z>|| (times ||L|| on route Y)
    double eps_qae = 0.0;   // QAE tolerance on eta
    double eps_hat = 0.0;   // implied tolerance on the estimate
    double z_norm = 0.0;
    double lambda_max_tilde = 0.0;
    QAEOutcome qae;
    ResourceTally tally;
    ErrorLedger ledger;
};

NormEstimate estimate_norm(const CovMatrix& sigma, const Eigen::VectorXd& z, NormMode mode, Route route,
                           const SpectralEstimates& est, std::uint64_t seed);

// Same, with the QAE tolerance on eta given directly.
NormEstimate estimate_norm_at(const CovMatrix& sigma, const Eigen::VectorXd& z, double eps_qae, Route route,
                              const SpectralEstimates& est, std::uint64_t seed);

struct EtaPieces {
    double eta = 0.0;
    double z_norm = 0.0;
    double lambda_max_tilde = 0.0;
    double eps_qae = 0.0;
};

// eta_tilde = ||z|| sqrt(lambda_max_tilde) (eta - eps_qae), with eps_qae raised
// to a few ulps of eta when it is smaller than that. When the true norm
// is supplied, throws CalibrationError unless eta_tilde lies in [norm/2, norm].
double calibrate_eta_tilde(const EtaPieces& p, std::optional<double> true_norm = std::nullopt);

// QAE tolerance used for eta_tilde inside a run at accuracy eps.
double eta_qae_tolerance(double eps, double c, double Xi, const SpectralEstimates& est, Route route);

// How the path-norm preconditions are enforced. Strict skips realisations
// with ||x||_inf > Xi or ||x||_2 < 4 Xi. SupNormOnly keeps the sup-norm check
// only and switches to the small-norm polynomial when eta_tilde < 2 Xi.
enum class NormPolicy { Strict, SupNormOnly };

struct ExpOptions {
    Route route = Route::X;
    NormPolicy policy = NormPolicy::Strict;
    std::uint64_t seed = 0;
};

PipelineResult exponentiate(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c,
                            double Xi, double eps, const SpectralEstimates& est, const ExpOptions& opt = {});

struct SumResult {
    double estimate = 0.0;
    double truth = 0.0;  // classical (1/N) sum f_i e^{c x_i}, or its square-root variant
    double eps_hat = 0.0;
    double positive_part = 0.0;
    double negative_part = 0.0;
    double grover_queries = 0.0;
    double confidence = 0.0;
    ResourceTally tally;
    ErrorLedger ledger;
    bool precision_limited = false;
    bool skipped = false;
    std::string skip_reason;
};

// Estimates (1/N) sum_i f_i exp(c x_i) to within eps_hat.
SumResult discrete_sum(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c,
                       double Xi, double eps_hat, const SpectralEstimates& est, const ExpOptions& opt = {});

// Estimates (1/sqrt(N)) sqrt(sum_i |f_i| exp(c x_i)) to within eps_hat.
SumResult sqrt_discrete_sum(const CovMatrix& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c,
                            double Xi, double eps_hat, const SpectralEstimates& est, const ExpOptions& opt = {});

}  // namespace gaussq
