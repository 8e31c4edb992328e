#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gaussq/blockenc.hpp"
#include "gaussq/polyapprox.hpp"
#include "gaussq/tally.hpp"

namespace gaussq {

// Encoding of P(H/alpha) for a Hermitian block, by exact spectral calculus
// followed by a dilation. `delta` is the polynomial-construction tolerance
// added to the propagated encoding error.
BlockEncoding qsvt_apply(const BlockEncoding& be, const PolySpec& P, double delta = 0.0);

// (2, a + O(log log(1/eps)), eps) encoding of H^c for H with spectrum in
// [1/kappa_hat, 1], where H is the operator encoded by `be` (alpha included).
BlockEncoding matrix_power_be(const BlockEncoding& be, double c, double kappa_hat, double eps);

// Ancilla qubits the power construction adds on top of be.a.
int power_extra_ancillas(double eps);

struct QAAResult {
    QState state;
    double rounds = 0.0;
    double amplitude = 0.0;  // norm of the good component before amplification
    ResourceTally tally;
};

// Fixed-point amplification with ideal output: the normalised projection of
// `prepared` onto the subspace where good[i] is true.
QAAResult ideal_qaa(const Eigen::VectorXd& prepared, const std::vector<bool>& good, double a_lower, double eps);
QAAResult ideal_qaa(const Eigen::MatrixXd& U, const std::vector<bool>& good, double a_lower, double eps);

double qaa_rounds(double a_lower, double eps);

// Mask selecting basis states whose ancilla index (index / sys_dim) is 0.
std::vector<bool> zero_ancilla_mask(Eigen::Index total_dim, Eigen::Index sys_dim);

enum class QAEMode { Amplitude, Probability };

struct QAEOutcome {
    double estimate = 0.0;
    QAEMode mode = QAEMode::Amplitude;
    double eps_qae = 0.0;
    double confidence = 0.0;       // lower bound implied by the median of `runs`
    double grover_queries = 0.0;   // M per run
    int m = 0;                     // M = 2^m
    int runs = 15;
    std::vector<double> run_estimates;
    double truncated_mass = 0.0;   // outcome mass outside the sampled window
    ResourceTally tally;
};

constexpr int kQaeRuns = 15;

int qae_exponent(double eps_qae);

// Canonical phase-estimation QAE on an amplitude a = |<good|psi>|. The outcome
// distribution is evaluated in closed form and sampled `runs` times; the
// median estimate is returned.
QAEOutcome qae_from_amplitude(double a, double eps_qae, QAEMode mode, std::uint64_t seed, int runs = kQaeRuns);

// Same, reading the amplitude off a prepared state and a good-subspace mask.
QAEOutcome qae(const Eigen::VectorXd& prepared, const std::vector<bool>& good, double eps_qae, QAEMode mode,
               std::uint64_t seed, int runs = kQaeRuns);

// Single-run outcome probabilities P(y), y = 0..M-1, from the closed form.
std::vector<double> qae_outcome_distribution(double a, int m);

// Same distribution from an explicit state-vector simulation of phase
// estimation on the Grover iterate (counting register of m qubits).
// Limited to m + log2(dim) <= 22.
std::vector<double> qae_statevector_distribution(const Eigen::VectorXd& prepared, const std::vector<bool>& good,
                                                 int m);

}  // namespace gaussq
