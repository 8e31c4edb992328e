#pragma once

#include <Eigen/Dense>
#include <string>

#include "gaussq/tally.hpp"

namespace gaussq {

// Number of qubits n = ceil(log2(N+1)) needed to hold N entries at
// indices 1..N (index 0 is left empty).
int qubits_for(Eigen::Index N);

// Amplitude vector over n qubits. All constructions in this library are
// real orthogonal, so amplitudes are stored as reals.
struct QState {
    Eigen::VectorXd amps;
    int n = 0;

    // Embeds w at indices 1..N of a 2^n vector and normalises.
    static QState embed(const Eigen::VectorXd& w);
    Eigen::Index size() const { return amps.size(); }
};

struct BlockEncoding {
    Eigen::MatrixXd U;    // layout: index = ancilla * 2^n + system
    double alpha = 1.0;
    int a = 0;            // ancilla qubits as counted by the construction being modelled
    int a_sim = 0;        // ancilla qubits actually present in U
    int n = 0;            // system qubits
    double eps = 0.0;
    // Rows/columns of the system register carrying the encoded operator;
    // the rest of the block is zero padding.
    Eigen::Index active_offset = 0;
    Eigen::Index active_count = 0;
    ResourceTally tally;
    std::string label;

    Eigen::Index sys_dim() const { return Eigen::Index(1) << n; }
};

struct BlockCheck {
    double unitarity_residual = 0.0;  // max |U^T U - I|
    double block_error = 0.0;         // spectral norm of (extract - target)
};

// Orthogonal matrix whose first column is the unit vector v; the remaining
// columns come from a single Householder reflection.
Eigen::MatrixXd householder_completion(const Eigen::VectorXd& v);

// Loader for a classical vector w: first column is QState::embed(w).
Eigen::MatrixXd loader_unitary(const Eigen::VectorXd& w);

// (||A||_F, ceil(log2(N+1)), 0) block-encoding of A from row-norm and
// row-direction loaders.
BlockEncoding cov_block_encoding(const Eigen::MatrixXd& A);

// One-ancilla unitary dilation of a contraction M; declared target alpha*M.
BlockEncoding dilation_block_encoding(const Eigen::MatrixXd& M, double alpha = 1.0);

// Block-encoding of diag(psi) for a state given by its amplitudes or by the
// preparation unitary (first column).
BlockEncoding diag_block_encoding(const Eigen::VectorXd& psi);
BlockEncoding diag_block_encoding(const Eigen::VectorXcd& psi);
BlockEncoding diag_block_encoding_from_unitary(const Eigen::MatrixXd& U_psi);

// Encoding of (outer.target * inner.target) with both ancilla registers
// kept: layout (outer ancilla, inner ancilla, system).
BlockEncoding product_block_encoding(const BlockEncoding& outer, const BlockEncoding& inner);

// alpha times the system block on ancilla slice `slice` (0 = the genuine block).
Eigen::MatrixXd extract_block(const BlockEncoding& be, Eigen::Index slice = 0);

BlockCheck verify_block_encoding(const BlockEncoding& be, const Eigen::MatrixXd& target);

// Applies the encoded unitary to |0>_anc (x) |psi>_sys.
Eigen::VectorXd apply_to_zero_ancilla(const BlockEncoding& be, const Eigen::VectorXd& psi);

}  // namespace gaussq
