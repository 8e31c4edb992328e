#include "gaussq/blockenc.hpp"

#include <cmath>

#include "gaussq/errors.hpp"

namespace gaussq {

int qubits_for(Eigen::Index N) {
    if (N < 1) throw InvalidInput("qubits_for: need at least one entry");
    int n = 0;
    while ((Eigen::Index(1) << n) < N + 1) ++n;
    return n;
}

QState QState::embed(const Eigen::VectorXd& w) {
    const double norm = w.norm();
    if (!(norm > 0.0)) throw InvalidInput("cannot embed a zero vector as a state");
    QState s;
    s.n = qubits_for(w.size());
    s.amps = Eigen::VectorXd::Zero(Eigen::Index(1) << s.n);
    s.amps.segment(1, w.size()) = w / norm;
    return s;
}

Eigen::MatrixXd householder_completion(const Eigen::VectorXd& v) {
    const Eigen::Index d = v.size();
    if (std::abs(v.norm() - 1.0) > 1e-10) throw InvalidInput("householder_completion: vector must be a unit vector");
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd u = -v;
    u(0) += 1.0;  // u = e_0 - v, reflection swaps e_0 and v
    const double uu = u.squaredNorm();
    if (uu < 1e-30) return Q;
    Q.noalias() -= (2.0 / uu) * u * u.transpose();
    return Q;
}

Eigen::MatrixXd loader_unitary(const Eigen::VectorXd& w) {
    if (w.size() == 0 || !(w.norm() > 0.0)) throw InvalidInput("loader_unitary: vector must be nonzero");
    return householder_completion(QState::embed(w).amps);
}

BlockEncoding cov_block_encoding(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols() || A.rows() == 0) throw InvalidInput("cov_block_encoding: matrix must be square and nonempty");
    const Eigen::Index N = A.rows();
    Eigen::VectorXd row_norms = A.rowwise().norm();
    for (Eigen::Index i = 0; i < N; ++i)
        if (!(row_norms(i) > 0.0)) throw InvalidInput("cov_block_encoding: row " + std::to_string(i) + " is zero");

    const int n = qubits_for(N);
    const Eigen::Index D = Eigen::Index(1) << n;

    // U_L = V_norms (x) I loads the row-norm distribution on the ancilla.
    // U_R = SWAP . (sum_k V_k (x) |k><k|) loads row k's direction.
    // With U = U_R^T U_L the (ancilla 0) block is A / ||A||_F, and entrywise
    //   U[(b,k),(a,j)] = V_norms(k,a) * V_k(j,b).
    const Eigen::MatrixXd Vn = loader_unitary(row_norms);
    std::vector<Eigen::MatrixXd> Vrow(D);
    for (Eigen::Index k = 1; k <= N; ++k) Vrow[k] = loader_unitary(A.row(k - 1).transpose());

    BlockEncoding be;
    be.U = Eigen::MatrixXd::Zero(D * D, D * D);
    for (Eigen::Index k = 0; k < D; ++k) {
        const bool loaded = k >= 1 && k <= N;
        for (Eigen::Index a = 0; a < D; ++a) {
            const double vn = Vn(k, a);
            if (vn == 0.0) continue;
            for (Eigen::Index j = 0; j < D; ++j) {
                if (loaded) {
                    for (Eigen::Index b = 0; b < D; ++b) be.U(b * D + k, a * D + j) = vn * Vrow[k](j, b);
                } else {
                    be.U(j * D + k, a * D + j) = vn;  // V_k = identity
                }
            }
        }
    }
    be.alpha = A.norm();
    be.a = n;
    be.a_sim = n;
    be.n = n;
    be.eps = 0.0;
    be.active_offset = 1;
    be.active_count = N;
    be.tally.add("cov_be.calls", 1);
    be.label = "cov";
    return be;
}

namespace {

bool is_diagonal(const Eigen::MatrixXd& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            if (i != j && M(i, j) != 0.0) return false;
    return true;
}

int log2_exact(Eigen::Index d) {
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    if ((Eigen::Index(1) << n) != d) throw InvalidInput("dimension must be a power of two");
    return n;
}

}  // namespace

BlockEncoding dilation_block_encoding(const Eigen::MatrixXd& M, double alpha) {
    if (M.rows() != M.cols()) throw InvalidInput("dilation: matrix must be square");
    const Eigen::Index d = M.rows();
    const int n = log2_exact(d);
    constexpr double slack = 1e-10;

    BlockEncoding be;
    be.U.resize(2 * d, 2 * d);
    be.U.topLeftCorner(d, d) = M;
    be.U.bottomRightCorner(d, d) = -M.transpose();
    if (is_diagonal(M)) {
        Eigen::VectorXd m = M.diagonal();
        if (m.cwiseAbs().maxCoeff() > 1.0 + slack)
            throw ContractionViolation("dilation: operator norm " + std::to_string(m.cwiseAbs().maxCoeff()) + " exceeds 1");
        Eigen::VectorXd c = (1.0 - m.array().square()).max(0.0).sqrt().matrix();
        be.U.topRightCorner(d, d) = c.asDiagonal();
        be.U.bottomLeftCorner(d, d) = c.asDiagonal();
    } else {
        // Both defect roots come from one SVD M = P S Q^T:
        //   sqrt(I - M M^T) = P sqrt(1-S^2) P^T,  sqrt(I - M^T M) = Q sqrt(1-S^2) Q^T,
        // which keeps the dilation exactly orthogonal even for singular values near 1.
        Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd& s = svd.singularValues();
        if (s(0) > 1.0 + slack)
            throw ContractionViolation("dilation: operator norm " + std::to_string(s(0)) + " exceeds 1");
        Eigen::VectorXd c = (1.0 - s.array().min(1.0).square()).sqrt().matrix();
        be.U.topRightCorner(d, d) = svd.matrixU() * c.asDiagonal() * svd.matrixU().transpose();
        be.U.bottomLeftCorner(d, d) = svd.matrixV() * c.asDiagonal() * svd.matrixV().transpose();
    }
    be.alpha = alpha;
    be.a = 1;
    be.a_sim = 1;
    be.n = n;
    be.eps = 0.0;
    be.active_offset = 0;
    be.active_count = d;
    be.label = "dilation";
    return be;
}

BlockEncoding diag_block_encoding(const Eigen::VectorXd& psi) {
    if (std::abs(psi.norm() - 1.0) > 1e-9) throw InvalidInput("diag_block_encoding: state must be normalised");
    BlockEncoding be = dilation_block_encoding(Eigen::MatrixXd(psi.asDiagonal()), 1.0);
    be.a = be.n + 2;
    be.tally.add("controlled_U_psi", 6);
    be.label = "diag";
    return be;
}

BlockEncoding diag_block_encoding(const Eigen::VectorXcd& psi) {
    if (psi.imag().cwiseAbs().maxCoeff() > 1e-12)
        throw UnsupportedInput("diag_block_encoding: amplitudes must be real");
    return diag_block_encoding(Eigen::VectorXd(psi.real()));
}

BlockEncoding diag_block_encoding_from_unitary(const Eigen::MatrixXd& U_psi) {
    return diag_block_encoding(Eigen::VectorXd(U_psi.col(0)));
}

BlockEncoding product_block_encoding(const BlockEncoding& outer, const BlockEncoding& inner) {
    if (outer.n != inner.n) throw InvalidInput("product_block_encoding: system registers differ");
    const Eigen::Index d = outer.sys_dim();
    const Eigen::Index A1 = Eigen::Index(1) << outer.a_sim;
    const Eigen::Index A2 = Eigen::Index(1) << inner.a_sim;
    const Eigen::Index D = A1 * A2 * d;
    auto idx = [&](Eigen::Index a1, Eigen::Index a2, Eigen::Index s) { return (a1 * A2 + a2) * d + s; };

    // (I_anc1 (x) U_inner): acts on (anc2, sys) for each anc1 value.
    Eigen::MatrixXd Uin = Eigen::MatrixXd::Zero(D, D);
    for (Eigen::Index a1 = 0; a1 < A1; ++a1)
        for (Eigen::Index c = 0; c < A2 * d; ++c)
            for (Eigen::Index r = 0; r < A2 * d; ++r)
                Uin(idx(a1, r / d, r % d), idx(a1, c / d, c % d)) = inner.U(r, c);
    // (U_outer (x) I_anc2): acts on (anc1, sys) for each anc2 value.
    Eigen::MatrixXd Uout = Eigen::MatrixXd::Zero(D, D);
    for (Eigen::Index a2 = 0; a2 < A2; ++a2)
        for (Eigen::Index c = 0; c < A1 * d; ++c)
            for (Eigen::Index r = 0; r < A1 * d; ++r)
                Uout(idx(r / d, a2, r % d), idx(c / d, a2, c % d)) = outer.U(r, c);

    BlockEncoding be;
    be.U = Uout * Uin;
    be.alpha = outer.alpha * inner.alpha;
    be.a = outer.a + inner.a;
    be.a_sim = outer.a_sim + inner.a_sim;
    be.n = outer.n;
    be.eps = outer.alpha * inner.eps + inner.alpha * outer.eps;
    be.active_offset = std::max(outer.active_offset, inner.active_offset);
    be.active_count = std::min(outer.active_offset + outer.active_count, inner.active_offset + inner.active_count) -
                      be.active_offset;
    be.tally = outer.tally + inner.tally;
    be.label = outer.label + "*" + inner.label;
    return be;
}

Eigen::MatrixXd extract_block(const BlockEncoding& be, Eigen::Index slice) {
    const Eigen::Index d = be.sys_dim();
    if (slice < 0 || (slice + 1) * d > be.U.rows()) throw InvalidInput("extract_block: ancilla slice out of range");
    return be.alpha * be.U.block(slice * d, slice * d, d, d);
}

BlockCheck verify_block_encoding(const BlockEncoding& be, const Eigen::MatrixXd& target) {
    const Eigen::Index d = be.sys_dim();
    Eigen::MatrixXd padded;
    if (target.rows() == d && target.cols() == d) {
        padded = target;
    } else if (target.rows() == be.active_count && target.cols() == be.active_count) {
        padded = Eigen::MatrixXd::Zero(d, d);
        padded.block(be.active_offset, be.active_offset, be.active_count, be.active_count) = target;
    } else {
        throw InvalidInput("verify_block_encoding: target has the wrong shape");
    }
    BlockCheck out;
    Eigen::MatrixXd G = be.U.transpose() * be.U;
    G.diagonal().array() -= 1.0;
    out.unitarity_residual = G.cwiseAbs().maxCoeff();
    Eigen::MatrixXd diff = extract_block(be) - padded;
    out.block_error = diff.isZero(0.0) ? 0.0 : Eigen::BDCSVD<Eigen::MatrixXd>(diff).singularValues()(0);
    return out;
}

Eigen::VectorXd apply_to_zero_ancilla(const BlockEncoding& be, const Eigen::VectorXd& psi) {
    if (psi.size() != be.sys_dim()) throw InvalidInput("apply_to_zero_ancilla: state size mismatch");
    return be.U.leftCols(be.sys_dim()) * psi;
}

}  // namespace gaussq
