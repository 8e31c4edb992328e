#include "gaussq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaussq/errors.hpp"

namespace gaussq {

Spectrum spectral(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw InvalidInput("spectral: matrix must be square");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw InvalidInput("spectral: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
    if (es.info() != Eigen::Success) throw NumericError("spectral: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& A) {
    Spectrum sp = spectral(A);
    const double norm = std::max(std::abs(sp.eigenvalues(0)), std::abs(sp.eigenvalues(sp.eigenvalues.size() - 1)));
    const double floor = -1e-10 * norm;
    Eigen::VectorXd root(sp.eigenvalues.size());
    for (Eigen::Index i = 0; i < root.size(); ++i) {
        const double l = sp.eigenvalues(i);
        if (l < floor) throw NotPSD("sqrtm_psd: eigenvalue " + std::to_string(l) + " is materially negative");
        root(i) = std::sqrt(std::max(l, 0.0));
    }
    Eigen::MatrixXd B = sp.eigenvectors * root.asDiagonal() * sp.eigenvectors.transpose();
    return 0.5 * (B + B.transpose());
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw InvalidInput("cholesky: matrix must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw NotPSD("cholesky: matrix is not symmetric positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
        if (!(L(i, i) > 0.0)) throw NotPSD("cholesky: nonpositive pivot");
    return L;
}

CovCharacteristics characteristics_from(const Eigen::VectorXd& ev, double frob) {
    CovCharacteristics c;
    c.lambda_min = ev(0);
    c.lambda_max = ev(ev.size() - 1);
    c.frob = frob;
    c.kappa = c.lambda_max / c.lambda_min;
    return c;
}

CovCharacteristics cov_characteristics(const Eigen::MatrixXd& A) {
    Spectrum sp = spectral(A);
    if (!(sp.eigenvalues(0) > 0.0)) throw DegeneracyError("cov_characteristics: matrix is not PD", sp.eigenvalues(0));
    return characteristics_from(sp.eigenvalues, A.norm());
}

CovCharacteristics cov_characteristics(const CovMatrix& S) { return cov_characteristics(S.entries); }

LnSpectrum ln_spectrum(int N) {
    if (N < 1) throw InvalidInput("ln_spectrum: N must be at least 1");
    LnSpectrum out;
    out.lambda.resize(N);
    for (int k = 1; k <= N; ++k)
        out.lambda(k - 1) = 2.0 + 2.0 * std::cos(2.0 * k * std::numbers::pi / (2.0 * N + 1.0));
    std::sort(out.lambda.begin(), out.lambda.end());
    out.sigma = out.lambda.cwiseSqrt().cwiseInverse();
    std::sort(out.sigma.begin(), out.sigma.end());
    out.sigma_min = out.sigma(0);
    out.sigma_max = out.sigma(N - 1);
    return out;
}

Eigen::VectorXd cumsum_apply(const Eigen::VectorXd& x) {
    Eigen::VectorXd y(x.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc += x(i);
        y(i) = acc;
    }
    return y;
}

}  // namespace gaussq
