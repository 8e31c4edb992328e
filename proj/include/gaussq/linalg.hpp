#pragma once

#include <Eigen/Dense>

#include "gaussq/covariance.hpp"

namespace gaussq {

struct Spectrum {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

struct CovCharacteristics {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double frob = 0.0;
    double kappa = 0.0;
};

Spectrum spectral(const Eigen::MatrixXd& A);

// Unique symmetric PSD square root. Eigenvalues down to -1e-10*||A|| are
// clipped to zero; anything more negative raises NotPSD.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& A);

// Lower Cholesky factor with positive diagonal.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& A);

CovCharacteristics cov_characteristics(const Eigen::MatrixXd& A);
CovCharacteristics cov_characteristics(const CovMatrix& S);
// Characteristics from an already computed ascending spectrum.
CovCharacteristics characteristics_from(const Eigen::VectorXd& eigenvalues, double frob);

struct LnSpectrum {
    Eigen::VectorXd lambda;  // eigenvalues of (L^{-1})^T L^{-1}, ascending
    Eigen::VectorXd sigma;   // singular values of L, ascending
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

// Closed-form spectrum of the cumulative-sum matrix L_N.
LnSpectrum ln_spectrum(int N);

// y = L_N x, i.e. running prefix sums, without forming L_N.
Eigen::VectorXd cumsum_apply(const Eigen::VectorXd& x);

}  // namespace gaussq
