#pragma once

#include <functional>
#include <string>
#include <vector>

namespace gaussq {

enum class Basis { Monomial, Chebyshev };

struct PolyMeta {
    std::string target_id;
    std::function<double(double)> target;  // function approximated on [lo, hi]
    double lo = -1.0;
    double hi = 1.0;
    double sup_bound = 0.0;     // guaranteed max |P| on [-1, 1]
    double approx_error = 0.0;  // guaranteed max |P - target| on [lo, hi]
    double rel_error = 0.0;     // relative guarantee, when the construction has one
    // Set when the requested error lies below what double precision can
    // certify; approx_error then holds the achievable floor instead.
    bool precision_limited = false;
};

struct PolySpec {
    std::vector<double> coeffs;
    Basis basis = Basis::Monomial;
    int degree = 0;
    PolyMeta meta;

    double operator()(double x) const;
    double derivative(double x) const;
};

// Dense-grid measurements used for verification: `points` uniformly spaced
// samples including both endpoints.
double max_abs(const PolySpec& p, double lo, double hi, int points = 10001);
double max_abs_derivative(const PolySpec& p, double lo, double hi, int points = 10001);
double max_abs_error(const PolySpec& p, const std::function<double(double)>& f, double lo, double hi,
                     int points = 10001);

// Re-checks the declared sup bound and approximation error with `slack`.
bool reverify(const PolySpec& p, double slack = 1e-9, int points = 10001);

// Odd polynomial with |P(x) - x/(2G)| <= eps |x| / (2G) on [-G, G] and
// |P| <= 1 on [-1, 1].
PolySpec p_lin(double Gamma, double eps);

// Truncated Taylor series of a^x; degree max{ceil(e^2 |ln a|), ceil(ln(1/eps))}.
PolySpec taylor_exp_scaled(double a, double eps);
int taylor_degree(double a, double eps);

// P o Q, with error eps_P + max|P'| * eps_Q on Q's interval.
PolySpec compose_poly(const PolySpec& P, const PolySpec& Q);

// c * P, with the metadata scaled accordingly.
PolySpec scale_poly(const PolySpec& P, double c);

// Approximates exp(c*kappa*zeta) on [-Xi/kappa, Xi/kappa] to within eps with
// sup over [-1, 1] at most 2 exp(2|c| Xi). Requires 2 Xi <= kappa.
PolySpec build_Hk(double kappa, double c, double Xi, double eps);

// Variant for kappa < 2 Xi: the plain Taylor polynomial of exp(c*kappa*zeta)
// is accurate on all of [-1, 1] and already within the same sup bound.
PolySpec build_Hk_small_norm(double kappa, double c, double Xi, double eps);

}  // namespace gaussq
