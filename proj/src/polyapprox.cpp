#include "gaussq/polyapprox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gaussq/errors.hpp"

namespace gaussq {

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

double clenshaw(const std::vector<double>& c, double x) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return (c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

std::vector<double> chebyshev_derivative(const std::vector<double>& c) {
    const std::size_t n = c.size();
    if (n <= 1) return {0.0};
    std::vector<double> d(n + 1, 0.0);
    for (std::size_t k = n - 1; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * static_cast<double>(k) * c[k];
    d[0] /= 2.0;
    d.resize(n - 1);
    return d;
}

std::vector<double> monomial_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    return d;
}

template <class F>
double grid_max(F&& f, double lo, double hi, int points) {
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
        best = std::max(best, std::abs(f(x)));
    }
    return best;
}

// Chebyshev coefficients c_0..c_degree of f from its values at M
// Gauss-Chebyshev nodes (discrete cosine transform with a cosine table).
std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, int degree, int M) {
    std::vector<double> vals(M);
    const double pi = std::numbers::pi;
    for (int j = 0; j < M; ++j) vals[j] = f(std::cos(pi * (j + 0.5) / M));
    // cos(pi*k*(j+1/2)/M) = cos(pi*m/(2M)) with m = k(2j+1) mod 4M.
    const long period = 4L * M;
    std::vector<double> table(period);
    for (long m = 0; m < period; ++m) table[m] = std::cos(pi * static_cast<double>(m) / (2.0 * M));
    std::vector<double> c(degree + 1, 0.0);
    for (int k = 0; k <= degree; ++k) {
        double acc = 0.0;
        long step = (2L * k) % period;
        long m = k % period;
        for (int j = 0; j < M; ++j) {
            acc += vals[j] * table[m];
            m += step;
            if (m >= period) m -= period;
        }
        c[k] = 2.0 * acc / M;
    }
    c[0] /= 2.0;
    return c;
}

int make_odd(int d) { return d % 2 == 0 ? d + 1 : d; }

}  // namespace

double PolySpec::operator()(double x) const {
    return basis == Basis::Chebyshev ? clenshaw(coeffs, x) : horner(coeffs, x);
}

double PolySpec::derivative(double x) const {
    return basis == Basis::Chebyshev ? clenshaw(chebyshev_derivative(coeffs), x)
                                     : horner(monomial_derivative(coeffs), x);
}

double max_abs(const PolySpec& p, double lo, double hi, int points) {
    return grid_max([&](double x) { return p(x); }, lo, hi, points);
}

double max_abs_derivative(const PolySpec& p, double lo, double hi, int points) {
    PolySpec d = p;
    d.coeffs = p.basis == Basis::Chebyshev ? chebyshev_derivative(p.coeffs) : monomial_derivative(p.coeffs);
    return max_abs(d, lo, hi, points);
}

double max_abs_error(const PolySpec& p, const std::function<double(double)>& f, double lo, double hi, int points) {
    return grid_max([&](double x) { return p(x) - f(x); }, lo, hi, points);
}

bool reverify(const PolySpec& p, double slack, int points) {
    if (max_abs(p, -1.0, 1.0, points) > p.meta.sup_bound + slack) return false;
    if (p.meta.target && max_abs_error(p, p.meta.target, p.meta.lo, p.meta.hi, points) > p.meta.approx_error + slack)
        return false;
    return true;
}

PolySpec p_lin(double Gamma, double eps) {
    if (!(Gamma > 0.0 && Gamma <= 0.5)) throw InvalidInput("p_lin: Gamma must lie in (0, 1/2]");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("p_lin: eps must lie in (0, 1]");

    // Target x/(2G) * w(x) with an erf window w ~ 1 on [-G, G] that falls
    // off around 1.5G. The window is entire, so the even factor w/(2G) has
    // geometrically decaying Chebyshev coefficients; fitting it and
    // multiplying by x keeps P odd and the error relative near the origin.
    // |x w(x)|/(2G) stays well below 1 because w < 1/2 beyond 1.5G.
    const double width = 2.0 * std::sqrt(std::log(4.0 / eps)) / Gamma;
    const double centre = 1.5 * Gamma;
    auto window = [=](double x) { return 0.5 * (std::erf(width * (x + centre)) - std::erf(width * (x - centre))); };
    auto even_factor = [=](double x) { return window(x) / (2.0 * Gamma); };
    const double slope = 1.0 / (2.0 * Gamma);

    int degree = make_odd(static_cast<int>(std::ceil((2.0 / Gamma) * std::log(4.0 / eps))));
    double last_rel = 0.0, last_sup = 0.0;
    for (int attempt = 0; attempt <= 8; ++attempt) {
        const int even_degree = degree - 1;
        const int nodes = std::max(64, 2 * (degree + 1));
        std::vector<double> h = chebyshev_coefficients(even_factor, even_degree, nodes);
        for (int k = 1; k <= even_degree; k += 2) h[k] = 0.0;

        // x T_0 = T_1 and x T_k = (T_{k+1} + T_{k-1}) / 2.
        std::vector<double> c(degree + 1, 0.0);
        for (int k = 0; k <= even_degree; k += 2) {
            if (k == 0) {
                c[1] += h[0];
            } else {
                c[k + 1] += 0.5 * h[k];
                c[k - 1] += 0.5 * h[k];
            }
        }
        PolySpec P;
        P.coeffs = std::move(c);
        P.basis = Basis::Chebyshev;
        P.degree = degree;

        // Relative error on [-G, G] is the error of the even factor.
        PolySpec hfit;
        hfit.coeffs = h;
        hfit.basis = Basis::Chebyshev;
        last_rel = grid_max([&](double x) { return (hfit(x) - slope) / slope; }, -Gamma, Gamma, 10001);
        last_sup = max_abs(P, -1.0, 1.0, 10001);
        if (last_rel <= eps && last_sup <= 1.0) {
            P.meta.target_id = "linear_amplification";
            P.meta.target = [slope](double x) { return slope * x; };
            P.meta.lo = -Gamma;
            P.meta.hi = Gamma;
            P.meta.sup_bound = 1.0;
            P.meta.rel_error = eps;
            P.meta.approx_error = eps / 2.0;  // eps |x| / (2G) with |x| <= G
            return P;
        }
        degree = make_odd(static_cast<int>(std::ceil(1.25 * degree)));
    }
    std::ostringstream os;
    os << "p_lin(Gamma=" << Gamma << ", eps=" << eps << "): verification failed after degree escalation; "
       << "achieved relative error " << last_rel << ", sup " << last_sup;
    throw ConstructionFailure(os.str());
}

int taylor_degree(double a, double eps) {
    if (!(a > 0.0) || !(eps > 0.0)) throw InvalidInput("taylor_exp_scaled: need a > 0 and eps > 0");
    const double la = std::abs(std::log(a));
    const double e2 = std::exp(2.0);
    const int k1 = static_cast<int>(std::ceil(e2 * la));
    const int k2 = static_cast<int>(std::ceil(std::log(1.0 / eps)));
    return std::max({k1, k2, 0});
}

PolySpec taylor_exp_scaled(double a, double eps) {
    const int k = taylor_degree(a, eps);
    const double la = std::log(a);
    PolySpec P;
    P.basis = Basis::Monomial;
    P.degree = k;
    P.coeffs.resize(k + 1);
    double term = 1.0;
    for (int m = 0; m <= k; ++m) {
        if (m > 0) term *= la / m;
        P.coeffs[m] = term;
    }
    const double peak = std::max(a, 1.0 / a);
    // Horner's rounding error is about (k+1) u sum_m |c_m| <= (k+1) u e^{|ln a|}.
    const double floor = 4.0 * (k + 1) * kUnitRoundoff * peak;
    P.meta.target_id = "exp_scaled";
    P.meta.target = [la](double x) { return std::exp(la * x); };
    P.meta.lo = -1.0;
    P.meta.hi = 1.0;
    P.meta.approx_error = std::max(eps, floor);
    P.meta.precision_limited = floor > eps;
    P.meta.sup_bound = peak + P.meta.approx_error;
    return P;
}

PolySpec compose_poly(const PolySpec& P, const PolySpec& Q) {
    if (Q.meta.sup_bound > 1.0 + 1e-9)
        throw DomainError("compose_poly: inner polynomial may leave [-1,1] (sup bound " +
                          std::to_string(Q.meta.sup_bound) + ")");
    const int D = P.degree * Q.degree;
    PolySpec R;
    R.basis = Basis::Chebyshev;
    R.degree = D;
    // Interpolation at D+1 Chebyshev nodes reproduces a degree-D polynomial exactly.
    R.coeffs = chebyshev_coefficients([&](double x) { return P(Q(x)); }, D, D + 1);

    R.meta.target_id = P.meta.target_id + "(" + Q.meta.target_id + ")";
    if (P.meta.target && Q.meta.target) {
        auto f = P.meta.target;
        auto g = Q.meta.target;
        R.meta.target = [f, g](double x) { return f(g(x)); };
    }
    R.meta.lo = Q.meta.lo;
    R.meta.hi = Q.meta.hi;
    R.meta.sup_bound = P.meta.sup_bound;
    const double lip = max_abs_derivative(P, -1.0, 1.0);
    R.meta.approx_error = P.meta.approx_error + lip * Q.meta.approx_error;
    R.meta.precision_limited = P.meta.precision_limited || Q.meta.precision_limited;
    return R;
}

PolySpec scale_poly(const PolySpec& P, double c) {
    PolySpec R = P;
    for (double& v : R.coeffs) v *= c;
    if (P.meta.target) {
        auto f = P.meta.target;
        R.meta.target = [f, c](double x) { return c * f(x); };
    }
    R.meta.sup_bound = std::abs(c) * P.meta.sup_bound;
    R.meta.approx_error = std::abs(c) * P.meta.approx_error;
    return R;
}

PolySpec build_Hk(double kappa, double c, double Xi, double eps) {
    if (c == 0.0) throw InvalidInput("build_Hk: c must be nonzero");
    if (!(Xi > 0.0) || !(2.0 * Xi <= kappa)) throw PreconditionError("build_Hk: requires 0 < 2 Xi <= kappa");
    const double growth = std::exp(2.0 * std::abs(c) * Xi);
    if (!(eps > 0.0 && eps <= 2.0 * growth)) throw PreconditionError("build_Hk: eps outside (0, 2 exp(2|c|Xi)]");

    PolySpec outer = taylor_exp_scaled(std::exp(2.0 * c * Xi), eps / 2.0);
    // p_lin only accepts eps <= 1; a tighter inner tolerance is always safe.
    const double eps_g = std::min(1.0, eps / (std::abs(c) * 2.0 * Xi * growth));
    PolySpec inner = p_lin(Xi / kappa, eps_g);
    PolySpec H = compose_poly(outer, inner);

    const double lo = -Xi / kappa, hi = Xi / kappa;
    auto target = [c, kappa](double z) { return std::exp(c * kappa * z); };
    const double err = max_abs_error(H, target, lo, hi);
    const double sup = max_abs(H, -1.0, 1.0);
    const double slack = 1e-9;
    // When the double-precision floor of the Taylor stage exceeds eps the
    // certified error is the floor, not eps.
    const double allowed = std::max(eps, outer.meta.approx_error * 2.0);
    if (err > allowed + slack || sup > 2.0 * growth + slack) {
        std::ostringstream os;
        os << "build_Hk: verification failed (interval error " << err << " vs " << allowed << ", sup " << sup
           << " vs " << 2.0 * growth << ")";
        throw ConstructionFailure(os.str());
    }
    H.meta.target_id = "exp_kappa";
    H.meta.target = target;
    H.meta.lo = lo;
    H.meta.hi = hi;
    H.meta.approx_error = allowed;
    H.meta.precision_limited = allowed > eps;
    H.meta.sup_bound = 2.0 * growth;
    return H;
}

PolySpec build_Hk_small_norm(double kappa, double c, double Xi, double eps) {
    if (c == 0.0) throw InvalidInput("build_Hk_small_norm: c must be nonzero");
    if (!(kappa > 0.0) || !(Xi > 0.0)) throw PreconditionError("build_Hk_small_norm: kappa and Xi must be positive");
    if (kappa >= 2.0 * Xi) throw PreconditionError("build_Hk_small_norm: use build_Hk when kappa >= 2 Xi");
    const double growth = std::exp(2.0 * std::abs(c) * Xi);
    if (!(eps > 0.0 && eps <= 2.0 * growth)) throw PreconditionError("build_Hk_small_norm: eps outside (0, 2 exp(2|c|Xi)]");

    PolySpec H = taylor_exp_scaled(std::exp(c * kappa), eps / 2.0);
    auto target = [c, kappa](double z) { return std::exp(c * kappa * z); };
    const double err = max_abs_error(H, target, -1.0, 1.0);
    const double sup = max_abs(H, -1.0, 1.0);
    const double allowed = std::max(eps, 2.0 * H.meta.approx_error);
    if (err > allowed + 1e-9 || sup > 2.0 * growth + 1e-9) {
        std::ostringstream os;
        os << "build_Hk_small_norm: verification failed (error " << err << ", sup " << sup << ")";
        throw ConstructionFailure(os.str());
    }
    H.meta.target_id = "exp_kappa";
    H.meta.target = target;
    H.meta.approx_error = allowed;
    H.meta.precision_limited = allowed > eps;
    H.meta.sup_bound = 2.0 * growth;
    return H;
}

}  // namespace gaussq
