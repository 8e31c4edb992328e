#include "gaussq/covariance.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gaussq/errors.hpp"

namespace gaussq {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && std::nearbyint(x) == x;
}

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::nearbyint(x)) < tol;
}

// Plain power series of 2F1 around z = 0.
double series_2f1(double a, double b, double c, double z, const SeriesOptions& opt) {
    double term = 1.0;
    double sum = 1.0;
    for (long n = 0; n < opt.max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0) return sum;
        // Bound the remaining tail by a geometric series with the next term
        // ratio; near z = 1 that ratio is close to 1 and |term| alone would
        // stop far too early.
        const double r = std::abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)) * z);
        const double tail = r < 1.0 ? std::abs(term) * r / (1.0 - r) : HUGE_VAL;
        if (tail < opt.tol * std::abs(sum)) return sum;
    }
    throw IterationLimit("2F1 series did not converge within " +
                         std::to_string(opt.max_terms) + " terms (z=" + std::to_string(z) + ")");
}

}  // namespace

double eval_2f1(double a, double b, double c, double z, const SeriesOptions& opt) {
    if (is_nonpositive_integer(c)) throw InvalidInput("2F1: c must not be a nonpositive integer");
    if (!(z >= 0.0 && z <= 1.0)) throw InvalidInput("2F1: z must lie in [0,1]");
    if (a == 0.0 || b == 0.0 || z == 0.0) return 1.0;

    const double s = c - a - b;
    if (z == 1.0) {
        if (s <= 0.0) throw InvalidInput("2F1 at z=1 requires c-a-b > 0");
        return std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
    }

    // Terminating series and the small-z regime go straight to the power series.
    // Near z = 1 the terms decay only like n^{-1-s}, so switch to the
    // linear transformation onto 1 - z when it is well defined.
    const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if (terminating || z <= 0.5 || near_integer(s)) return series_2f1(a, b, c, z, opt);

    const double w = 1.0 - z;
    const double g1 = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
    const double g2 = std::tgamma(c) * std::tgamma(-s) / (std::tgamma(a) * std::tgamma(b));
    double out = 0.0;
    if (g1 != 0.0 && std::isfinite(g1)) out += g1 * series_2f1(a, b, 1.0 - s, w, opt);
    if (g2 != 0.0 && std::isfinite(g2)) out += g2 * std::pow(w, s) * series_2f1(c - a, c - b, 1.0 + s, w, opt);
    return out;
}

double eval_1f2(double a, double b1, double b2, double z, const SeriesOptions& opt) {
    if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
        throw InvalidInput("1F2: b1, b2 must not be nonpositive integers");
    double term = 1.0;
    double sum = 1.0;
    if (a == 0.0 || z == 0.0) return 1.0;
    for (long n = 0; n < opt.max_terms; ++n) {
        term *= (a + n) / ((b1 + n) * (b2 + n) * (n + 1.0)) * z;
        sum += term;
        // The series is entire; once n exceeds |z| the terms shrink
        // geometrically, so the relative stop rule is safe to apply there.
        if (term == 0.0 || (std::abs(term) < opt.tol * std::abs(sum) && n > std::abs(z)))
            return sum;
    }
    throw IterationLimit("1F2 series did not converge within " + std::to_string(opt.max_terms) + " terms");
}

double rlfbm_cov(double H, double u, double v) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("rlfbm_cov: H must lie in (0,1)");
    if (u < 0.0 || v < 0.0) throw InvalidInput("rlfbm_cov: times must be nonnegative");
    if (u > v) std::swap(u, v);
    if (u == 0.0) return 0.0;
    const double x = v / u;
    const double G = (2.0 * H / (0.5 + H)) * std::pow(x, -(0.5 - H)) *
                     eval_2f1(0.5 - H, 1.0, 1.5 + H, 1.0 / x);
    return std::pow(u, 2.0 * H) * G;
}

double stdfbm_cov(double H, double t, double s) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("stdfbm_cov: H must lie in (0,1)");
    const double h2 = 2.0 * H;
    return 0.5 * (std::pow(std::abs(t), h2) + std::pow(std::abs(s), h2) - std::pow(std::abs(t - s), h2));
}

double fou_cov(double H, double lambda, double sigma, double s) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("fou_cov: H must lie in (0,1)");
    if (!(lambda > 0.0) || !(sigma > 0.0)) throw InvalidInput("fou_cov: lambda and sigma must be positive");
    s = std::abs(s);
    const double g = std::tgamma(2.0 * H + 1.0);
    double bracket = std::pow(lambda, -2.0 * H) * std::cosh(lambda * s);
    if (s > 0.0) {
        const double z = lambda * lambda * s * s / 4.0;
        bracket -= std::pow(s, 2.0 * H) / g * eval_1f2(1.0, H + 0.5, H + 1.0, z);
    }
    // sigma^2 Gamma(2H+1) sin(pi H)/(2 pi) times (pi / sin(pi H)) * bracket
    return sigma * sigma * g / 2.0 * bracket;
}

const char* to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::RLfBM: return "RLfBM";
        case ProcessKind::StdFBM: return "StdFBM";
        case ProcessKind::FOU: return "FOU";
    }
    return "?";
}

const char* to_string(CovKind k) { return k == CovKind::PV ? "PV" : "NS"; }

ProcessKind parse_process(const std::string& s) {
    if (s == "RLfBM" || s == "rlfbm" || s == "rl-fbm") return ProcessKind::RLfBM;
    if (s == "StdFBM" || s == "stdfbm" || s == "std-fbm" || s == "fbm") return ProcessKind::StdFBM;
    if (s == "FOU" || s == "fou" || s == "fOU") return ProcessKind::FOU;
    throw InvalidInput("unknown process '" + s + "' (expected RLfBM, StdFBM or FOU)");
}

CovKind parse_cov_kind(const std::string& s) {
    if (s == "PV" || s == "pv" || s == "X" || s == "x") return CovKind::PV;
    if (s == "NS" || s == "ns" || s == "Y" || s == "y") return CovKind::NS;
    throw InvalidInput("unknown covariance kind '" + s + "' (expected PV or NS)");
}

void ProcessSpec::validate() const {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("Hurst parameter must lie strictly inside (0,1)");
    if (kind == ProcessKind::FOU && (!(lambda > 0.0) || !(sigma > 0.0)))
        throw InvalidInput("fOU requires lambda > 0 and sigma > 0");
}

GridSpec GridSpec::uniform(double T, int N) {
    if (!(T > 0.0)) throw InvalidInput("grid horizon T must be positive");
    if (N < 1) throw InvalidInput("grid block count N must be at least 1");
    GridSpec g;
    g.T = T;
    g.N = N;
    g.points.resize(N + 1);
    for (int i = 0; i <= N; ++i) g.points[i] = i * T / N;
    g.points[N] = T;
    return g;
}

void GridSpec::validate() const {
    if (N < 1 || static_cast<int>(points.size()) != N + 1) throw InvalidInput("grid must have N+1 points");
    if (points.front() != 0.0) throw InvalidInput("grid must start at 0");
    for (int i = 1; i <= N; ++i)
        if (!(points[i] > points[i - 1])) throw InvalidInput("grid points must be strictly increasing");
}

namespace {

// Covariance of path values on the process' natural index set.
Eigen::MatrixXd path_value_cov(const ProcessSpec& p, const GridSpec& g) {
    const int N = g.N;
    if (p.kind == ProcessKind::FOU) {
        Eigen::MatrixXd S(N + 1, N + 1);
        // Uniform grids have only N+1 distinct lags; general grids fall back
        // to one evaluation per pair.
        bool uniform = true;
        const double h = g.T / N;
        for (int i = 0; i <= N && uniform; ++i)
            uniform = std::abs(g.points[i] - i * h) <= 1e-14 * g.T;
        if (uniform) {
            std::vector<double> lag(N + 1);
            for (int k = 0; k <= N; ++k) lag[k] = fou_cov(p.H, p.lambda, p.sigma, k * h);
            for (int i = 0; i <= N; ++i)
                for (int j = 0; j <= N; ++j) S(i, j) = lag[std::abs(i - j)];
        } else {
            for (int i = 0; i <= N; ++i)
                for (int j = i; j <= N; ++j)
                    S(i, j) = S(j, i) = fou_cov(p.H, p.lambda, p.sigma, g.points[j] - g.points[i]);
        }
        return S;
    }
    Eigen::MatrixXd S(N, N);
    for (int i = 1; i <= N; ++i) {
        for (int j = i; j <= N; ++j) {
            const double ti = g.points[i], tj = g.points[j];
            const double v = p.kind == ProcessKind::RLfBM ? rlfbm_cov(p.H, ti, tj) : stdfbm_cov(p.H, ti, tj);
            S(i - 1, j - 1) = S(j - 1, i - 1) = v;
        }
    }
    return S;
}

}  // namespace

CovMatrix build_cov(const ProcessSpec& process, const GridSpec& grid, CovKind kind,
                    Eigen::VectorXd* eigenvalues_out) {
    process.validate();
    grid.validate();
    CovMatrix out;
    out.process = process;
    out.grid = grid;
    out.kind = kind;

    Eigen::MatrixXd P = path_value_cov(process, grid);
    if (kind == CovKind::PV) {
        out.entries = std::move(P);
    } else {
        // Increment i is G_i - G_{i-1}, with a virtual zero before the first
        // index (G_{t_0} = 0 for fBM; the fOU first "increment" is Y_{t_0}).
        const Eigen::Index m = P.rows();
        Eigen::MatrixXd D(m, m);
        auto at = [&](Eigen::Index i, Eigen::Index j) { return (i < 0 || j < 0) ? 0.0 : P(i, j); };
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                D(i, j) = at(i, j) - at(i, j - 1) - at(i - 1, j) + at(i - 1, j - 1);
        out.entries = std::move(D);
    }

    Eigen::MatrixXd sym = 0.5 * (out.entries + out.entries.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed during PD check");
    const double lmin = es.eigenvalues()(0);
    if (!(lmin > 0.0))
        throw DegeneracyError("covariance matrix is not positive definite (min eigenvalue " +
                                  std::to_string(lmin) + ")",
                              lmin);
    if (eigenvalues_out) *eigenvalues_out = es.eigenvalues();
    out.entries = std::move(sym);
    return out;
}

Eigen::MatrixXd lower_cumsum_matrix(int N) {
    if (N < 1) throw InvalidInput("lower_cumsum_matrix: N must be at least 1");
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) L.row(i).head(i + 1).setOnes();
    return L;
}

}  // namespace gaussq
