#include "gaussq/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "gaussq/errors.hpp"

namespace gaussq {

const char* to_string(Characteristic c) {
    switch (c) {
        case Characteristic::LambdaMin: return "lambda_min";
        case Characteristic::LambdaMax: return "lambda_max";
        case Characteristic::Frob: return "frob";
        case Characteristic::Kappa: return "kappa";
    }
    return "?";
}

Characteristic parse_characteristic(const std::string& s) {
    if (s == "lambda_min") return Characteristic::LambdaMin;
    if (s == "lambda_max") return Characteristic::LambdaMax;
    if (s == "frob") return Characteristic::Frob;
    if (s == "kappa") return Characteristic::Kappa;
    throw InvalidInput("unknown characteristic '" + s + "'");
}

double ScalingRow::value(Characteristic c) const {
    switch (c) {
        case Characteristic::LambdaMin: return ch.lambda_min;
        case Characteristic::LambdaMax: return ch.lambda_max;
        case Characteristic::Frob: return ch.frob;
        case Characteristic::Kappa: return ch.kappa;
    }
    return 0.0;
}

int worker_count() {
    int n = 1;
    if (const char* env = std::getenv("GAUSSQPIPE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) n = static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0) n = std::min<int>(n, static_cast<int>(hw));
    return std::max(1, n);
}

std::vector<ScalingRow> sweep_characteristics(ProcessKind process, CovKind kind, const std::vector<double>& H_list,
                                              const std::vector<int>& N_list, int threads) {
    if (!std::is_sorted(N_list.begin(), N_list.end())) throw InvalidInput("sweep: N list must be ascending");
    for (double H : H_list)
        if (!(H > 0.0 && H < 1.0)) throw InvalidInput("sweep: H must lie in (0,1)");

    std::vector<ScalingRow> rows;
    for (double H : H_list)
        for (int N : N_list) {
            ScalingRow r;
            r.process = process;
            r.kind = kind;
            r.H = H;
            r.N = N;
            rows.push_back(r);
        }

    auto run_cell = [&](ScalingRow& r) {
        try {
            ProcessSpec p{process, r.H, 1.0, 1.0};
            Eigen::VectorXd ev;
            CovMatrix S = build_cov(p, GridSpec::uniform(1.0, r.N), kind, &ev);
            r.dim = static_cast<int>(S.dim());
            r.ch = characteristics_from(ev, S.entries.norm());
        } catch (const Error& e) {
            r.ok = false;
            r.error = e.what();
        }
    };

    const int workers = std::min<int>(threads > 0 ? threads : worker_count(), static_cast<int>(rows.size()));
    if (workers <= 1) {
        for (auto& r : rows) run_cell(r);
        return rows;
    }
    // Largest cells first keeps the tail of the schedule short; results land
    // in fixed slots, so the output does not depend on scheduling.
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rows[a].N > rows[b].N; });
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < order.size(); i = next++) run_cell(rows[order[i]]);
        });
    for (auto& t : pool) t.join();
    return rows;
}

double endpoint_coefficient(double N_l, double y_l, double N_r, double y_r, double p) {
    if (std::abs(p) < 1e-12) return y_r;
    const double slope = (std::pow(y_r, 1.0 / p) - std::pow(y_l, 1.0 / p)) / (N_r - N_l);
    return std::pow(slope, p);
}

ScalingFit fit_power_law(std::vector<std::pair<double, double>> points, double tail_fraction) {
    if (points.size() < 4) throw InvalidInput("fit_power_law: need at least 4 points");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw InvalidInput("fit_power_law: tail fraction must lie in (0,1]");
    for (const auto& [N, y] : points)
        if (!(N > 0.0) || !(y > 0.0)) throw InvalidInput("fit_power_law: N and y must be positive");
    std::sort(points.begin(), points.end());
    const std::size_t keep =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(points.size()))));
    ScalingFit fit;
    fit.points.assign(points.end() - static_cast<std::ptrdiff_t>(std::min(keep, points.size())), points.end());

    const double n = static_cast<double>(fit.points.size());
    double sx = 0, sy = 0;
    for (const auto& [N, y] : fit.points) {
        sx += std::log(N);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [N, y] : fit.points) {
        const double dx = std::log(N) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.p = sxy / sxx;
    fit.A_ols = std::exp(my - fit.p * mx);
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    const auto& [Nl, yl] = fit.points.front();
    const auto& [Nr, yr] = fit.points.back();
    fit.A_endpoint = endpoint_coefficient(Nl, yl, Nr, yr, fit.p);
    return fit;
}

double expected_exponent(ProcessKind process, CovKind kind, Characteristic c, double H) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("expected_exponent: H must lie in (0,1)");
    if (c == Characteristic::Kappa)
        return expected_exponent(process, kind, Characteristic::LambdaMax, H) -
               expected_exponent(process, kind, Characteristic::LambdaMin, H);
    if (kind == CovKind::PV) return c == Characteristic::LambdaMin ? -2.0 * H : 1.0;

    const bool fou = process == ProcessKind::FOU;
    switch (c) {
        case Characteristic::LambdaMin: return H < 0.5 ? -1.0 : -2.0 * H;
        case Characteristic::LambdaMax:
            if (fou) return 0.0;
            return H < 0.5 ? -2.0 * H : -1.0;
        case Characteristic::Frob:
            if (fou) return H < 0.25 ? 0.5 - 2.0 * H : 0.0;
            return H < 0.75 ? 0.5 - 2.0 * H : -1.0;
        default: break;
    }
    return 0.0;
}

bool near_regime_boundary(ProcessKind process, CovKind kind, Characteristic c, double H, double margin) {
    if (kind == CovKind::PV) return false;
    std::vector<double> switches;
    const bool fou = process == ProcessKind::FOU;
    switch (c) {
        case Characteristic::LambdaMin: switches = {0.5}; break;
        case Characteristic::LambdaMax: if (!fou) switches = {0.5}; break;
        case Characteristic::Frob: switches = {fou ? 0.25 : 0.75}; break;
        case Characteristic::Kappa: switches = {0.5}; break;
    }
    // Exactly at a switch both branches coincide; the slow convergence only
    // bites on either side of it.
    for (double b : switches)
        if (H != b && std::abs(H - b) < margin) return true;
    return false;
}

double complexity_exponent(ProcessKind process, double H, CovKind route) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("complexity_exponent: H must lie in (0,1)");
    if (route == CovKind::PV) return 1.5 + 3.0 * H;
    if (process == ProcessKind::FOU) {
        if (H < 0.25) return 3.0 - 2.0 * H;
        if (H < 0.5) return 2.5;
        return 1.0 + 3.0 * H;
    }
    if (H < 0.5) return 3.0 - 3.0 * H;
    if (H < 0.75) return 1.0 + H;
    return -0.5 + 3.0 * H;
}

double p_tilde(double H) {
    if (!(H > 0.0 && H < 1.0)) throw InvalidInput("p_tilde: H must lie in (0,1)");
    if (H <= 0.5) return std::min(1.5 + 3.0 * H, 3.0 - 3.0 * H);
    return std::max(1.0 + H, -0.5 + 3.0 * H);
}

}  // namespace gaussq
