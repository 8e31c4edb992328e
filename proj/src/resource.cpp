#include "gaussq/resource.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaussq/errors.hpp"

namespace gaussq {

namespace {

double lg(double x) { return std::max(1.0, std::log2(x)); }
double polylog(double N) { return std::pow(std::log2(N + 1.0), 2.0); }

// Shared prefix of every path-preparation cost: (||S||_F / lambda_max) kappa^1.5 polylog(N).
double prep_core(const CostParams& p) { return p.frob_ratio * std::pow(p.kappa, 1.5) * polylog(p.N); }

std::vector<CostFormula> make_registry() {
    return {
        {"prepare_x", "F k^1.5 polylog(N) log^3(k/eps)",
         [](const CostParams& p) { return prep_core(p) * std::pow(lg(p.kappa / p.eps), 3); }},
        {"prepare_y", "F k^1.5 N polylog(N) log^3(k/eps)",
         [](const CostParams& p) { return prep_core(p) * p.N * std::pow(lg(p.kappa / p.eps), 3); }},
        {"norm_estimate", "(1/eps) F k polylog(N) log^2(k/eps)",
         [](const CostParams& p) {
             return p.frob_ratio * p.kappa * polylog(p.N) * std::pow(lg(p.kappa / p.eps), 2) / p.eps;
         }},
        {"exponentiate_x", "|x| F k^1.5 polylog(N) log^6(|x| k/eps)",
         [](const CostParams& p) { return p.x_norm * prep_core(p) * std::pow(lg(p.x_norm * p.kappa / p.eps), 6); }},
        {"exponentiate_y", "|y| F k^1.5 N polylog(N) log^6(|y| k/eps)",
         [](const CostParams& p) {
             return p.x_norm * prep_core(p) * p.N * std::pow(lg(p.x_norm * p.kappa / p.eps), 6);
         }},
        {"discrete_sum", "(|f|_inf |x| / eps_hat) F k^1.5 polylog(N) log^5(|f|_inf |x| k/eps_hat)",
         [](const CostParams& p) {
             const double lead = p.f_sup * p.x_norm / p.eps_hat;
             return lead * prep_core(p) * std::pow(lg(lead * p.kappa), 5);
         }},
        {"sqrt_discrete_sum", "(|f|_inf^1/2 |x| / eps_hat) F k^1.5 polylog(N) log^5(|f|_inf |x| k/eps_hat)",
         [](const CostParams& p) {
             const double lead = std::sqrt(p.f_sup) * p.x_norm / p.eps_hat;
             return lead * prep_core(p) * std::pow(lg(p.f_sup * p.x_norm * p.kappa / p.eps_hat), 5);
         }},
        {"matrix_power", "k log^2(k/eps)",
         [](const CostParams& p) { return p.kappa * std::pow(lg(p.kappa / p.eps), 2); }},
        {"fixed_point_qaa", "(1/a) log(2/eps)",
         [](const CostParams& p) { return std::log2(2.0 / p.eps) / p.a_lower; }},
        {"qae", "pi/eps", [](const CostParams& p) { return std::numbers::pi / p.eps; }},
        {"qsvt_degree", "|x| log^2(1/eps)",
         [](const CostParams& p) { return p.x_norm * std::pow(lg(1.0 / p.eps), 2); }},
    };
}

}  // namespace

const std::vector<CostFormula>& formula_registry() {
    static const std::vector<CostFormula> registry = make_registry();
    return registry;
}

double predict(const std::string& formula_id, const CostParams& params) {
    for (const auto& f : formula_registry())
        if (f.id == formula_id) {
            const double v = f.evaluate(params);
            if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("predict: formula '" + formula_id + "' is not positive here");
            return v;
        }
    throw UnknownFormula("unknown cost formula '" + formula_id + "'");
}

ReconcileReport reconcile(const std::vector<ResourceTally>& tallies, const std::string& counter,
                          const std::string& formula_id, const std::vector<CostParams>& ladder, double factor) {
    if (tallies.size() != ladder.size() || tallies.empty()) throw InvalidInput("reconcile: tallies and ladder differ in length");
    if (!(factor >= 1.0)) throw InvalidInput("reconcile: factor must be at least 1");
    ReconcileReport rep;
    rep.formula_id = formula_id;
    rep.counter = counter;
    rep.factor = factor;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        RatioRow row;
        row.measured = tallies[i].get(counter);
        row.predicted = predict(formula_id, ladder[i]);
        if (i > 0) {
            const RatioRow& prev = rep.rows.back();
            row.measured_ratio = row.measured / prev.measured;
            row.predicted_ratio = row.predicted / prev.predicted;
            row.agreement = row.measured_ratio / row.predicted_ratio;
            const bool up = row.predicted_ratio >= 1.0;
            if ((up && row.measured_ratio < 1.0) || (!up && row.measured_ratio > 1.0)) rep.monotone = false;
            if (!(row.agreement <= factor && row.agreement >= 1.0 / factor)) rep.within_factor = false;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace gaussq
