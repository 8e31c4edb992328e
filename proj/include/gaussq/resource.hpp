#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gaussq/tally.hpp"

namespace gaussq {

// Inputs of the cost formulas. Unused fields are ignored by a formula.
struct CostParams {
    double N = 1.0;
    double kappa = 1.0;
    double frob_ratio = 1.0;  // ||Sigma||_F / lambda_max
    double eps = 0.1;
    double x_norm = 1.0;      // ||x||_2, or ||y||_2 on the cumulative-sum route
    double f_sup = 1.0;       // ||f||_inf
    double eps_hat = 0.1;
    double a_lower = 1.0;     // amplitude lower bound for amplification
};

struct CostFormula {
    std::string id;
    std::string expression;  // human-readable form of what is evaluated
    std::function<double(const CostParams&)> evaluate;
};

// All registered formulas. Logarithms are base 2 and floored at 1 so every
// formula stays positive and monotone; polylog(N) is log2(N+1)^2.
const std::vector<CostFormula>& formula_registry();

// Throws UnknownFormula for an unregistered id.
double predict(const std::string& formula_id, const CostParams& params);

struct RatioRow {
    double measured = 0.0;
    double predicted = 0.0;
    double measured_ratio = 1.0;   // relative to the previous rung
    double predicted_ratio = 1.0;
    double agreement = 1.0;        // measured_ratio / predicted_ratio
};

struct ReconcileReport {
    std::string formula_id;
    std::string counter;
    std::vector<RatioRow> rows;
    double factor = 2.0;
    bool monotone = true;       // measured counts move in the predicted direction
    bool within_factor = true;  // every agreement lies in [1/factor, factor]
    bool ok() const { return monotone && within_factor; }
};

// Compares one tally counter along a single-parameter ladder with the
// formula's predictions; only ratios between consecutive rungs matter.
ReconcileReport reconcile(const std::vector<ResourceTally>& tallies, const std::string& counter,
                          const std::string& formula_id, const std::vector<CostParams>& ladder, double factor = 2.0);

}  // namespace gaussq
