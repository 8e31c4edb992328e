#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gaussq/covariance.hpp"
#include "gaussq/errors.hpp"
#include "gaussq/linalg.hpp"
#include "gaussq/pipeline.hpp"
#include "gaussq/resource.hpp"
#include "gaussq/sampler.hpp"
#include "gaussq/scaling.hpp"

namespace py = pybind11;
using namespace gaussq;

namespace {

CovMatrix make_cov(const std::string& process, double H, int N, double T, const std::string& kind) {
    ProcessSpec spec;
    spec.kind = parse_process(process);
    spec.H = H;
    return build_cov(spec, GridSpec::uniform(T, N), parse_cov_kind(kind));
}

SpectralEstimates estimates_for(const CovMatrix& S, const std::string& mode) {
    return SpectralEstimates::make(S, parse_estimate_mode(mode));
}

py::dict pipeline_dict(const PipelineResult& r) {
    py::dict d;
    d["state"] = r.state.amps;
    d["fidelity"] = r.fidelity;
    d["eps"] = r.eps;
    d["eta_tilde"] = r.eta_tilde ? py::cast(*r.eta_tilde) : py::none();
    d["classical_reference"] = r.classical_reference;
    d["tally"] = r.tally.counts;
    d["ledger"] = r.ledger;
    d["precision_limited"] = r.precision_limited;
    d["skipped"] = r.skipped;
    d["skip_reason"] = r.skip_reason;
    return d;
}

py::dict sum_dict(const SumResult& r) {
    py::dict d;
    d["estimate"] = r.estimate;
    d["truth"] = r.truth;
    d["eps_hat"] = r.eps_hat;
    d["grover_queries"] = r.grover_queries;
    d["tally"] = r.tally.counts;
    d["ledger"] = r.ledger;
    d["precision_limited"] = r.precision_limited;
    d["skipped"] = r.skipped;
    d["skip_reason"] = r.skip_reason;
    return d;
}

ExpOptions exp_options(const std::string& route, const std::string& policy, std::uint64_t seed) {
    ExpOptions opt;
    opt.route = parse_route(route);
    if (policy == "strict") opt.policy = NormPolicy::Strict;
    else if (policy == "sup-norm") opt.policy = NormPolicy::SupNormOnly;
    else throw InvalidInput("policy must be 'strict' or 'sup-norm'");
    opt.seed = seed;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_gaussq, m) {
    m.doc() = "Gaussian path sampling and amplitude-encoded path functionals";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<CalibrationError>(m, "CalibrationError", base.ptr());
    py::register_exception<UnknownFormula>(m, "UnknownFormula", base.ptr());

    m.def("hyp2f1", [](double a, double b, double c, double z) { return eval_2f1(a, b, c, z); },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
    m.def("rlfbm_cov", &rlfbm_cov, py::arg("H"), py::arg("u"), py::arg("v"));
    m.def("stdfbm_cov", &stdfbm_cov, py::arg("H"), py::arg("t"), py::arg("s"));

    m.def("build_cov",
          [](const std::string& process, double H, int N, double T, const std::string& kind) {
              return make_cov(process, H, N, T, kind).entries;
          },
          py::arg("process"), py::arg("H"), py::arg("N"), py::arg("T") = 1.0, py::arg("kind") = "pv");

    m.def("characteristics",
          [](const Eigen::MatrixXd& A) {
              const CovCharacteristics c = cov_characteristics(A);
              return py::dict(py::arg("lambda_min") = c.lambda_min, py::arg("lambda_max") = c.lambda_max,
                              py::arg("frob") = c.frob, py::arg("kappa") = c.kappa);
          },
          py::arg("A"));

    m.def("sample_std_normal", [](int dim, std::uint64_t seed) { return sample_std_normal(dim, seed).first; },
          py::arg("dim"), py::arg("seed"));

    m.def("prepare_x",
          [](const std::string& process, double H, int N, double eps, std::uint64_t seed, const std::string& est) {
              const CovMatrix S = make_cov(process, H, N, 1.0, "pv");
              const auto z = sample_std_normal(static_cast<int>(S.dim()), seed).first;
              return pipeline_dict(prepare_x(S, z, eps, estimates_for(S, est)));
          },
          py::arg("process"), py::arg("H"), py::arg("N"), py::arg("eps") = 0.05, py::arg("seed") = 0,
          py::arg("est_mode") = "oracle");

    m.def("prepare_y",
          [](const std::string& process, double H, int N, double eps, std::uint64_t seed, const std::string& est) {
              const CovMatrix S = make_cov(process, H, N, 1.0, "ns");
              const auto z = sample_std_normal(static_cast<int>(S.dim()), seed).first;
              return pipeline_dict(prepare_y(S, z, eps, estimates_for(S, est)));
          },
          py::arg("process"), py::arg("H"), py::arg("N"), py::arg("eps") = 0.05, py::arg("seed") = 0,
          py::arg("est_mode") = "oracle");

    m.def("estimate_norm",
          [](const Eigen::MatrixXd& sigma, const Eigen::VectorXd& z, double eps_hat, std::uint64_t seed) {
              CovMatrix S;
              S.entries = sigma;
              S.grid = GridSpec::uniform(1.0, static_cast<int>(sigma.rows()));
              const NormEstimate e =
                  estimate_norm(S, z, NormMode::absolute(eps_hat), Route::X, SpectralEstimates::oracle(S), seed);
              return py::dict(py::arg("estimate") = e.estimate, py::arg("eta") = e.eta,
                              py::arg("eps_hat") = e.eps_hat, py::arg("tally") = e.tally.counts);
          },
          py::arg("sigma"), py::arg("z"), py::arg("eps_hat"), py::arg("seed") = 0);

    m.def("exponentiate",
          [](const Eigen::MatrixXd& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c, double Xi,
             double eps, const std::string& policy, std::uint64_t seed) {
              CovMatrix S;
              S.entries = sigma;
              S.grid = GridSpec::uniform(1.0, static_cast<int>(sigma.rows()));
              return pipeline_dict(
                  exponentiate(S, z, f, c, Xi, eps, SpectralEstimates::oracle(S), exp_options("x", policy, seed)));
          },
          py::arg("sigma"), py::arg("z"), py::arg("f"), py::arg("c"), py::arg("Xi"), py::arg("eps") = 0.05,
          py::arg("policy") = "strict", py::arg("seed") = 0);

    m.def("discrete_sum",
          [](const Eigen::MatrixXd& sigma, const Eigen::VectorXd& z, const Eigen::VectorXd& f, double c, double Xi,
             double eps_hat, bool sqrt_variant, const std::string& policy, std::uint64_t seed) {
              CovMatrix S;
              S.entries = sigma;
              S.grid = GridSpec::uniform(1.0, static_cast<int>(sigma.rows()));
              const auto est = SpectralEstimates::oracle(S);
              const auto opt = exp_options("x", policy, seed);
              return sum_dict(sqrt_variant ? sqrt_discrete_sum(S, z, f, c, Xi, eps_hat, est, opt)
                                           : discrete_sum(S, z, f, c, Xi, eps_hat, est, opt));
          },
          py::arg("sigma"), py::arg("z"), py::arg("f"), py::arg("c"), py::arg("Xi"), py::arg("eps_hat"),
          py::arg("sqrt_variant") = false, py::arg("policy") = "strict", py::arg("seed") = 0);

    m.def("fit_power_law",
          [](const std::vector<std::pair<double, double>>& points, double tail_fraction) {
              const ScalingFit f = fit_power_law(points, tail_fraction);
              return py::dict(py::arg("p") = f.p, py::arg("A_endpoint") = f.A_endpoint, py::arg("r2") = f.r2);
          },
          py::arg("points"), py::arg("tail_fraction") = 0.5);

    m.def("expected_exponent",
          [](const std::string& process, const std::string& kind, const std::string& characteristic, double H) {
              return expected_exponent(parse_process(process), parse_cov_kind(kind),
                                       parse_characteristic(characteristic), H);
          },
          py::arg("process"), py::arg("kind"), py::arg("characteristic"), py::arg("H"));

    m.def("complexity_exponent",
          [](const std::string& process, double H, const std::string& route) {
              return complexity_exponent(parse_process(process), H, parse_cov_kind(route));
          },
          py::arg("process"), py::arg("H"), py::arg("route"));

    m.def("p_tilde", &p_tilde, py::arg("H"));

    m.def("predict",
          [](const std::string& formula_id, const std::map<std::string, double>& params) {
              CostParams p;
              for (const auto& [k, v] : params) {
                  if (k == "N") p.N = v;
                  else if (k == "kappa") p.kappa = v;
                  else if (k == "frob_ratio") p.frob_ratio = v;
                  else if (k == "eps") p.eps = v;
                  else if (k == "x_norm") p.x_norm = v;
                  else if (k == "f_sup") p.f_sup = v;
                  else if (k == "eps_hat") p.eps_hat = v;
                  else if (k == "a_lower") p.a_lower = v;
                  else throw InvalidInput("unknown cost parameter '" + k + "'");
              }
              return predict(formula_id, p);
          },
          py::arg("formula_id"), py::arg("params") = std::map<std::string, double>{});
}
