// Python bindings for the entropy, bound, and campaign layers. States cross
// the boundary as complex numpy arrays with the composite index a * d_B + b.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "renyi/bounds.hpp"
#include "renyi/harness.hpp"
#include "renyi/renyi_entropy.hpp"
#include "renyi/state_model.hpp"

namespace py = pybind11;

namespace {

renyi::RenyiOrder make_order(double alpha) {
  return std::isinf(alpha) ? renyi::RenyiOrder::infinity() : renyi::RenyiOrder(alpha);
}

renyi::BipartiteState make_state(const renyi::Matrix& m, int d_a, int d_b,
                                 bool classical_a = false, bool classical_b = false) {
  return renyi::BipartiteState(renyi::DensityOperator(renyi::Matrix(m)), d_a, d_b,
                               classical_a, classical_b);
}

py::dict result_dict(const renyi::EntropyResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["optimizer"] = r.optimizer.matrix();
  d["solver"] = renyi::to_string(r.solver);
  d["iterations"] = r.iterations;
  d["residual"] = r.residual;
  d["converged"] = r.converged;
  return d;
}

renyi::SolverConfig config_with_seed(std::uint64_t seed) {
  renyi::SolverConfig c;
  if (seed != 0) c.seed = seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sandwiched Renyi entropies, continuity bounds, and verification campaigns";

  py::register_exception<renyi::ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def(
      "conditional_entropy",
      [](const renyi::Matrix& rho, int d_a, int d_b, double alpha, std::uint64_t seed) {
        return result_dict(renyi::conditional_entropy_up(make_state(rho, d_a, d_b),
                                                         make_order(alpha),
                                                         config_with_seed(seed)));
      },
      py::arg("rho"), py::arg("d_a"), py::arg("d_b"), py::arg("alpha"), py::arg("seed") = 0,
      "H_a^up(A|B) of a density matrix with composite index a * d_B + b");

  m.def(
      "hmin",
      [](const renyi::Matrix& rho, int d_a, int d_b) {
        return result_dict(renyi::hmin(make_state(rho, d_a, d_b)));
      },
      py::arg("rho"), py::arg("d_a"), py::arg("d_b"),
      "min-entropy via the semidefinite program");

  m.def(
      "hmax",
      [](const renyi::Matrix& rho, int d_a, int d_b) {
        return result_dict(renyi::hmax(make_state(rho, d_a, d_b)));
      },
      py::arg("rho"), py::arg("d_a"), py::arg("d_b"));

  m.def(
      "von_neumann_conditional",
      [](const renyi::Matrix& rho, int d_a, int d_b) {
        return renyi::von_neumann_conditional(make_state(rho, d_a, d_b));
      },
      py::arg("rho"), py::arg("d_a"), py::arg("d_b"));

  m.def(
      "renyi_entropy",
      [](const renyi::Matrix& rho, double alpha) {
        return renyi::renyi_entropy(renyi::DensityOperator(renyi::Matrix(rho)),
                                    make_order(alpha));
      },
      py::arg("rho"), py::arg("alpha"), "unconditional Renyi entropy");

  m.def(
      "sandwiched_divergence",
      [](const renyi::Matrix& p, const renyi::Matrix& q, double alpha) {
        return renyi::sandwiched_divergence(renyi::PsdOperator(renyi::Matrix(p)),
                                            renyi::PsdOperator(renyi::Matrix(q)),
                                            make_order(alpha));
      },
      py::arg("p"), py::arg("q"), py::arg("alpha"));

  m.def(
      "trace_distance",
      [](const renyi::Matrix& a, const renyi::Matrix& b) {
        return renyi::trace_distance(renyi::HermitianOperator(renyi::Matrix(a)),
                                     renyi::HermitianOperator(renyi::Matrix(b)));
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "fidelity",
      [](const renyi::Matrix& a, const renyi::Matrix& b) {
        return renyi::fidelity(renyi::PsdOperator(renyi::Matrix(a)),
                               renyi::PsdOperator(renyi::Matrix(b)));
      },
      py::arg("a"), py::arg("b"));

  m.def("dual_order", [](double alpha) {
    const renyi::RenyiOrder beta = make_order(alpha).dual();
    return beta.is_infinite() ? std::numeric_limits<double>::infinity() : beta.value();
  });

  m.def(
      "duality_residual",
      [](const renyi::Matrix& rho, int d_a, int d_b, double alpha, std::uint64_t seed) {
        const renyi::DualityReport r = renyi::duality_check(
            make_state(rho, d_a, d_b), make_order(alpha), config_with_seed(seed));
        py::dict d;
        d["alpha"] = r.alpha;
        d["beta"] = r.beta;
        d["h_ab"] = r.h_ab;
        d["h_ac"] = r.h_ac;
        d["residual"] = r.residual;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("rho"), py::arg("d_a"), py::arg("d_b"), py::arg("alpha"), py::arg("seed") = 0);

  m.def(
      "sample_state",
      [](int d_a, int d_b, const std::string& ensemble, std::uint64_t seed, int rank) {
        return renyi::sample_random_state(d_a, d_b, renyi::ensemble_from_string(ensemble),
                                          seed, rank)
            .matrix();
      },
      py::arg("d_a"), py::arg("d_b"), py::arg("ensemble") = "hilbert-schmidt",
      py::arg("seed") = 1, py::arg("rank") = 0);

  m.def(
      "perturb",
      [](const renyi::Matrix& rho, int d_a, int d_b, double epsilon, const std::string& mode,
         std::uint64_t seed) {
        const bool classical = mode == "classical-only";
        renyi::PerturbResult r = renyi::perturb_within(
            make_state(rho, d_a, d_b, classical, classical),
            {epsilon, renyi::perturbation_mode_from_string(mode), seed});
        return py::make_tuple(r.sigma.matrix(), r.realized_distance);
      },
      py::arg("rho"), py::arg("d_a"), py::arg("d_b"), py::arg("epsilon"),
      py::arg("mode") = "mixing", py::arg("seed") = 1);

  m.def("max_entangled", [](int d) { return renyi::max_entangled(d).matrix(); });

  m.def("cq_state", [](const Eigen::MatrixXd& table) {
    return renyi::make_cq_state(table).matrix();
  });

  m.def("classical_conditional_renyi", [](const Eigen::MatrixXd& table, double alpha) {
    return renyi::classical_conditional_renyi(table, make_order(alpha));
  });

  // bounds
  m.def("binary_entropy", &renyi::bounds::binary_entropy);
  m.def("afw_von_neumann", &renyi::bounds::afw_von_neumann);
  m.def("afw_limit_expression", &renyi::bounds::afw_limit_expression);
  m.def("bound_low", &renyi::bounds::bound_low);
  m.def("bound_low_classical", &renyi::bounds::bound_low_classical);
  m.def("bound_high", [](double eps, int d_a, double alpha) {
    return renyi::bounds::bound_high(eps, d_a, make_order(alpha));
  });
  m.def("bound_hmin", &renyi::bounds::bound_hmin);
  m.def("bound_jabbour_datta", &renyi::bounds::bound_jabbour_datta);
  m.def("leditzky_gap", &renyi::bounds::leditzky_gap);

  m.def(
      "run_campaign_kw",
      [](std::vector<std::pair<int, int>> dims, std::vector<double> orders,
         std::vector<double> epsilons, int samples_per_cell, const std::string& ensemble,
         const std::string& mode, std::uint64_t seed, std::vector<std::string> checks,
         double violation_tolerance, int jobs, bool classical) {
        renyi::harness::CampaignConfig cfg;
        if (!dims.empty()) cfg.dims = std::move(dims);
        if (!orders.empty()) {
          cfg.orders.clear();
          for (double a : orders) cfg.orders.push_back(make_order(a));
        }
        if (!epsilons.empty()) cfg.epsilons = std::move(epsilons);
        if (samples_per_cell > 0) cfg.samples_per_cell = samples_per_cell;
        cfg.ensemble = renyi::ensemble_from_string(ensemble);
        cfg.perturbation = renyi::perturbation_mode_from_string(mode);
        cfg.seed = seed;
        if (!checks.empty()) {
          cfg.checks.clear();
          for (const auto& c : checks) cfg.checks.insert(renyi::harness::check_from_string(c));
        }
        cfg.violation_tolerance = violation_tolerance;
        cfg.jobs = jobs;
        renyi::harness::CampaignReport report =
            classical ? renyi::harness::run_classical_campaign(cfg)
                      : renyi::harness::run_campaign(cfg);
        std::ostringstream out;
        renyi::harness::write_report_json(report, out);
        return out.str();
      },
      py::arg("dims") = std::vector<std::pair<int, int>>{},
      py::arg("orders") = std::vector<double>{}, py::arg("epsilons") = std::vector<double>{},
      py::arg("samples_per_cell") = 0, py::arg("ensemble") = "hilbert-schmidt",
      py::arg("mode") = "mixing", py::arg("seed") = 20240901,
      py::arg("checks") = std::vector<std::string>{}, py::arg("violation_tolerance") = 1e-6,
      py::arg("jobs") = 1, py::arg("classical") = false);
}
