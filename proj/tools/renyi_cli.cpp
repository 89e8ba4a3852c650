// renyi: compute sandwiched Renyi entropies, evaluate continuity bounds, and
// run randomized verification campaigns over the documented JSON formats.
//
// Exit codes: 0 success, 1 input error, 2 solver-uncertain, 3 verified violation.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "renyi/bounds.hpp"
#include "renyi/harness.hpp"
#include "renyi/renyi_entropy.hpp"
#include "renyi/state_model.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUncertain = 2;
constexpr int kExitViolation = 3;

constexpr const char* kAlphaSet = "[1/2, 1) u (1, inf]";

// entropy values carry 12 significant digits
double sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::atof(buf);
}

json num(double v) {
  if (std::isfinite(v)) return sig12(v);
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

renyi::RenyiOrder parse_alpha_or_exit(const std::string& text) {
  if (text == "1") {
    std::cerr << "error: alpha = 1 is excluded; the valid set is " << kAlphaSet << "\n";
    std::exit(kExitInput);
  }
  auto parsed = [&]() -> std::optional<renyi::RenyiOrder> {
    try {
      return renyi::RenyiOrder::parse(text);
    } catch (const renyi::ValidationError& e) {
      std::cerr << "error: " << e.what() << "; the valid set is " << kAlphaSet << "\n";
      std::exit(kExitInput);
    }
  }();
  if (!parsed) {
    std::cerr << "error: cannot parse alpha '" << text << "'; the valid set is " << kAlphaSet
              << "\n";
    std::exit(kExitInput);
  }
  return *parsed;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RENYI_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 20240901;
}

json matrix_json(const renyi::Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int cmd_compute(const std::string& state_path, const std::string& alpha_text,
                const std::string& entropy, const std::string& solver_name,
                bool with_optimizer, std::uint64_t seed) {
  renyi::BipartiteState state = renyi::load_state(state_path);
  renyi::SolverConfig config;
  config.seed = seed;
  if (solver_name == "fixed-point") {
    config.use_direct_search = false;
  } else if (solver_name == "direct-search") {
    config.use_fixed_point = false;
  } else if (solver_name == "grid") {
    config.use_grid = true;
    config.use_fixed_point = false;
    config.use_direct_search = false;
  } else if (solver_name == "all") {
    config.always_direct_search = true;
    config.use_grid = state.d_b() == 2;
  } else if (solver_name != "auto") {
    std::cerr << "error: unknown solver '" << solver_name << "'\n";
    return kExitInput;
  }

  json out;
  if (entropy == "vn") {
    out["value"] = num(renyi::von_neumann_conditional(state));
    out["solver"] = "closed-form";
    out["residual"] = 0.0;
    out["converged"] = true;
    std::cout << out.dump() << "\n";
    return kExitOk;
  }

  renyi::EntropyResult result = [&] {
    if (entropy == "hmin") return renyi::hmin(state);
    if (entropy == "hmax") return renyi::hmax(state, config);
    if (entropy == "sandwich") {
      if (alpha_text.empty()) {
        std::cerr << "error: --alpha is required for --entropy sandwich\n";
        std::exit(kExitInput);
      }
      if (solver_name == "grid") {
        if (state.d_b() != 2) {
          std::cerr << "error: the grid solver requires d_B == 2\n";
          std::exit(kExitInput);
        }
        return renyi::solve_bloch_grid(state, parse_alpha_or_exit(alpha_text),
                                       config.grid_resolution);
      }
      return renyi::conditional_entropy_up(state, parse_alpha_or_exit(alpha_text), config);
    }
    std::cerr << "error: unknown entropy '" << entropy << "'\n";
    std::exit(kExitInput);
  }();

  out["value"] = num(result.value);
  out["solver"] = renyi::to_string(result.solver);
  out["iterations"] = result.iterations;
  out["residual"] = num(result.residual);
  out["converged"] = result.converged;
  if (with_optimizer) out["optimizer"] = matrix_json(result.optimizer.matrix());
  std::cout << out.dump() << "\n";
  return result.converged ? kExitOk : kExitUncertain;
}

int cmd_bound(const std::string& which, double eps, int d_a, const std::string& alpha_text,
              double fid) {
  json out;
  out["which"] = which;
  json inputs;
  inputs["eps"] = eps;
  inputs["d_A"] = d_a;
  double value = 0.0;
  if (which == "thm1" || which == "thm1cl" || which == "jd") {
    if (alpha_text.empty()) {
      std::cerr << "error: --which " << which << " requires --alpha in [1/2, 1)\n";
      return kExitInput;
    }
    const renyi::RenyiOrder a = parse_alpha_or_exit(alpha_text);
    if (a.is_infinite() || a.value() >= 1.0) {
      std::cerr << "error: --which " << which << " requires alpha in [1/2, 1)\n";
      return kExitInput;
    }
    inputs["alpha"] = a.value();
    if (which == "thm1") value = renyi::bounds::bound_low(eps, d_a, a.value());
    if (which == "thm1cl") value = renyi::bounds::bound_low_classical(eps, d_a, a.value());
    if (which == "jd") value = renyi::bounds::bound_jabbour_datta(eps, d_a, a.value());
  } else if (which == "cor1") {
    if (alpha_text.empty()) {
      std::cerr << "error: --which cor1 requires --alpha in (1, inf]\n";
      return kExitInput;
    }
    const renyi::RenyiOrder a = parse_alpha_or_exit(alpha_text);
    if (!a.is_infinite() && a.value() <= 1.0) {
      std::cerr << "error: --which cor1 requires alpha in (1, inf]\n";
      return kExitInput;
    }
    inputs["alpha"] = a.is_infinite() ? json("inf") : json(a.value());
    value = renyi::bounds::bound_high(eps, d_a, a);
    if (renyi::bounds::bound_high_at_boundary(eps)) {
      out["boundary"] = true;
      std::cerr << "warning: sqrt(2 eps) >= 1; the substituted argument leaves the proven "
                   "epsilon range and the formula is evaluated as written\n";
    }
  } else if (which == "thm3") {
    value = renyi::bounds::bound_hmin(eps, d_a);
  } else if (which == "afw") {
    value = renyi::bounds::afw_von_neumann(eps, d_a);
  } else if (which == "leditzky") {
    if (alpha_text.empty() || fid < 0.0) {
      std::cerr << "error: --which leditzky requires --alpha in [1/2, 1) and --fidelity\n";
      return kExitInput;
    }
    const renyi::RenyiOrder a = parse_alpha_or_exit(alpha_text);
    if (a.is_infinite() || a.value() >= 1.0) {
      std::cerr << "error: --which leditzky requires alpha in [1/2, 1)\n";
      return kExitInput;
    }
    inputs["alpha"] = a.value();
    inputs["fidelity"] = fid;
    value = renyi::bounds::leditzky_gap(fid, a.value());
  } else {
    std::cerr << "error: unknown bound '" << which
              << "' (expected thm1|thm1cl|cor1|thm3|afw|jd|leditzky)\n";
    return kExitInput;
  }
  out["inputs"] = inputs;
  out["value"] = num(value);
  std::cout << out.dump() << "\n";
  return kExitOk;
}

void apply_config_json(const json& j, renyi::harness::CampaignConfig& cfg) {
  if (j.contains("dims")) {
    cfg.dims.clear();
    for (const auto& d : j.at("dims")) {
      cfg.dims.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
    }
  }
  if (j.contains("orders")) {
    cfg.orders.clear();
    for (const auto& o : j.at("orders")) {
      if (o.is_string()) {
        auto parsed = renyi::RenyiOrder::parse(o.get<std::string>());
        if (!parsed) throw renyi::ValidationError("config: bad order " + o.dump());
        cfg.orders.push_back(*parsed);
      } else {
        cfg.orders.push_back(renyi::RenyiOrder(o.get<double>()));
      }
    }
  }
  if (j.contains("epsilons")) cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
  if (j.contains("samples_per_cell")) cfg.samples_per_cell = j.at("samples_per_cell").get<int>();
  if (j.contains("ensemble")) cfg.ensemble = renyi::ensemble_from_string(j.at("ensemble"));
  if (j.contains("perturbation")) {
    cfg.perturbation = renyi::perturbation_mode_from_string(j.at("perturbation"));
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("checks")) {
    cfg.checks.clear();
    for (const auto& c : j.at("checks")) {
      cfg.checks.insert(renyi::harness::check_from_string(c.get<std::string>()));
    }
  }
  if (j.contains("violation_tolerance")) {
    cfg.violation_tolerance = j.at("violation_tolerance").get<double>();
  }
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  if (cfg.samples_per_cell < 1) {
    throw renyi::ValidationError("config: samples_per_cell must be >= 1");
  }
}

int cmd_verify(const std::string& config_path, const std::string& checks_csv,
               const std::string& out_json, const std::string& out_csv, int samples,
               int jobs, std::uint64_t seed, bool seed_given, bool classical) {
  renyi::harness::CampaignConfig cfg;
  cfg.seed = default_seed();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return kExitInput;
    }
    apply_config_json(json::parse(in), cfg);
  }
  if (!checks_csv.empty()) {
    cfg.checks.clear();
    std::stringstream ss(checks_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      cfg.checks.insert(renyi::harness::check_from_string(item));
    }
  }
  if (samples > 0) cfg.samples_per_cell = samples;
  if (jobs > 0) cfg.jobs = jobs;
  if (seed_given) cfg.seed = seed;
  if (classical) cfg.perturbation = renyi::PerturbationMode::ClassicalOnly;

  renyi::harness::CampaignReport report =
      classical ? renyi::harness::run_classical_campaign(cfg)
                : renyi::harness::run_campaign(cfg);

  if (!out_json.empty()) {
    std::ofstream out(out_json);
    renyi::harness::write_report_json(report, out, timestamp_now());
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    renyi::harness::write_report_csv(report, out);
  }

  json summary;
  summary["schema"] = report.schema;
  summary["records"] = report.records.size();
  summary["violations"] = report.violations;
  summary["uncertain"] = report.uncertain;
  summary["uncertain_rate"] = report.uncertain_rate;
  summary["failed"] = report.failed;
  json cells = json::array();
  for (const auto& c : report.cells) {
    json cj;
    cj["check"] = renyi::harness::to_string(c.check);
    cj["d_A"] = c.d_a;
    cj["d_B"] = c.d_b;
    cj["order"] = std::isinf(c.order) ? json("inf") : json(c.order);
    cj["eps"] = c.requested_eps;
    cj["min_margin"] = num(c.min_margin);
    cj["violations"] = c.violations;
    cj["uncertain"] = c.uncertain;
    if (!c.note.empty()) cj["note"] = c.note;
    cells.push_back(std::move(cj));
  }
  summary["cells"] = cells;
  std::cout << summary.dump(2) << "\n";

  if (report.violations > 0) return kExitViolation;
  if (report.uncertain_rate > cfg.uncertain_cap) return kExitUncertain;
  return kExitOk;
}

int cmd_duality(const std::string& state_path, const std::string& alpha_text,
                std::uint64_t seed) {
  renyi::BipartiteState state = renyi::load_state(state_path);
  renyi::SolverConfig config;
  config.seed = seed;
  const renyi::RenyiOrder alpha = parse_alpha_or_exit(alpha_text);
  renyi::DualityReport report = renyi::duality_check(state, alpha, config);
  json out;
  out["alpha"] = std::isinf(report.alpha) ? json("inf") : json(report.alpha);
  out["beta"] = std::isinf(report.beta) ? json("inf") : json(report.beta);
  out["h_ab"] = num(report.h_ab);
  out["h_ac"] = num(report.h_ac);
  out["residual"] = num(report.residual);
  out["converged"] = report.converged;
  std::cout << out.dump() << "\n";
  return report.converged ? kExitOk : kExitUncertain;
}

int cmd_probe(int d_a, int d_b, const std::string& alpha_text, double eps, int restarts,
              std::uint64_t seed) {
  const renyi::RenyiOrder alpha = parse_alpha_or_exit(alpha_text);
  renyi::harness::SampleRecord rec =
      renyi::harness::run_extremal_probe(d_a, d_b, alpha, eps, restarts, seed);
  json out;
  out["d_A"] = rec.d_a;
  out["d_B"] = rec.d_b;
  out["order"] = std::isinf(rec.order) ? json("inf") : json(rec.order);
  out["eps"] = rec.requested_eps;
  out["ratio"] = num(rec.aux);
  out["h_rho"] = num(rec.h_rho);
  out["bound"] = num(rec.bound);
  out["seed"] = rec.seed;
  out["variant"] = rec.variant;
  std::cout << out.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sandwiched Renyi conditional entropies, continuity bounds, and\n"
      "randomized verification campaigns on finite-dimensional states"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  auto* seed_opt = app.add_option("--seed", seed, "global seed (overrides RENYI_SEED)");

  // compute
  auto* compute = app.add_subcommand("compute", "compute an entropy of a state file");
  compute->fallthrough();
  std::string state_path, alpha_text, entropy = "sandwich", solver = "auto";
  bool with_optimizer = false;
  compute->add_option("--state", state_path, "state JSON file")->required();
  compute->add_option("--alpha", alpha_text, "Renyi order in [1/2, 1) u (1, inf]; 'inf' allowed");
  compute->add_option("--entropy", entropy, "hmin|hmax|sandwich|vn (default sandwich)");
  compute->add_option("--solver", solver, "auto|fixed-point|direct-search|grid|all");
  compute->add_flag("--optimizer", with_optimizer, "include the optimizing eta_B in the output");

  // bound
  auto* bound = app.add_subcommand("bound", "evaluate a continuity-bound formula");
  bound->fallthrough();
  std::string which, bound_alpha;
  double eps = 0.0, fid = -1.0;
  int d_a = 2;
  bound->add_option("--which", which,
                    "thm1: order<1 continuity bound; thm1cl: classical strengthening; "
                    "cor1: order>1 bound via sqrt(2 eps) substitution; thm3: min-entropy "
                    "bound log2(1+eps d_A^2); afw: von Neumann bound; jd: classical "
                    "comparison bound; leditzky: fidelity gap")
      ->required();
  bound->add_option("--eps", eps, "trace distance in [0, 1]")->required();
  bound->add_option("--dA", d_a, "dimension of system A")->required();
  bound->add_option("--alpha", bound_alpha, "Renyi order where applicable");
  bound->add_option("--fidelity", fid, "fidelity in [0, 1] (leditzky)");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification campaign");
  verify->fallthrough();
  std::string config_path, checks_csv, out_json = "report.json", out_csv = "report.csv";
  int samples = 0, jobs = 0;
  bool classical = false;
  verify->add_option("--config", config_path, "campaign config JSON");
  verify->add_option("--check", checks_csv, "comma-separated subset of checks");
  verify->add_option("--samples", samples, "samples per cell override");
  verify->add_option("--jobs", jobs, "parallel cells (default 1)");
  verify->add_option("--out-json", out_json, "full report path");
  verify->add_option("--out-csv", out_csv, "CSV report path");
  verify->add_flag("--classical", classical, "classical-only campaign on cq states");

  // duality
  auto* duality = app.add_subcommand("duality", "duality residual of a state");
  duality->fallthrough();
  std::string d_state, d_alpha;
  duality->add_option("--state", d_state, "state JSON file")->required();
  duality->add_option("--alpha", d_alpha, "Renyi order")->required();

  // probe
  auto* probe = app.add_subcommand("probe", "search for extremal bound ratios");
  probe->fallthrough();
  int p_da = 2, p_db = 2, restarts = 5;
  std::string p_alpha = "0.9";
  double p_eps = 0.1;
  probe->add_option("--dA", p_da, "dimension of A");
  probe->add_option("--dB", p_db, "dimension of B");
  probe->add_option("--alpha", p_alpha, "Renyi order");
  probe->add_option("--eps", p_eps, "trace-distance budget");
  probe->add_option("--restarts", restarts, "search restarts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) {
      return cmd_compute(state_path, alpha_text, entropy, solver, with_optimizer, seed);
    }
    if (bound->parsed()) {
      return cmd_bound(which, eps, d_a, bound_alpha, fid);
    }
    if (verify->parsed()) {
      return cmd_verify(config_path, checks_csv, out_json, out_csv, samples, jobs, seed,
                        seed_opt->count() > 0, classical);
    }
    if (duality->parsed()) {
      return cmd_duality(d_state, d_alpha, seed);
    }
    if (probe->parsed()) {
      return cmd_probe(p_da, p_db, p_alpha, p_eps, restarts, seed);
    }
  } catch (const renyi::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const renyi::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUncertain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
