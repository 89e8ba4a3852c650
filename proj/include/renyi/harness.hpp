#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "renyi/bounds.hpp"
#include "renyi/renyi_entropy.hpp"
#include "renyi/state_model.hpp"

namespace renyi::harness {

enum class CheckKind {
  Thm1,           // continuity bound, orders below one
  Thm1Classical,  // strengthened classical bound on cq states
  Cor1,           // continuity bound, orders above one
  Thm3Hmin,       // min-entropy continuity bound
  Duality,        // H_a(A|B) + H_b(A|C) residual on purifications
  Dpi,            // data-processing of the relative entropy
  McCarthy,       // trace-power subadditivity
  JabbourCompare, // classical comparison bound on cq states
  Leditzky        // fidelity gap inequality
};

CheckKind check_from_string(const std::string& name);
std::string to_string(CheckKind kind);
const std::set<CheckKind>& all_checks();

struct CampaignConfig {
  std::vector<std::pair<int, int>> dims = {{2, 2}, {2, 3}, {3, 2}, {2, 4}};
  // orders below one feed Thm1-style checks, above one Cor1; campaigns pick
  // the applicable subset per check
  std::vector<RenyiOrder> orders = default_orders();
  std::vector<double> epsilons = {0.01, 0.05, 0.1, 0.25, 0.5, 0.9};
  int samples_per_cell = 200;
  Ensemble ensemble = Ensemble::HilbertSchmidt;
  PerturbationMode perturbation = PerturbationMode::Mixing;
  std::uint64_t seed = 20240901;
  std::set<CheckKind> checks = all_checks();
  double violation_tolerance = 1e-6;  // for the bound checks
  double duality_tolerance = 1e-4;
  double uncertain_cap = 0.02;        // campaign fails above this rate
  int jobs = 1;
  SolverConfig solver;

  static std::vector<RenyiOrder> default_orders();
};

enum class RecordStatus { Pass, Violation, SolverUncertain };

std::string to_string(RecordStatus s);

struct SampleRecord {
  CheckKind check;
  int cell_index = 0;
  int sample_index = 0;
  std::uint64_t seed = 0;
  int d_a = 0;
  int d_b = 0;
  double order = 0.0;  // +inf for the infinite order; alpha in [0,1] for McCarthy
  double requested_eps = 0.0;
  double realized_eps = 0.0;
  double h_rho = 0.0;
  double h_sigma = 0.0;
  bool conv_rho = true;
  bool conv_sigma = true;
  double bound = 0.0;
  double margin = 0.0;  // bound - |h_sigma - h_rho| (check-specific otherwise)
  double aux = 0.0;     // residual / fidelity / secondary bound, per check
  std::string variant;  // channel name for DPI, notes otherwise
  RecordStatus status = RecordStatus::Pass;
};

struct CellSummary {
  CheckKind check;
  int cell_index = 0;
  int d_a = 0;
  int d_b = 0;
  double order = 0.0;
  double requested_eps = 0.0;
  int samples = 0;
  int violations = 0;
  int uncertain = 0;
  double min_margin = 0.0;
  std::string note;
};

struct CampaignReport {
  int schema = 1;
  CampaignConfig config;
  std::vector<SampleRecord> records;
  std::vector<CellSummary> cells;
  int violations = 0;
  int uncertain = 0;
  double uncertain_rate = 0.0;
  double min_margin = 0.0;
  bool failed = false;  // any violation, or uncertain rate above the cap
};

// One record per (cell, sample); deterministic per config.seed regardless of
// jobs. Solver failures downgrade records to solver-uncertain.
CampaignReport run_campaign(const CampaignConfig& config);

// cq states with classical-only perturbations; entropies via the classical
// closed form. Runs the Thm1Classical and JabbourCompare checks and reports
// per cell which of the two bounds was tighter.
CampaignReport run_classical_campaign(const CampaignConfig& config);

// Locally maximizes |H_sigma - H_rho| / bound over perturbation directions;
// reporting-only. epsilon = 0 returns a sentinel record with aux = NaN.
SampleRecord run_extremal_probe(int d_a, int d_b, const RenyiOrder& order, double epsilon,
                                int restarts, std::uint64_t seed,
                                const SolverConfig& solver = {});

void write_report_json(const CampaignReport& report, std::ostream& out,
                       const std::string& timestamp = "");
void write_report_csv(const CampaignReport& report, std::ostream& out);

}  // namespace renyi::harness
