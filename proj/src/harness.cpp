#include "renyi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace renyi::harness {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMcCarthyTol = 1e-8;
constexpr double kDpiTol = 1e-7;
}  // namespace

CheckKind check_from_string(const std::string& name) {
  if (name == "thm1") return CheckKind::Thm1;
  if (name == "thm1-classical") return CheckKind::Thm1Classical;
  if (name == "cor1") return CheckKind::Cor1;
  if (name == "thm3-hmin") return CheckKind::Thm3Hmin;
  if (name == "duality") return CheckKind::Duality;
  if (name == "dpi") return CheckKind::Dpi;
  if (name == "mccarthy") return CheckKind::McCarthy;
  if (name == "jabbour-compare") return CheckKind::JabbourCompare;
  if (name == "leditzky") return CheckKind::Leditzky;
  throw ValidationError("unknown check: " + name);
}

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::Thm1: return "thm1";
    case CheckKind::Thm1Classical: return "thm1-classical";
    case CheckKind::Cor1: return "cor1";
    case CheckKind::Thm3Hmin: return "thm3-hmin";
    case CheckKind::Duality: return "duality";
    case CheckKind::Dpi: return "dpi";
    case CheckKind::McCarthy: return "mccarthy";
    case CheckKind::JabbourCompare: return "jabbour-compare";
    case CheckKind::Leditzky: return "leditzky";
  }
  return "?";
}

const std::set<CheckKind>& all_checks() {
  static const std::set<CheckKind> checks = {
      CheckKind::Thm1,     CheckKind::Thm1Classical, CheckKind::Cor1,
      CheckKind::Thm3Hmin, CheckKind::Duality,       CheckKind::Dpi,
      CheckKind::McCarthy, CheckKind::JabbourCompare, CheckKind::Leditzky};
  return checks;
}

std::string to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::Pass: return "pass";
    case RecordStatus::Violation: return "violation";
    case RecordStatus::SolverUncertain: return "solver-uncertain";
  }
  return "?";
}

std::vector<RenyiOrder> CampaignConfig::default_orders() {
  return {RenyiOrder(0.5),  RenyiOrder(0.6), RenyiOrder(0.75), RenyiOrder(0.9),
          RenyiOrder(0.99), RenyiOrder(1.01), RenyiOrder(1.5), RenyiOrder(2.0),
          RenyiOrder(5.0),  RenyiOrder::infinity()};
}

namespace {

struct Cell {
  CheckKind check;
  int d_a = 0;
  int d_b = 0;
  double order = 0.0;  // +inf allowed; plain alpha for McCarthy
  double epsilon = 0.0;
  int variant = 0;  // channel index for DPI
};

bool order_below_one(const RenyiOrder& o) { return !o.is_infinite() && o.value() < 1.0; }
bool order_above_one(const RenyiOrder& o) { return o.is_infinite() || o.value() > 1.0; }

std::vector<Cell> expand_cells(const CampaignConfig& cfg) {
  std::vector<Cell> cells;
  auto dims_orders_eps = [&](CheckKind kind, auto order_filter) {
    for (const auto& [da, db] : cfg.dims) {
      for (const auto& o : cfg.orders) {
        if (!order_filter(o)) continue;
        for (double e : cfg.epsilons) {
          cells.push_back({kind, da, db, o.is_infinite() ? kInf : o.value(), e, 0});
        }
      }
    }
  };
  for (CheckKind kind : cfg.checks) {
    switch (kind) {
      case CheckKind::Thm1:
        dims_orders_eps(kind, order_below_one);
        break;
      case CheckKind::Thm1Classical:
      case CheckKind::JabbourCompare:
        dims_orders_eps(kind, order_below_one);
        break;
      case CheckKind::Cor1:
        dims_orders_eps(kind, order_above_one);
        break;
      case CheckKind::Thm3Hmin:
        for (const auto& [da, db] : cfg.dims) {
          for (double e : cfg.epsilons) cells.push_back({kind, da, db, kInf, e, 0});
        }
        break;
      case CheckKind::Duality:
        for (const auto& [da, db] : cfg.dims) {
          for (const auto& o : cfg.orders) {
            cells.push_back({kind, da, db, o.is_infinite() ? kInf : o.value(), 0.0, 0});
          }
        }
        break;
      case CheckKind::Dpi:
        for (const auto& [da, db] : cfg.dims) {
          for (const auto& o : cfg.orders) {
            if (o.is_infinite()) continue;
            for (int channel = 0; channel < 4; ++channel) {
              cells.push_back({kind, da, db, o.value(), 0.0, channel});
            }
          }
        }
        break;
      case CheckKind::McCarthy:
        for (int dim = 2; dim <= 6; ++dim) {
          for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            cells.push_back({kind, dim, 1, a, 0.0, 0});
          }
        }
        break;
      case CheckKind::Leditzky:
        dims_orders_eps(kind, order_below_one);
        break;
    }
  }
  return cells;
}

RenyiOrder order_of(const Cell& cell) {
  return std::isinf(cell.order) ? RenyiOrder::infinity() : RenyiOrder(cell.order);
}

EntropyResult entropy_for(const BipartiteState& state, const RenyiOrder& order,
                          const SolverConfig& solver) {
  return conditional_entropy_up(state, order, solver);
}

void finalize_status(SampleRecord& rec, double tolerance) {
  if (!rec.conv_rho || !rec.conv_sigma) {
    rec.status = RecordStatus::SolverUncertain;
  } else if (rec.margin < -tolerance) {
    rec.status = RecordStatus::Violation;
  } else {
    rec.status = RecordStatus::Pass;
  }
}

// quantum bound checks: thm1, cor1, thm3-hmin
SampleRecord run_bound_sample(const CampaignConfig& cfg, const Cell& cell,
                              std::uint64_t seed) {
  SampleRecord rec;
  rec.check = cell.check;
  rec.seed = seed;
  rec.d_a = cell.d_a;
  rec.d_b = cell.d_b;
  rec.order = cell.order;
  rec.requested_eps = cell.epsilon;

  BipartiteState rho = sample_random_state(cell.d_a, cell.d_b, cfg.ensemble, seed);
  PerturbationSpec spec{cell.epsilon, cfg.perturbation, SplitMix64::derive(seed, 1)};
  PerturbResult pert = perturb_within(rho, spec);
  rec.realized_eps = pert.realized_distance;

  const RenyiOrder order = order_of(cell);
  EntropyResult h_rho = entropy_for(rho, order, cfg.solver);
  EntropyResult h_sigma = entropy_for(pert.sigma, order, cfg.solver);
  rec.h_rho = h_rho.value;
  rec.h_sigma = h_sigma.value;
  rec.conv_rho = h_rho.converged;
  rec.conv_sigma = h_sigma.converged;

  // bounds are evaluated at the realized distance (they increase in epsilon)
  switch (cell.check) {
    case CheckKind::Thm1:
      rec.bound = bounds::bound_low(rec.realized_eps, cell.d_a, order.value());
      break;
    case CheckKind::Cor1:
      rec.bound = bounds::bound_high(rec.realized_eps, cell.d_a, order);
      break;
    case CheckKind::Thm3Hmin:
      rec.bound = bounds::bound_hmin(rec.realized_eps, cell.d_a);
      rec.aux = std::max(h_rho.residual, h_sigma.residual);  // SDP feasibility
      break;
    default:
      break;
  }
  rec.margin = rec.bound - std::abs(rec.h_sigma - rec.h_rho);
  finalize_status(rec, cfg.violation_tolerance);
  return rec;
}

SampleRecord run_classical_sample(const CampaignConfig& cfg, const Cell& cell,
                                  std::uint64_t seed) {
  SampleRecord rec;
  rec.check = cell.check;
  rec.seed = seed;
  rec.d_a = cell.d_a;
  rec.d_b = cell.d_b;
  rec.order = cell.order;
  rec.requested_eps = cell.epsilon;

  SplitMix64 rng(seed);
  Eigen::MatrixXd table = random_probability_table(cell.d_a, cell.d_b, rng);
  BipartiteState rho = make_cq_state(table);
  PerturbationSpec spec{cell.epsilon, PerturbationMode::ClassicalOnly,
                        SplitMix64::derive(seed, 1)};
  PerturbResult pert = perturb_within(rho, spec);
  rec.realized_eps = pert.realized_distance;

  const RenyiOrder order = order_of(cell);
  rec.h_rho = classical_conditional_renyi(table, order);
  rec.h_sigma = classical_conditional_renyi(pert.sigma.diagonal_table(), order);

  const double thm1cl = bounds::bound_low_classical(rec.realized_eps, cell.d_a, order.value());
  const double jd = bounds::bound_jabbour_datta(rec.realized_eps, cell.d_a, order.value());
  if (cell.check == CheckKind::Thm1Classical) {
    rec.bound = thm1cl;
    rec.aux = jd;
  } else {
    rec.bound = jd;
    rec.aux = thm1cl;
  }
  rec.margin = rec.bound - std::abs(rec.h_sigma - rec.h_rho);
  // The comparison formula peaks at eps = 1 - 1/d_A, where it reaches the
  // classical diameter log2(d_A), and decreases beyond; past the peak it is
  // no longer a bound, so those records are flagged instead of enforced.
  const bool comparison_only = cell.check == CheckKind::JabbourCompare &&
                               rec.realized_eps > 1.0 - 1.0 / cell.d_a + 1e-12;
  if (comparison_only) {
    rec.variant = "beyond-peak";
    rec.status = RecordStatus::Pass;
  } else {
    finalize_status(rec, cfg.violation_tolerance);
  }
  return rec;
}

SampleRecord run_duality_sample(const CampaignConfig& cfg, const Cell& cell,
                                std::uint64_t seed) {
  SampleRecord rec;
  rec.check = cell.check;
  rec.seed = seed;
  rec.d_a = cell.d_a;
  rec.d_b = cell.d_b;
  rec.order = cell.order;

  BipartiteState rho = sample_random_state(cell.d_a, cell.d_b, cfg.ensemble, seed);
  DualityReport report = duality_check(rho, order_of(cell), cfg.solver);
  rec.h_rho = report.h_ab;
  rec.h_sigma = report.h_ac;
  rec.conv_rho = report.converged;
  rec.conv_sigma = report.converged;
  rec.aux = report.residual;
  rec.bound = cfg.duality_tolerance;
  rec.margin = rec.bound - report.residual;
  finalize_status(rec, 0.0);
  return rec;
}

const char* dpi_channel_name(int channel) {
  switch (channel) {
    case 0: return "partial-trace";
    case 1: return "unitary";
    case 2: return "pinching";
    case 3: return "mixing";
  }
  return "?";
}

Matrix apply_dpi_channel(int channel, const Matrix& x, int d_a, int d_b,
                         const Matrix& unitary) {
  const int d = static_cast<int>(x.rows());
  switch (channel) {
    case 0: {
      HermitianOperator h(x);
      return partial_trace(h, d_a, d_b, Subsystem::A).matrix();
    }
    case 1:
      return unitary * x * unitary.adjoint();
    case 2: {
      Matrix out = Matrix::Zero(d, d);
      for (int i = 0; i < d; ++i) out(i, i) = x(i, i);
      return out;
    }
    case 3: {
      const double p = 0.3;
      return (1.0 - p) * x + p * x.trace().real() * Matrix::Identity(d, d) / d;
    }
  }
  throw ValidationError("unknown DPI channel");
}

SampleRecord run_dpi_sample(const CampaignConfig&, const Cell& cell,
                            std::uint64_t seed) {
  SampleRecord rec;
  rec.check = cell.check;
  rec.seed = seed;
  rec.d_a = cell.d_a;
  rec.d_b = cell.d_b;
  rec.order = cell.order;
  rec.variant = dpi_channel_name(cell.variant);

  SplitMix64 rng(seed);
  // positive operators with non-unit trace exercise the tr(P) normalization
  BipartiteState p_state =
      sample_random_state(cell.d_a, cell.d_b, Ensemble::HilbertSchmidt, rng.next());
  BipartiteState q_state =
      sample_random_state(cell.d_a, cell.d_b, Ensemble::HilbertSchmidt, rng.next());
  const double scale_p = 0.5 + 1.5 * rng.uniform();
  const double scale_q = 0.5 + 1.5 * rng.uniform();
  Matrix p = scale_p * p_state.matrix();
  Matrix q = scale_q * q_state.matrix();
  Matrix u = random_unitary(cell.d_a * cell.d_b, rng);

  const RenyiOrder order = order_of(cell);
  const double before = sandwiched_divergence(PsdOperator(p), PsdOperator(q), order);
  const double after = sandwiched_divergence(
      PsdOperator(apply_dpi_channel(cell.variant, p, cell.d_a, cell.d_b, u)),
      PsdOperator(apply_dpi_channel(cell.variant, q, cell.d_a, cell.d_b, u)), order);
  rec.h_rho = before;
  rec.h_sigma = after;
  if (std::isinf(before)) {
    rec.margin = 0.0;  // nothing to check: +inf dominates everything
  } else {
    rec.margin = before - after;
  }
  rec.bound = before;
  finalize_status(rec, kDpiTol);
  return rec;
}

SampleRecord run_mccarthy_sample(const CampaignConfig&, const Cell& cell,
                                 std::uint64_t seed) {
  SampleRecord rec;
  rec.check = cell.check;
  rec.seed = seed;
  rec.d_a = cell.d_a;  // matrix dimension for this check
  rec.d_b = 1;
  rec.order = cell.order;

  SplitMix64 rng(seed);
  const int d = cell.d_a;
  auto sample_psd = [&] {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
    }
    return Matrix(g * g.adjoint() / d);
  };
  PsdOperator p(sample_psd());
  PsdOperator q(sample_psd());
  PsdOperator sum(Matrix(p.matrix() + q.matrix()));
  const double a = cell.order;
  const double lhs = trace_power(sum, a);
  const double rhs = trace_power(p, a) + trace_power(q, a);
  rec.h_rho = lhs;
  rec.h_sigma = rhs;
  rec.bound = rhs;
  rec.margin = rhs - lhs;
  finalize_status(rec, kMcCarthyTol);
  return rec;
}

SampleRecord run_leditzky_sample(const CampaignConfig& cfg, const Cell& cell,
                                 std::uint64_t seed) {
  SampleRecord rec;
  rec.check = cell.check;
  rec.seed = seed;
  rec.d_a = cell.d_a;
  rec.d_b = cell.d_b;
  rec.order = cell.order;
  rec.requested_eps = cell.epsilon;

  BipartiteState rho = sample_random_state(cell.d_a, cell.d_b, cfg.ensemble, seed);
  PerturbationSpec spec{cell.epsilon, cfg.perturbation, SplitMix64::derive(seed, 1)};
  PerturbResult pert = perturb_within(rho, spec);
  rec.realized_eps = pert.realized_distance;

  const RenyiOrder order = order_of(cell);
  const RenyiOrder beta = order.dual();
  EntropyResult h_rho = entropy_for(rho, order, cfg.solver);
  EntropyResult h_sigma = entropy_for(pert.sigma, beta, cfg.solver);
  const double fid = fidelity(rho.density().op(), pert.sigma.density().op());
  rec.h_rho = h_rho.value;
  rec.h_sigma = h_sigma.value;
  rec.conv_rho = h_rho.converged;
  rec.conv_sigma = h_sigma.converged;
  rec.aux = fid;
  rec.bound = bounds::leditzky_gap(std::min(fid, 1.0), order.value());
  rec.margin = (rec.h_rho - rec.h_sigma) - rec.bound;
  finalize_status(rec, cfg.violation_tolerance);
  return rec;
}

SampleRecord run_sample(const CampaignConfig& cfg, const Cell& cell, std::uint64_t seed) {
  try {
    switch (cell.check) {
      case CheckKind::Thm1:
      case CheckKind::Cor1:
      case CheckKind::Thm3Hmin:
        return run_bound_sample(cfg, cell, seed);
      case CheckKind::Thm1Classical:
      case CheckKind::JabbourCompare:
        return run_classical_sample(cfg, cell, seed);
      case CheckKind::Duality:
        return run_duality_sample(cfg, cell, seed);
      case CheckKind::Dpi:
        return run_dpi_sample(cfg, cell, seed);
      case CheckKind::McCarthy:
        return run_mccarthy_sample(cfg, cell, seed);
      case CheckKind::Leditzky:
        return run_leditzky_sample(cfg, cell, seed);
    }
    throw ValidationError("unknown check kind");
  } catch (const NumericalError&) {
    // solver failures downgrade the record, never crash the campaign
    SampleRecord rec;
    rec.check = cell.check;
    rec.seed = seed;
    rec.d_a = cell.d_a;
    rec.d_b = cell.d_b;
    rec.order = cell.order;
    rec.requested_eps = cell.epsilon;
    rec.conv_rho = false;
    rec.conv_sigma = false;
    rec.status = RecordStatus::SolverUncertain;
    return rec;
  }
}

CampaignReport run_cells(const CampaignConfig& cfg, const std::vector<Cell>& cells) {
  if (cells.empty() || cfg.samples_per_cell < 1 || cfg.dims.empty() ||
      cfg.orders.empty() || cfg.epsilons.empty()) {
    throw ValidationError("campaign config: dims, orders, epsilons and samples must be non-empty");
  }
  CampaignReport report;
  report.config = cfg;
  std::vector<std::vector<SampleRecord>> per_cell(cells.size());

  auto run_cell = [&](size_t ci) {
    const Cell& cell = cells[ci];
    const std::uint64_t cell_seed = SplitMix64::derive(cfg.seed, ci);
    auto& out = per_cell[ci];
    out.reserve(cfg.samples_per_cell);
    for (int s = 0; s < cfg.samples_per_cell; ++s) {
      SampleRecord rec = run_sample(cfg, cell, SplitMix64::derive(cell_seed, s));
      rec.cell_index = static_cast<int>(ci);
      rec.sample_index = s;
      out.push_back(std::move(rec));
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (size_t ci = next.fetch_add(1); ci < cells.size(); ci = next.fetch_add(1)) {
          run_cell(ci);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  report.min_margin = kInf;
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    const Cell& cell = cells[ci];
    CellSummary summary;
    summary.check = cell.check;
    summary.cell_index = static_cast<int>(ci);
    summary.d_a = cell.d_a;
    summary.d_b = cell.d_b;
    summary.order = cell.order;
    summary.requested_eps = cell.epsilon;
    summary.samples = static_cast<int>(per_cell[ci].size());
    summary.min_margin = kInf;
    if (cell.check == CheckKind::Dpi) summary.note = dpi_channel_name(cell.variant);
    int tighter_aux = 0;
    for (const SampleRecord& rec : per_cell[ci]) {
      if (rec.status == RecordStatus::Violation) ++summary.violations;
      if (rec.status == RecordStatus::SolverUncertain) {
        ++summary.uncertain;
      } else {
        summary.min_margin = std::min(summary.min_margin, rec.margin);
      }
      if ((cell.check == CheckKind::Thm1Classical || cell.check == CheckKind::JabbourCompare) &&
          rec.aux < rec.bound) {
        ++tighter_aux;
      }
      report.records.push_back(rec);
    }
    if (cell.check == CheckKind::Thm1Classical) {
      summary.note = "jabbour-datta tighter on " + std::to_string(tighter_aux) + "/" +
                     std::to_string(summary.samples);
    } else if (cell.check == CheckKind::JabbourCompare) {
      summary.note = "classical bound tighter on " + std::to_string(tighter_aux) + "/" +
                     std::to_string(summary.samples);
    }
    report.violations += summary.violations;
    report.uncertain += summary.uncertain;
    if (summary.samples > summary.uncertain) {
      report.min_margin = std::min(report.min_margin, summary.min_margin);
    }
    report.cells.push_back(std::move(summary));
  }
  const size_t total = report.records.size();
  report.uncertain_rate = total > 0 ? static_cast<double>(report.uncertain) / total : 0.0;
  report.failed = report.violations > 0 || report.uncertain_rate > cfg.uncertain_cap;
  return report;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& config) {
  return run_cells(config, expand_cells(config));
}

CampaignReport run_classical_campaign(const CampaignConfig& config) {
  if (config.perturbation != PerturbationMode::ClassicalOnly) {
    throw ValidationError("run_classical_campaign: perturbation mode must be classical-only");
  }
  CampaignConfig cfg = config;
  cfg.checks = {CheckKind::Thm1Classical, CheckKind::JabbourCompare};
  return run_cells(cfg, expand_cells(cfg));
}

SampleRecord run_extremal_probe(int d_a, int d_b, const RenyiOrder& order, double epsilon,
                                int restarts, std::uint64_t seed,
                                const SolverConfig& solver) {
  SampleRecord best;
  best.check = CheckKind::Thm1;
  best.d_a = d_a;
  best.d_b = d_b;
  best.order = order.is_infinite() ? kInf : order.value();
  best.requested_eps = epsilon;
  best.aux = kNaN;
  best.variant = "extremal-probe";
  if (epsilon <= 0.0) {
    best.variant = "extremal-probe-sentinel";
    return best;  // ratio undefined at zero distance
  }

  auto bound_at = [&](double eps) {
    if (order.is_infinite()) return bounds::bound_hmin(eps, d_a);
    if (order.value() > 1.0) return bounds::bound_high(eps, d_a, order);
    return bounds::bound_low(eps, d_a, order.value());
  };

  const int d = d_a * d_b;
  double best_ratio = -kInf;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    const std::uint64_t rs = SplitMix64::derive(seed, r);
    BipartiteState rho = sample_random_state(d_a, d_b, Ensemble::HilbertSchmidt, rs);
    EntropyResult h_rho = conditional_entropy_up(rho, order, solver);

    // search over Hermitian perturbation directions by simplex on the
    // direction coordinates; each evaluation rescales to the distance budget
    const int n = d * d;
    SplitMix64 rng(SplitMix64::derive(rs, 7));
    std::vector<double> x0(n);
    for (auto& v : x0) v = rng.gaussian();

    auto ratio_of = [&](const std::vector<double>& x) -> double {
      Matrix dir = Matrix::Zero(d, d);
      int k = 0;
      for (int i = 0; i < d; ++i) dir(i, i) = x[k++];
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          dir(i, j) = Complex(x[k], x[k + 1]);
          dir(j, i) = std::conj(dir(i, j));
          k += 2;
        }
      }
      dir -= (dir.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
      const double scale = dir.cwiseAbs().maxCoeff();
      if (!(scale > 0.0)) return -kInf;
      dir /= scale;
      // bisect the step to land at the requested distance
      double lo = 0.0, hi = epsilon;
      Matrix sigma_m = rho.matrix();
      double realized = 0.0;
      for (int grow = 0; grow < 40; ++grow) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() + hi * dir);
        RealVector w = es.eigenvalues().cwiseMax(0.0);
        Matrix cand = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
        cand /= cand.trace().real();
        const double dist = trace_distance(HermitianOperator(rho.matrix()),
                                           HermitianOperator(cand));
        if (dist >= epsilon) break;
        lo = hi;
        hi *= 2.0;
      }
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() + mid * dir);
        RealVector w = es.eigenvalues().cwiseMax(0.0);
        Matrix cand = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
        cand /= cand.trace().real();
        const double dist = trace_distance(HermitianOperator(rho.matrix()),
                                           HermitianOperator(cand));
        if (dist > epsilon) {
          hi = mid;
        } else {
          lo = mid;
          sigma_m = cand;
          realized = dist;
        }
        if (epsilon - realized >= 0 && epsilon - realized < 1e-6) break;
      }
      if (!(realized > 0.0)) return -kInf;
      BipartiteState sigma(DensityOperator(PsdOperator(sigma_m)), d_a, d_b);
      EntropyResult h_sigma = conditional_entropy_up(sigma, order, solver);
      const double b = bound_at(realized);
      if (!(b > 0.0)) return -kInf;
      return std::abs(h_sigma.value - h_rho.value) / b;
    };

    // coarse simplex over directions; the ratio landscape is cheap to probe
    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (int i = 0; i < n; ++i) xs[i + 1][i] += 0.25;
    for (int i = 0; i <= n; ++i) fs[i] = -ratio_of(xs[i]);
    for (int iter = 0; iter < 60; ++iter) {
      int worst = 0, bi = 0;
      for (int i = 1; i <= n; ++i) {
        if (fs[i] > fs[worst]) worst = i;
        if (fs[i] < fs[bi]) bi = i;
      }
      std::vector<double> centroid(n, 0.0);
      for (int i = 0; i <= n; ++i) {
        if (i == worst) continue;
        for (int j = 0; j < n; ++j) centroid[j] += xs[i][j] / n;
      }
      std::vector<double> xr(n);
      for (int j = 0; j < n; ++j) xr[j] = 2.0 * centroid[j] - xs[worst][j];
      const double fr = -ratio_of(xr);
      if (fr < fs[worst]) {
        xs[worst] = std::move(xr);
        fs[worst] = fr;
      } else {
        for (int j = 0; j < n; ++j) {
          xs[worst][j] = 0.5 * (xs[worst][j] + centroid[j]);
        }
        fs[worst] = -ratio_of(xs[worst]);
      }
    }
    double local_best = -kInf;
    for (int i = 0; i <= n; ++i) local_best = std::max(local_best, -fs[i]);
    if (local_best > best_ratio) {
      best_ratio = local_best;
      best.seed = rs;
      best.h_rho = h_rho.value;
      best.aux = best_ratio;
      best.realized_eps = epsilon;
      best.bound = bound_at(epsilon);
    }
  }
  best.margin = best.bound * (1.0 - (std::isfinite(best_ratio) ? best_ratio : 0.0));
  return best;
}

// --- report output -----------------------------------------------------------

namespace {

nlohmann::json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string order_label(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

nlohmann::json config_to_json(const CampaignConfig& cfg) {
  nlohmann::json j;
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& [da, db] : cfg.dims) dims.push_back({da, db});
  j["dims"] = dims;
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : cfg.orders) {
    orders.push_back(o.is_infinite() ? nlohmann::json("inf") : nlohmann::json(o.value()));
  }
  j["orders"] = orders;
  j["epsilons"] = cfg.epsilons;
  j["samples_per_cell"] = cfg.samples_per_cell;
  j["ensemble"] = to_string(cfg.ensemble);
  j["perturbation"] = to_string(cfg.perturbation);
  j["seed"] = cfg.seed;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : cfg.checks) checks.push_back(to_string(c));
  j["checks"] = checks;
  j["violation_tolerance"] = cfg.violation_tolerance;
  j["duality_tolerance"] = cfg.duality_tolerance;
  j["uncertain_cap"] = cfg.uncertain_cap;
  j["jobs"] = cfg.jobs;
  return j;
}

nlohmann::json record_to_json(const SampleRecord& r) {
  nlohmann::json j;
  j["check"] = to_string(r.check);
  j["cell"] = r.cell_index;
  j["sample"] = r.sample_index;
  j["seed"] = r.seed;
  j["d_A"] = r.d_a;
  j["d_B"] = r.d_b;
  j["order"] = order_label(r.order);
  j["requested_eps"] = r.requested_eps;
  j["realized_eps"] = r.realized_eps;
  j["h_rho"] = json_num(r.h_rho);
  j["h_sigma"] = json_num(r.h_sigma);
  j["converged_rho"] = r.conv_rho;
  j["converged_sigma"] = r.conv_sigma;
  j["bound"] = json_num(r.bound);
  j["margin"] = json_num(r.margin);
  j["aux"] = json_num(r.aux);
  if (!r.variant.empty()) j["variant"] = r.variant;
  j["status"] = to_string(r.status);
  return j;
}

}  // namespace

void write_report_json(const CampaignReport& report, std::ostream& out,
                       const std::string& timestamp) {
  nlohmann::json j;
  j["schema"] = report.schema;
  if (!timestamp.empty()) j["generated_at"] = timestamp;
  j["config"] = config_to_json(report.config);
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cj;
    cj["check"] = to_string(c.check);
    cj["cell"] = c.cell_index;
    cj["d_A"] = c.d_a;
    cj["d_B"] = c.d_b;
    cj["order"] = order_label(c.order);
    cj["requested_eps"] = c.requested_eps;
    cj["samples"] = c.samples;
    cj["violations"] = c.violations;
    cj["uncertain"] = c.uncertain;
    cj["min_margin"] = json_num(c.min_margin);
    if (!c.note.empty()) cj["note"] = c.note;
    cells.push_back(std::move(cj));
  }
  j["cells"] = cells;
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) records.push_back(record_to_json(r));
  j["records"] = records;
  j["summary"] = {{"records", report.records.size()},
                  {"violations", report.violations},
                  {"uncertain", report.uncertain},
                  {"uncertain_rate", report.uncertain_rate},
                  {"min_margin", json_num(report.min_margin)},
                  {"failed", report.failed}};
  out << j.dump(2) << "\n";
}

void write_report_csv(const CampaignReport& report, std::ostream& out) {
  out << "check,cell,sample,seed,d_A,d_B,order,requested_eps,realized_eps,"
         "h_rho,h_sigma,converged_rho,converged_sigma,bound,margin,aux,variant,status\n";
  std::ostringstream ss;
  ss.precision(17);
  for (const auto& r : report.records) {
    ss.str("");
    ss << to_string(r.check) << ',' << r.cell_index << ',' << r.sample_index << ','
       << r.seed << ',' << r.d_a << ',' << r.d_b << ',' << order_label(r.order) << ','
       << r.requested_eps << ',' << r.realized_eps << ',' << r.h_rho << ',' << r.h_sigma
       << ',' << (r.conv_rho ? 1 : 0) << ',' << (r.conv_sigma ? 1 : 0) << ',' << r.bound
       << ',' << r.margin << ',' << r.aux << ',' << r.variant << ','
       << to_string(r.status) << '\n';
    out << ss.str();
  }
}

}  // namespace renyi::harness
