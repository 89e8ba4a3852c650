// Acceptance suite: runs every certification campaign end to end and prints
// one pass/fail line per criterion. Exit code is the number of failures.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "renyi/bounds.hpp"
#include "renyi/harness.hpp"
#include "renyi/renyi_entropy.hpp"

using namespace renyi;
using harness::CampaignConfig;
using harness::CampaignReport;
using harness::CheckKind;
using harness::RecordStatus;
using harness::SampleRecord;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(int index, bool pass, const char* label, const std::string& detail,
            double seconds) {
  std::printf("%s  %2d. %-28s %s  [%.1fs]\n", pass ? "PASS" : "FAIL", index, label,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

int hardware_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 1 ? static_cast<int>(std::min(hw, 8u)) : 1;
}

CampaignConfig base_config() {
  CampaignConfig cfg;
  cfg.jobs = hardware_jobs();
  cfg.seed = 7070;
  return cfg;
}

std::string margin_detail(const CampaignReport& rep) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "records=%zu violations=%d uncertain_rate=%.4f min_margin=%.3e",
                rep.records.size(), rep.violations, rep.uncertain_rate, rep.min_margin);
  return buf;
}

// 1. continuity bound for orders below one on the default grid
void criterion_1() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.checks = {CheckKind::Thm1};
  CampaignReport rep = harness::run_campaign(cfg);
  const double secs = t.seconds();
  const bool pass =
      rep.violations == 0 && rep.uncertain_rate <= 0.02 && secs <= 600.0;
  report(1, pass, "thm1 campaign", margin_detail(rep), secs);
}

// 2. classical strengthening on cq states, plus the pointwise comparison
void criterion_2() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.perturbation = PerturbationMode::ClassicalOnly;
  CampaignReport rep = harness::run_classical_campaign(cfg);
  bool ordering = true;
  for (const SampleRecord& r : rep.records) {
    if (r.check != CheckKind::Thm1Classical) continue;
    const double general = bounds::bound_low(r.realized_eps, r.d_a, r.order);
    if (r.bound > general + 1e-10) ordering = false;
  }
  int cl_violations = 0;
  for (const SampleRecord& r : rep.records) {
    if (r.check == CheckKind::Thm1Classical && r.status == RecordStatus::Violation) {
      ++cl_violations;
    }
  }
  const bool pass = cl_violations == 0 && ordering;
  report(2, pass, "thm1 classical campaign",
         margin_detail(rep) + (ordering ? "" : " ORDERING-BROKEN"), t.seconds());
}

// 3. continuity bound for orders above one (infinite order via the program)
void criterion_3() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.checks = {CheckKind::Cor1};
  CampaignReport rep = harness::run_campaign(cfg);
  const bool pass = rep.violations == 0 && rep.uncertain_rate <= 0.02;
  report(3, pass, "cor1 campaign", margin_detail(rep), t.seconds());
}

// 4. min-entropy continuity bound with feasibility residuals
void criterion_4() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.checks = {CheckKind::Thm3Hmin};
  CampaignReport rep = harness::run_campaign(cfg);
  double worst_feas = 0.0;
  for (const SampleRecord& r : rep.records) worst_feas = std::max(worst_feas, r.aux);
  const bool pass = rep.violations == 0 && worst_feas <= 1e-8;
  char extra[64];
  std::snprintf(extra, sizeof(extra), " worst_feas=%.2e", worst_feas);
  report(4, pass, "thm3 hmin campaign", margin_detail(rep) + extra, t.seconds());
}

// 5. duality residuals across dims and orders
void criterion_5() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.checks = {CheckKind::Duality};
  cfg.dims = {{2, 2}, {2, 3}};
  cfg.orders = {RenyiOrder(0.5), RenyiOrder(0.6), RenyiOrder(2.0), RenyiOrder(5.0)};
  cfg.samples_per_cell = 63;  // 8 cells -> 504 states
  CampaignReport rep = harness::run_campaign(cfg);
  int converged = 0, tight = 0;
  double worst = 0.0;
  for (const SampleRecord& r : rep.records) {
    if (r.status == RecordStatus::SolverUncertain) continue;
    ++converged;
    if (r.aux <= 1e-5) ++tight;
    worst = std::max(worst, r.aux);
  }
  const double tight_rate = converged > 0 ? static_cast<double>(tight) / converged : 0.0;
  const bool pass = converged > 0 && tight_rate >= 0.99 && worst <= 1e-4;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "states=%zu converged=%d within_1e-5=%.4f worst=%.3e",
                rep.records.size(), converged, tight_rate, worst);
  report(5, pass, "duality suite", detail, t.seconds());
}

// 6. trace-power subadditivity with the equality corners
void criterion_6() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.checks = {CheckKind::McCarthy};
  cfg.samples_per_cell = 200;  // 5 dims x 200 = 1000 pairs per order
  CampaignReport rep = harness::run_campaign(cfg);

  bool equality_alpha1 = true;
  for (const SampleRecord& r : rep.records) {
    if (r.order == 1.0 && std::abs(r.margin) > 1e-10) equality_alpha1 = false;
  }

  // alpha = 0 counts ranks; complementary supports make both sides equal
  bool equality_alpha0 = true;
  SplitMix64 rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.next() % 5);
    const int k = 1 + static_cast<int>(rng.next() % (d - 1));
    Matrix gp(k, k), gq(d - k, d - k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) gp(i, j) = rng.complex_gaussian();
    }
    for (int i = 0; i < d - k; ++i) {
      for (int j = 0; j < d - k; ++j) gq(i, j) = rng.complex_gaussian();
    }
    Matrix p = Matrix::Zero(d, d), q = Matrix::Zero(d, d);
    p.topLeftCorner(k, k) = gp * gp.adjoint();
    q.bottomRightCorner(d - k, d - k) = gq * gq.adjoint();
    const double lhs = trace_power(PsdOperator(Matrix(p + q)), 0.0);
    const double rhs = trace_power(PsdOperator(p), 0.0) + trace_power(PsdOperator(q), 0.0);
    if (std::abs(lhs - rhs) > 1e-10) equality_alpha0 = false;
  }

  const bool pass = rep.violations == 0 && equality_alpha1 && equality_alpha0;
  report(6, pass, "mccarthy suite",
         margin_detail(rep) + (equality_alpha1 ? "" : " EQ1-BROKEN") +
             (equality_alpha0 ? "" : " EQ0-BROKEN"),
         t.seconds());
}

// 7. data processing across channel families
void criterion_7() {
  Timer t;
  CampaignConfig cfg = base_config();
  cfg.checks = {CheckKind::Dpi};
  cfg.dims = {{2, 2}};
  cfg.orders = {RenyiOrder(0.5), RenyiOrder(0.75), RenyiOrder(2.0), RenyiOrder(5.0)};
  cfg.samples_per_cell = 125;  // 4 orders x 125 = 500 triples per channel family
  CampaignReport rep = harness::run_campaign(cfg);
  const bool pass = rep.violations == 0;
  report(7, pass, "dpi suite", margin_detail(rep), t.seconds());
}

// 8. behavior at orders approaching one
void criterion_8() {
  Timer t;
  bool entropies_ok = true;
  double worst_h = 0.0;
  for (int i = 0; i < 100; ++i) {
    BipartiteState rho = sample_random_state(2, 2, Ensemble::HilbertSchmidt, 808000 + i);
    const double near_one = conditional_entropy_up(rho, RenyiOrder(0.9999)).value;
    const double vn = von_neumann_conditional(rho);
    worst_h = std::max(worst_h, std::abs(near_one - vn));
    if (std::abs(near_one - vn) > 5e-3) entropies_ok = false;
  }

  bool limit_ok = true;
  double worst_b = 0.0;
  for (int ie = 1; ie <= 20; ++ie) {
    const double eps = ie / 20.0;
    for (int d : {2, 4, 16, 64}) {
      const double diff =
          std::abs(bounds::bound_low(eps, d, 1.0 - 1e-6) - bounds::afw_von_neumann(eps, d));
      worst_b = std::max(worst_b, diff);
      if (diff > 1e-4) limit_ok = false;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "worst_entropy_gap=%.2e worst_bound_gap=%.2e",
                worst_h, worst_b);
  report(8, entropies_ok && limit_ok, "order-one consistency", detail, t.seconds());
}

// 9. solver oracle equivalence at d_B = 2
void criterion_9() {
  Timer t;
  const int n_states = 200;
  const std::vector<double> orders = {0.5, 0.75, 2.0};
  std::atomic<int> next{0};
  std::vector<double> worst_grid(n_states, 0.0);
  std::vector<double> worst_ds(n_states, 0.0);
  SolverConfig config;

  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n_states; i = next.fetch_add(1)) {
      BipartiteState rho = sample_random_state(2, 2, Ensemble::HilbertSchmidt, 909000 + i);
      for (double a : orders) {
        EntropyResult fp = solve_fixed_point(rho, RenyiOrder(a), config);
        EntropyResult ds =
            solve_direct_search(rho, RenyiOrder(a), config, fp.optimizer.matrix());
        worst_ds[i] = std::max(worst_ds[i], std::abs(fp.value - ds.value));
        EntropyResult grid = solve_bloch_grid(rho, RenyiOrder(a), 201);
        worst_grid[i] = std::max(worst_grid[i], std::abs(fp.value - grid.value));
      }
    }
  };
  std::vector<std::thread> pool;
  const int jobs = hardware_jobs();
  for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  double grid_gap = 0.0, ds_gap = 0.0;
  for (int i = 0; i < n_states; ++i) {
    grid_gap = std::max(grid_gap, worst_grid[i]);
    ds_gap = std::max(ds_gap, worst_ds[i]);
  }

  // product states reproduce the unconditional entropy of the A factor
  double prod_gap = 0.0;
  SplitMix64 rng(909);
  for (int i = 0; i < 30; ++i) {
    Matrix ga(2, 2), gb(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        ga(r, c) = rng.complex_gaussian();
        gb(r, c) = rng.complex_gaussian();
      }
    }
    Matrix a = ga * ga.adjoint();
    a /= a.trace().real();
    Matrix b = gb * gb.adjoint();
    b /= b.trace().real();
    DensityOperator rho_a{a};
    BipartiteState prod_state = product(rho_a, DensityOperator{b});
    for (double al : orders) {
      const double expect = renyi_entropy(rho_a, RenyiOrder(al));
      const double got = conditional_entropy_up(prod_state, RenyiOrder(al)).value;
      prod_gap = std::max(prod_gap, std::abs(got - expect));
    }
  }

  const bool pass = grid_gap <= 1e-3 && ds_gap <= 1e-5 && prod_gap <= 1e-6;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "grid_gap=%.2e ds_gap=%.2e product_gap=%.2e",
                grid_gap, ds_gap, prod_gap);
  report(9, pass, "solver oracle equivalence", detail, t.seconds());
}

// 10. min-entropy program vs the classical closed form
void criterion_10() {
  Timer t;
  double worst = 0.0;
  double worst_feas = 0.0;
  SplitMix64 rng(1010);
  for (int i = 0; i < 100; ++i) {
    const int da = 2 + static_cast<int>(rng.next() % 3);
    const int db = 2 + static_cast<int>(rng.next() % 3);
    Eigen::MatrixXd table = random_probability_table(da, db, rng);
    EntropyResult sdp = hmin(make_cq_state(table));
    worst = std::max(worst, std::abs(sdp.value - classical_hmin(table)));
    worst_feas = std::max(worst_feas, sdp.residual);
  }
  const bool pass = worst <= 1e-7 && worst_feas <= 1e-8;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "worst_gap=%.2e worst_feas=%.2e", worst, worst_feas);
  report(10, pass, "hmin closed-form oracle", detail, t.seconds());
}

}  // namespace

int main() {
  Timer total;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d/10 criteria passed  [total %.1fs]\n",
              failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", 10 - failures,
              total.seconds());
  return failures;
}
