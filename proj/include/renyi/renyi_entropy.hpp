#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "renyi/operator_core.hpp"
#include "renyi/renyi_order.hpp"
#include "renyi/state_model.hpp"

namespace renyi {

enum class SolverKind { FixedPoint, DirectSearch, GridOracle, Sdp, ClosedForm };

std::string to_string(SolverKind k);

struct EntropyResult {
  double value;              // bits
  DensityOperator optimizer; // eta_B* (X*/tr X* for the min-entropy program)
  SolverKind solver;
  int iterations;
  double residual;           // stationarity or feasibility measure
  bool converged;
};

struct SolverConfig {
  bool use_fixed_point = true;
  bool use_direct_search = true;   // runs as fallback when the fixed point is uncertified
  bool always_direct_search = false;
  bool use_grid = false;           // Bloch-ball oracle, d_B == 2 only
  int grid_resolution = 201;       // points per axis over [-1, 1]
  double fp_step_tol = 1e-10;      // trace-distance between successive iterates
  int fp_max_iters = 10000;
  double stationarity_tol = 1e-8;
  double agreement_tol = 1e-4;     // cross-solver certification
  int ds_restarts = 5;
  int ds_max_iters = 2000;
  std::uint64_t seed = 0x6b79d20e1545a781ull;
};

// tr((q^{-a'/2} p q^{-a'/2})^a) with powers on the support of q. Returns
// +inf when a > 1 and ker(q) is not contained in ker(p).
double q_alpha(const PsdOperator& p, const PsdOperator& q, const RenyiOrder& order);

// Sandwiched Renyi relative entropy of p relative to q in bits:
// (1/(a-1)) log2(q_alpha / tr p) when defined, +inf otherwise. The infinite
// order is the max-relative entropy log2 lambda_max(q^{-1/2} p q^{-1/2}).
double sandwiched_divergence(const PsdOperator& p, const PsdOperator& q,
                             const RenyiOrder& order);

// Conditional entropy H_a^up(A|B) = sup_eta (1/(1-a)) log2 tr((eta^{-a'/2} rho
// eta^{-a'/2})^a) over density operators eta on B. Infinite order dispatches
// to the min-entropy program. The returned value is the best over the enabled
// solvers; `converged` requires either a stationarity residual below
// stationarity_tol or two solvers agreeing within agreement_tol.
EntropyResult conditional_entropy_up(const BipartiteState& rho, const RenyiOrder& order,
                                     const SolverConfig& config = {});

// H_min(A|B) = -log2 min { tr X : I_A (x) X >= rho, X >= 0 }, solved by an
// interior-point barrier. residual reports max(0, -lambda_min(I (x) X - rho)).
EntropyResult hmin(const BipartiteState& rho);

// H_max = conditional entropy at order 1/2.
EntropyResult hmax(const BipartiteState& rho, const SolverConfig& config = {});

// H(A|B) = H(AB) - H(B) in bits.
double von_neumann_conditional(const BipartiteState& rho);

// -sum lambda log2 lambda over the support.
double von_neumann_entropy(const PsdOperator& rho);

// Unconditional H_a(rho) = (1/(1-a)) log2 tr rho^a; -log2 lambda_max at
// infinite order.
double renyi_entropy(const DensityOperator& rho, const RenyiOrder& order);

// beta with 1/alpha + 1/beta = 2
RenyiOrder dual_order(const RenyiOrder& order);

struct DualityReport {
  double alpha;
  double beta;
  double h_ab;      // H_a^up(A|B) of rho
  double h_ac;      // H_b^up(A|C) of the purification's AC marginal
  double residual;  // |h_ab + h_ac|
  bool converged;
};

DualityReport duality_check(const BipartiteState& rho, const RenyiOrder& order,
                            const SolverConfig& config = {});
double duality_residual(const BipartiteState& rho, const RenyiOrder& order,
                        const SolverConfig& config = {});

// Closed form for fully classical states: (a/(1-a)) log2 sum_b (sum_a
// p(a,b)^a)^(1/a); -log2 sum_b max_a p(a,b) at infinite order.
double classical_conditional_renyi(const Eigen::MatrixXd& table, const RenyiOrder& order);
double classical_hmin(const Eigen::MatrixXd& table);

// --- individual solvers (exposed for cross-validation and the CLI) ---------

EntropyResult solve_fixed_point(const BipartiteState& rho, const RenyiOrder& order,
                                const SolverConfig& config = {});
// init may be empty; when given it seeds the first restart.
EntropyResult solve_direct_search(const BipartiteState& rho, const RenyiOrder& order,
                                  const SolverConfig& config = {},
                                  const Matrix& init = Matrix());
// d_B == 2 only: exhaustive Bloch-ball grid.
EntropyResult solve_bloch_grid(const BipartiteState& rho, const RenyiOrder& order,
                               int resolution = 201);

namespace detail {
// Eigenvalues of a 4x4 Hermitian matrix via its characteristic quartic with
// Newton polish; used by the grid oracle's hot loop.
std::array<double, 4> hermitian4_eigenvalues(const Matrix& s);
}  // namespace detail

}  // namespace renyi
