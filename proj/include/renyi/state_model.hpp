#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "renyi/operator_core.hpp"
#include "renyi/rng.hpp"

namespace renyi {

// Positive semidefinite with unit trace.
class DensityOperator {
 public:
  explicit DensityOperator(PsdOperator op);
  explicit DensityOperator(Matrix m) : DensityOperator(PsdOperator(std::move(m))) {}

  static DensityOperator maximally_mixed(int dim);

  const PsdOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }

 private:
  PsdOperator op_;
};

// Density operator on A (x) B with composite index a * d_B + b.
// classical_A means the operator is block-diagonal across the A basis
// (entries with a != a' vanish); symmetrically for classical_B.
class BipartiteState {
 public:
  BipartiteState(DensityOperator state, int d_a, int d_b, bool classical_a = false,
                 bool classical_b = false);

  const DensityOperator& density() const { return state_; }
  const Matrix& matrix() const { return state_.matrix(); }
  int dim() const { return state_.dim(); }
  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  bool classical_a() const { return classical_a_; }
  bool classical_b() const { return classical_b_; }

  HermitianOperator marginal_a() const;
  HermitianOperator marginal_b() const;

  // diagonal as a d_A x d_B probability table (valid for fully classical states)
  Eigen::MatrixXd diagonal_table() const;

 private:
  DensityOperator state_;
  int d_a_;
  int d_b_;
  bool classical_a_;
  bool classical_b_;
};

enum class Ensemble { HaarPure, HilbertSchmidt, Bures, RankLimited };

enum class PerturbationMode { Mixing, HermitianDirection, ClassicalOnly };

struct PerturbationSpec {
  double epsilon = 0.0;
  PerturbationMode mode = PerturbationMode::Mixing;
  std::uint64_t seed = 0;
};

Ensemble ensemble_from_string(const std::string& name);
std::string to_string(Ensemble e);
PerturbationMode perturbation_mode_from_string(const std::string& name);
std::string to_string(PerturbationMode m);

// Haar-random unitary via QR of a Ginibre matrix with phase correction.
Matrix random_unitary(int dim, SplitMix64& rng);

// Deterministic per (dims, ensemble, seed). rank is only used by RankLimited.
BipartiteState sample_random_state(int d_a, int d_b, Ensemble ensemble,
                                   std::uint64_t seed, int rank = 0);

struct PerturbResult {
  BipartiteState sigma;
  double realized_distance;
};

// Returns sigma with trace_distance(rho, sigma) <= spec.epsilon (+1e-10),
// together with the realized distance.
PerturbResult perturb_within(const BipartiteState& rho, const PerturbationSpec& spec);

// Diagonal state in the computational product basis from a joint probability
// table p(a, b); both classical flags set.
BipartiteState make_cq_state(const Eigen::MatrixXd& table);

// Projector onto (1/sqrt(d)) sum_i |ii>.
BipartiteState max_entangled(int d);

// Tensor state rho_A (x) rho_B; classical flags are set when the
// corresponding factor is diagonal.
BipartiteState product(const DensityOperator& rho_a, const DensityOperator& rho_b);

// Random joint probability table (uniform Dirichlet-like via normalized exponentials).
Eigen::MatrixXd random_probability_table(int d_a, int d_b, SplitMix64& rng);

// --- serialization ---------------------------------------------------------
// State files: { "d_A": int, "d_B": int, "classical_A": bool, "classical_B": bool,
//                "matrix": [[[re, im], ...], ...] }, row-major, index a*d_B + b.
// Probability tables: { "table": [[p_ab]] }.

std::string to_json(const BipartiteState& state);
BipartiteState state_from_json(const std::string& text);
BipartiteState load_state(const std::string& path);
void save_state(const BipartiteState& state, const std::string& path);
Eigen::MatrixXd table_from_json(const std::string& text);
Eigen::MatrixXd load_table(const std::string& path);

}  // namespace renyi
