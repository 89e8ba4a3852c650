#include "renyi/state_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace renyi {

namespace {
constexpr double kTraceTol = 1e-9;
constexpr double kClassicalTol = 1e-10;
}  // namespace

DensityOperator::DensityOperator(PsdOperator op) : op_(std::move(op)) {
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("DensityOperator: trace " + std::to_string(tr) + " is not 1");
  }
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(Matrix(Matrix::Identity(dim, dim) / dim));
}

BipartiteState::BipartiteState(DensityOperator state, int d_a, int d_b, bool classical_a,
                               bool classical_b)
    : state_(std::move(state)), d_a_(d_a), d_b_(d_b), classical_a_(classical_a),
      classical_b_(classical_b) {
  if (d_a_ < 1 || d_b_ < 1 || d_a_ * d_b_ != state_.dim()) {
    throw ValidationError("BipartiteState: dims do not factor the state dimension");
  }
  const Matrix& m = state_.matrix();
  if (classical_a_) {
    for (int a = 0; a < d_a_; ++a) {
      for (int a2 = 0; a2 < d_a_; ++a2) {
        if (a == a2) continue;
        const double off =
            m.block(a * d_b_, a2 * d_b_, d_b_, d_b_).cwiseAbs().maxCoeff();
        if (off > kClassicalTol) {
          throw ValidationError("BipartiteState: classical_A flag set but A off-blocks present");
        }
      }
    }
  }
  if (classical_b_) {
    for (int a = 0; a < d_a_; ++a) {
      for (int a2 = 0; a2 < d_a_; ++a2) {
        for (int b = 0; b < d_b_; ++b) {
          for (int b2 = 0; b2 < d_b_; ++b2) {
            if (b == b2) continue;
            if (std::abs(m(a * d_b_ + b, a2 * d_b_ + b2)) > kClassicalTol) {
              throw ValidationError(
                  "BipartiteState: classical_B flag set but B off-diagonals present");
            }
          }
        }
      }
    }
  }
}

HermitianOperator BipartiteState::marginal_a() const {
  return partial_trace(state_.op().base(), d_a_, d_b_, Subsystem::A);
}

HermitianOperator BipartiteState::marginal_b() const {
  return partial_trace(state_.op().base(), d_a_, d_b_, Subsystem::B);
}

Eigen::MatrixXd BipartiteState::diagonal_table() const {
  Eigen::MatrixXd t(d_a_, d_b_);
  for (int a = 0; a < d_a_; ++a) {
    for (int b = 0; b < d_b_; ++b) {
      t(a, b) = state_.matrix()(a * d_b_ + b, a * d_b_ + b).real();
    }
  }
  return t;
}

Ensemble ensemble_from_string(const std::string& name) {
  if (name == "haar-pure") return Ensemble::HaarPure;
  if (name == "hilbert-schmidt") return Ensemble::HilbertSchmidt;
  if (name == "bures") return Ensemble::Bures;
  if (name == "rank-limited") return Ensemble::RankLimited;
  throw ValidationError("unknown ensemble: " + name);
}

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::HaarPure: return "haar-pure";
    case Ensemble::HilbertSchmidt: return "hilbert-schmidt";
    case Ensemble::Bures: return "bures";
    case Ensemble::RankLimited: return "rank-limited";
  }
  return "?";
}

PerturbationMode perturbation_mode_from_string(const std::string& name) {
  if (name == "mixing") return PerturbationMode::Mixing;
  if (name == "hermitian-direction") return PerturbationMode::HermitianDirection;
  if (name == "classical-only") return PerturbationMode::ClassicalOnly;
  throw ValidationError("unknown perturbation mode: " + name);
}

std::string to_string(PerturbationMode m) {
  switch (m) {
    case PerturbationMode::Mixing: return "mixing";
    case PerturbationMode::HermitianDirection: return "hermitian-direction";
    case PerturbationMode::ClassicalOnly: return "classical-only";
  }
  return "?";
}

namespace {

Matrix ginibre(int rows, int cols, SplitMix64& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  }
  return g;
}

Matrix normalized_density(Matrix m) {
  const double tr = m.trace().real();
  return m / tr;
}

}  // namespace

Matrix random_unitary(int dim, SplitMix64& rng) {
  Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix phases so the distribution is Haar
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

BipartiteState sample_random_state(int d_a, int d_b, Ensemble ensemble,
                                   std::uint64_t seed, int rank) {
  if (d_a < 1 || d_b < 1) {
    throw ValidationError("sample_random_state: dims must be >= 1");
  }
  const int d = d_a * d_b;
  SplitMix64 rng(seed);
  Matrix rho;
  switch (ensemble) {
    case Ensemble::HaarPure: {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
      v.normalize();
      rho = v * v.adjoint();
      break;
    }
    case Ensemble::HilbertSchmidt: {
      Matrix g = ginibre(d, d, rng);
      rho = normalized_density(g * g.adjoint());
      break;
    }
    case Ensemble::Bures: {
      Matrix g = ginibre(d, d, rng);
      Matrix u = random_unitary(d, rng);
      Matrix m = (Matrix::Identity(d, d) + u) * g;
      rho = normalized_density(m * m.adjoint());
      break;
    }
    case Ensemble::RankLimited: {
      if (rank < 1 || rank > d) {
        throw ValidationError("sample_random_state: rank must be in [1, d_A*d_B]");
      }
      Matrix g = ginibre(d, rank, rng);
      rho = normalized_density(g * g.adjoint());
      break;
    }
  }
  return BipartiteState(DensityOperator(std::move(rho)), d_a, d_b);
}

namespace {

// sigma = (1 - t) rho + t tau with t chosen so the distance is exactly
// t * trace_distance(rho, tau) <= epsilon.
PerturbResult perturb_mixing(const BipartiteState& rho, double epsilon, SplitMix64& rng) {
  const std::uint64_t sub = rng.next();
  BipartiteState tau =
      sample_random_state(rho.d_a(), rho.d_b(), Ensemble::HilbertSchmidt, sub);
  const double dist = trace_distance(rho.density().op().base(), tau.density().op().base());
  const double t = dist > 0 ? std::min(1.0, epsilon / dist) : 0.0;
  Matrix mixed = (1.0 - t) * rho.matrix() + t * tau.matrix();
  BipartiteState sigma(DensityOperator(std::move(mixed)), rho.d_a(), rho.d_b());
  const double realized = trace_distance(rho.density().op().base(), sigma.density().op().base());
  return {std::move(sigma), realized};
}

// project rho + s * direction back to the state space
Matrix clip_renormalize(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  RealVector w = es.eigenvalues().cwiseMax(0.0);
  Matrix out = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return out / out.trace().real();
}

PerturbResult perturb_hermitian_direction(const BipartiteState& rho, double epsilon,
                                          SplitMix64& rng) {
  const int d = rho.dim();
  Matrix g = ginibre(d, d, rng);
  Matrix dir = (g + g.adjoint()) / 2.0;
  dir -= (dir.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
  const double norm = dir.cwiseAbs().maxCoeff();
  if (norm > 0) dir /= norm;

  auto realized_at = [&](double s) {
    Matrix sigma = clip_renormalize(rho.matrix() + s * dir);
    double dist = trace_distance(HermitianOperator(rho.matrix()), HermitianOperator(sigma));
    return std::make_pair(dist, sigma);
  };

  // bracket a scale reaching epsilon, then bisect on the realized distance
  double lo = 0.0, hi = epsilon > 0 ? epsilon : 0.0;
  auto at_hi = realized_at(hi);
  int grow = 0;
  while (at_hi.first < epsilon && grow < 60) {
    lo = hi;
    hi *= 2.0;
    if (hi == 0.0) hi = 1e-3;
    at_hi = realized_at(hi);
    ++grow;
  }
  Matrix best = at_hi.second;
  double best_dist = at_hi.first;
  if (best_dist > epsilon) {
    best = rho.matrix();
    best_dist = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      auto at_mid = realized_at(mid);
      if (at_mid.first > epsilon) {
        hi = mid;
      } else {
        lo = mid;
        best = at_mid.second;
        best_dist = at_mid.first;
      }
      if (epsilon - best_dist >= 0 && epsilon - best_dist < 1e-6) break;
    }
  }
  // clipping can saturate below epsilon; the contract is only an upper bound
  BipartiteState sigma(DensityOperator(std::move(best)), rho.d_a(), rho.d_b());
  return {std::move(sigma), best_dist};
}

PerturbResult perturb_classical(const BipartiteState& rho, double epsilon, SplitMix64& rng) {
  if (!rho.classical_a() || !rho.classical_b()) {
    throw ValidationError("perturb_within: classical-only mode requires a fully classical state");
  }
  Eigen::MatrixXd p = rho.diagonal_table();
  Eigen::MatrixXd q = random_probability_table(rho.d_a(), rho.d_b(), rng);
  const double tv = 0.5 * (p - q).cwiseAbs().sum();
  const double t = tv > 0 ? std::min(1.0, epsilon / tv) : 0.0;
  Eigen::MatrixXd mixed = (1.0 - t) * p + t * q;
  mixed /= mixed.sum();
  BipartiteState sigma = make_cq_state(mixed);
  const double realized = 0.5 * (p - mixed).cwiseAbs().sum();
  return {std::move(sigma), realized};
}

}  // namespace

PerturbResult perturb_within(const BipartiteState& rho, const PerturbationSpec& spec) {
  if (spec.epsilon < 0.0 || spec.epsilon > 1.0) {
    throw ValidationError("perturb_within: epsilon must be in [0, 1]");
  }
  if (spec.epsilon == 0.0) {
    return {rho, 0.0};
  }
  SplitMix64 rng(spec.seed);
  PerturbResult out = [&] {
    switch (spec.mode) {
      case PerturbationMode::Mixing: return perturb_mixing(rho, spec.epsilon, rng);
      case PerturbationMode::HermitianDirection:
        return perturb_hermitian_direction(rho, spec.epsilon, rng);
      case PerturbationMode::ClassicalOnly: return perturb_classical(rho, spec.epsilon, rng);
    }
    throw ValidationError("perturb_within: unknown mode");
  }();
  if (out.realized_distance > spec.epsilon + 1e-10) {
    throw NumericalError("perturb_within: realized distance exceeds budget", 0);
  }
  return out;
}

BipartiteState make_cq_state(const Eigen::MatrixXd& table) {
  if (table.minCoeff() < 0.0) {
    throw ValidationError("make_cq_state: negative probability");
  }
  if (std::abs(table.sum() - 1.0) > 1e-10) {
    throw ValidationError("make_cq_state: table sums to " + std::to_string(table.sum()));
  }
  const int d_a = static_cast<int>(table.rows());
  const int d_b = static_cast<int>(table.cols());
  Matrix m = Matrix::Zero(d_a * d_b, d_a * d_b);
  for (int a = 0; a < d_a; ++a) {
    for (int b = 0; b < d_b; ++b) m(a * d_b + b, a * d_b + b) = table(a, b);
  }
  return BipartiteState(DensityOperator(std::move(m)), d_a, d_b, true, true);
}

BipartiteState max_entangled(int d) {
  if (d < 1) throw ValidationError("max_entangled: d must be >= 1");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i) * d + i) = 1.0 / std::sqrt(d);
  return BipartiteState(DensityOperator(Matrix(v * v.adjoint())), d, d);
}

namespace {

bool is_diagonal(const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (i != j && std::abs(m(i, j)) > kClassicalTol) return false;
    }
  }
  return true;
}

}  // namespace

BipartiteState product(const DensityOperator& rho_a, const DensityOperator& rho_b) {
  HermitianOperator t = tensor(rho_a.op().base(), rho_b.op().base());
  return BipartiteState(DensityOperator(PsdOperator(std::move(t))), rho_a.dim(), rho_b.dim(),
                        is_diagonal(rho_a.matrix()), is_diagonal(rho_b.matrix()));
}

Eigen::MatrixXd random_probability_table(int d_a, int d_b, SplitMix64& rng) {
  Eigen::MatrixXd t(d_a, d_b);
  for (int a = 0; a < d_a; ++a) {
    for (int b = 0; b < d_b; ++b) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      t(a, b) = -std::log(u);  // Exp(1) draws normalize to a flat Dirichlet
    }
  }
  return t / t.sum();
}

// --- serialization ----------------------------------------------------------

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw ValidationError("state json: \"matrix\" must be a non-empty array");
  }
  const int n = static_cast<int>(rows.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw ValidationError("state json: \"matrix\" must be square");
    }
    for (int j = 0; j < n; ++j) {
      const auto& entry = row.at(j);
      if (!entry.is_array() || entry.size() != 2) {
        throw ValidationError("state json: entries must be [re, im] pairs");
      }
      m(i, j) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

std::string to_json(const BipartiteState& state) {
  nlohmann::json j;
  j["d_A"] = state.d_a();
  j["d_B"] = state.d_b();
  j["classical_A"] = state.classical_a();
  j["classical_B"] = state.classical_b();
  j["matrix"] = matrix_to_json(state.matrix());
  return j.dump();
}

BipartiteState state_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("d_A") || !j.contains("d_B") || !j.contains("matrix")) {
    throw ValidationError("state json: requires d_A, d_B and matrix fields");
  }
  const int d_a = j.at("d_A").get<int>();
  const int d_b = j.at("d_B").get<int>();
  Matrix m = matrix_from_json(j.at("matrix"));
  const bool ca = j.value("classical_A", false);
  const bool cb = j.value("classical_B", false);
  return BipartiteState(DensityOperator(std::move(m)), d_a, d_b, ca, cb);
}

BipartiteState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return state_from_json(buf.str());
}

void save_state(const BipartiteState& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write state file: " + path);
  out << to_json(state) << "\n";
}

Eigen::MatrixXd table_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("table")) throw ValidationError("table json: requires a \"table\" field");
  const auto& rows = j.at("table");
  const int ra = static_cast<int>(rows.size());
  if (ra == 0) throw ValidationError("table json: empty table");
  const int rb = static_cast<int>(rows.at(0).size());
  Eigen::MatrixXd t(ra, rb);
  for (int a = 0; a < ra; ++a) {
    if (static_cast<int>(rows.at(a).size()) != rb) {
      throw ValidationError("table json: ragged rows");
    }
    for (int b = 0; b < rb; ++b) t(a, b) = rows.at(a).at(b).get<double>();
  }
  return t;
}

Eigen::MatrixXd load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open table file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return table_from_json(buf.str());
}

}  // namespace renyi
