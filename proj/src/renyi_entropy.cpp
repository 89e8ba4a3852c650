#include "renyi/renyi_entropy.hpp"

#include <cmath>
#include <limits>

namespace renyi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::optional<RenyiOrder> RenyiOrder::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return RenyiOrder::infinity();
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) return std::nullopt;
    return RenyiOrder(v);
  } catch (const ValidationError&) {
    throw;
  } catch (...) {
    return std::nullopt;
  }
}

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::FixedPoint: return "fixed-point";
    case SolverKind::DirectSearch: return "direct-search";
    case SolverKind::GridOracle: return "grid-oracle";
    case SolverKind::Sdp: return "sdp";
    case SolverKind::ClosedForm: return "closed-form";
  }
  return "?";
}

double q_alpha(const PsdOperator& p, const PsdOperator& q, const RenyiOrder& order) {
  if (order.is_infinite()) {
    throw ValidationError("q_alpha: order must be finite");
  }
  if (p.dim() != q.dim()) {
    throw ValidationError("q_alpha: dimension mismatch");
  }
  const double alpha = order.value();
  const double s = -order.alpha_prime() / 2.0;
  if (alpha > 1.0) {
    // ker(q) must carry no weight of p
    const EigenSystem& eq = q.eigen();
    const double cut = q.support_cutoff();
    double kernel_weight = 0.0;
    for (Eigen::Index i = 0; i < eq.values.size(); ++i) {
      if (eq.values(i) <= cut) {
        kernel_weight += (eq.vectors.col(i).adjoint() * p.matrix() * eq.vectors.col(i))(0).real();
      }
    }
    if (kernel_weight > 1e-10 * std::max(p.trace(), 1e-300)) return kInf;
  }
  const Matrix m = matrix_power(q, s).matrix();
  PsdOperator sandwich(Matrix(m * p.matrix() * m));
  return trace_power(sandwich, alpha);
}

double sandwiched_divergence(const PsdOperator& p, const PsdOperator& q,
                             const RenyiOrder& order) {
  if (p.dim() != q.dim()) {
    throw ValidationError("sandwiched_divergence: dimension mismatch");
  }
  const double tr_p = p.trace();
  if (tr_p <= 0.0) {
    throw ValidationError("sandwiched_divergence: tr(p) must be positive");
  }
  if (order.is_infinite()) {
    const EigenSystem& eq = q.eigen();
    const double cut = q.support_cutoff();
    double kernel_weight = 0.0;
    for (Eigen::Index i = 0; i < eq.values.size(); ++i) {
      if (eq.values(i) <= cut) {
        kernel_weight += (eq.vectors.col(i).adjoint() * p.matrix() * eq.vectors.col(i))(0).real();
      }
    }
    if (kernel_weight > 1e-10 * std::max(tr_p, 1e-300)) return kInf;
    const Matrix m = matrix_power(q, -0.5).matrix();
    PsdOperator sandwich(Matrix(m * p.matrix() * m));
    const RealVector& w = sandwich.eigen().values;
    const double lambda_max = w(w.size() - 1);
    if (lambda_max <= 0.0) return -kInf;
    return std::log2(lambda_max);
  }
  const double alpha = order.value();
  const double f = q_alpha(p, q, order);
  if (std::isinf(f)) return kInf;
  if (f <= 0.0) return kInf;  // alpha < 1 with orthogonal supports
  return std::log2(f / tr_p) / (alpha - 1.0);
}

double von_neumann_entropy(const PsdOperator& rho) {
  const RealVector& w = rho.eigen().values;
  const double cut = rho.support_cutoff();
  double h = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > cut) h -= w(i) * std::log2(w(i));
  }
  return h;
}

double von_neumann_conditional(const BipartiteState& rho) {
  PsdOperator rho_b(rho.marginal_b());
  return von_neumann_entropy(rho.density().op()) - von_neumann_entropy(rho_b);
}

double renyi_entropy(const DensityOperator& rho, const RenyiOrder& order) {
  if (order.is_infinite()) {
    const RealVector& w = rho.op().eigen().values;
    return -std::log2(w(w.size() - 1));
  }
  const double alpha = order.value();
  return std::log2(trace_power(rho.op(), alpha)) / (1.0 - alpha);
}

RenyiOrder dual_order(const RenyiOrder& order) { return order.dual(); }

double classical_conditional_renyi(const Eigen::MatrixXd& table, const RenyiOrder& order) {
  if (table.minCoeff() < -1e-12) {
    throw ValidationError("classical_conditional_renyi: negative probability");
  }
  if (order.is_infinite()) return classical_hmin(table);
  const double alpha = order.value();
  double z = 0.0;
  for (int b = 0; b < table.cols(); ++b) {
    double r = 0.0;
    for (int a = 0; a < table.rows(); ++a) {
      const double p = std::max(table(a, b), 0.0);
      if (p > 0.0) r += std::pow(p, alpha);
    }
    if (r > 0.0) z += std::pow(r, 1.0 / alpha);
  }
  return (alpha / (1.0 - alpha)) * std::log2(z);
}

double classical_hmin(const Eigen::MatrixXd& table) {
  double z = 0.0;
  for (int b = 0; b < table.cols(); ++b) z += table.col(b).maxCoeff();
  return -std::log2(z);
}

namespace {

// closed form for trivial conditioning (d_B == 1)
EntropyResult scalar_conditioning(const BipartiteState& rho, const RenyiOrder& order) {
  DensityOperator rho_a(PsdOperator(rho.matrix()));
  return EntropyResult{renyi_entropy(rho_a, order),
                       DensityOperator::maximally_mixed(1),
                       SolverKind::ClosedForm,
                       0,
                       0.0,
                       true};
}

}  // namespace

EntropyResult conditional_entropy_up(const BipartiteState& rho, const RenyiOrder& order,
                                     const SolverConfig& config) {
  if (order.is_infinite()) return hmin(rho);
  if (rho.d_b() == 1) return scalar_conditioning(rho, order);

  EntropyResult best = [&] {
    if (config.use_fixed_point) {
      return solve_fixed_point(rho, order, config);
    }
    return solve_direct_search(rho, order, config);
  }();

  const bool fp_certified =
      config.use_fixed_point && best.residual < config.stationarity_tol;
  bool want_ds = config.use_direct_search &&
                 (config.always_direct_search || !fp_certified);
  if (config.use_fixed_point && want_ds) {
    EntropyResult ds = solve_direct_search(rho, order, config, best.optimizer.matrix());
    const bool agree = std::abs(ds.value - best.value) < config.agreement_tol;
    if (ds.value > best.value) {
      ds.converged = agree || ds.converged;
      best = ds;
    } else {
      best.converged = best.converged || agree;
    }
  }
  if (config.use_grid && rho.d_b() == 2) {
    EntropyResult grid = solve_bloch_grid(rho, order, config.grid_resolution);
    if (grid.value > best.value) {
      grid.converged = best.converged;
      best = grid;
    }
  }
  return best;
}

EntropyResult hmax(const BipartiteState& rho, const SolverConfig& config) {
  return conditional_entropy_up(rho, RenyiOrder(0.5), config);
}

DualityReport duality_check(const BipartiteState& rho, const RenyiOrder& order,
                            const SolverConfig& config) {
  const RenyiOrder beta = order.dual();
  EntropyResult ab = conditional_entropy_up(rho, order, config);

  Purification pur = purify(rho.density().op());
  Matrix rho_ac = reduced_ac(pur.state, rho.d_a(), rho.d_b(), pur.d_c);
  BipartiteState ac(DensityOperator(std::move(rho_ac)), rho.d_a(), pur.d_c);
  EntropyResult c = conditional_entropy_up(ac, beta, config);

  const double alpha_v = order.is_infinite() ? kInf : order.value();
  const double beta_v = beta.is_infinite() ? kInf : beta.value();
  return DualityReport{alpha_v,       beta_v,
                       ab.value,      c.value,
                       std::abs(ab.value + c.value),
                       ab.converged && c.converged};
}

double duality_residual(const BipartiteState& rho, const RenyiOrder& order,
                        const SolverConfig& config) {
  return duality_check(rho, order, config).residual;
}

}  // namespace renyi
