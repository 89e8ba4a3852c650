#include "renyi/bounds.hpp"

#include <cmath>

namespace renyi::bounds {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321;

double log2p1(double x) { return std::log1p(x) / kLn2; }

// shared evaluator for the low-order bound family; callers validate ranges.
// d_exp2 selects d_A^{2(1-a)} (general) vs d_A^{1-a} (classical), and
// denom_d multiplies the (1+eps) in the last term's base by d_A (classical).
double bound_low_formula(double eps, int d_a, double alpha, bool classical) {
  if (eps == 0.0) return 0.0;
  const double one_minus = 1.0 - alpha;
  const double d = static_cast<double>(d_a);
  const double d_term = classical ? std::pow(d, one_minus) : std::pow(d, 2.0 * one_minus);
  const double base = classical ? d * (1.0 + eps) : 1.0 + eps;
  const double inner =
      std::pow(eps, alpha) * d_term - eps / std::pow(base, one_minus);
  return log2p1(eps) + log2p1(inner) / one_minus;
}

}  // namespace

double binary_entropy(double x) {
  if (std::isnan(x) || x < 0.0 || x > 1.0) {
    throw ValidationError("binary_entropy: argument must lie in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log2(x)) - (1.0 - x) * std::log2(1.0 - x);
}

double afw_von_neumann(double epsilon, int d_a) {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("afw_von_neumann: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("afw_von_neumann: d_A must be >= 1");
  if (epsilon == 0.0) return 0.0;
  return 2.0 * epsilon * std::log2(static_cast<double>(d_a)) +
         (1.0 + epsilon) * binary_entropy(epsilon / (1.0 + epsilon));
}

double afw_limit_expression(double epsilon, int d_a) {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("afw_limit_expression: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("afw_limit_expression: d_A must be >= 1");
  if (epsilon == 0.0) return 0.0;
  return 2.0 * epsilon * std::log2(static_cast<double>(d_a)) +
         (1.0 + epsilon) * log2p1(epsilon) - epsilon * std::log2(epsilon);
}

double bound_low(double epsilon, int d_a, double alpha) {
  if (alpha < 0.5 || alpha >= 1.0) {
    throw ValidationError("bound_low: alpha must lie in [1/2, 1)");
  }
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("bound_low: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("bound_low: d_A must be >= 1");
  return bound_low_formula(epsilon, d_a, alpha, false);
}

double bound_low_classical(double epsilon, int d_a, double alpha) {
  if (alpha < 0.5 || alpha >= 1.0) {
    throw ValidationError("bound_low_classical: alpha must lie in [1/2, 1)");
  }
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("bound_low_classical: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("bound_low_classical: d_A must be >= 1");
  return bound_low_formula(epsilon, d_a, alpha, true);
}

double bound_high(double epsilon, int d_a, const RenyiOrder& alpha) {
  if (!alpha.is_infinite() && alpha.value() <= 1.0) {
    throw ValidationError("bound_high: alpha must lie in (1, inf]");
  }
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("bound_high: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("bound_high: d_A must be >= 1");
  const double beta = alpha.dual().value();
  // substituted argument sqrt(2 eps) may exceed 1; evaluated as written
  return bound_low_formula(std::sqrt(2.0 * epsilon), d_a, beta, false);
}

bool bound_high_at_boundary(double epsilon) { return std::sqrt(2.0 * epsilon) >= 1.0; }

double bound_hmin(double epsilon, int d_a) {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("bound_hmin: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("bound_hmin: d_A must be >= 1");
  return log2p1(epsilon * static_cast<double>(d_a) * static_cast<double>(d_a));
}

double bound_jabbour_datta(double epsilon, int d_a, double alpha) {
  if (alpha < 0.5 || alpha >= 1.0) {
    throw ValidationError("bound_jabbour_datta: alpha must lie in [1/2, 1)");
  }
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw ValidationError("bound_jabbour_datta: epsilon must lie in [0, 1]");
  }
  if (d_a < 1) throw ValidationError("bound_jabbour_datta: d_A must be >= 1");
  // at d_A = 1 both entropies vanish; the raw formula is meaningless there
  if (d_a == 1) return 0.0;
  if (epsilon == 0.0) return 0.0;
  const double one_minus = 1.0 - alpha;
  const double inner = std::pow(1.0 - epsilon, alpha) +
                       std::pow(epsilon, alpha) * std::pow(static_cast<double>(d_a - 1), one_minus);
  return std::log2(inner) / one_minus;
}

double leditzky_gap(double fidelity, double alpha) {
  if (alpha < 0.5 || alpha >= 1.0) {
    throw ValidationError("leditzky_gap: alpha must lie in [1/2, 1)");
  }
  if (fidelity < 0.0 || fidelity > 1.0) {
    throw ValidationError("leditzky_gap: fidelity must lie in [0, 1]");
  }
  if (fidelity == 0.0) return -std::numeric_limits<double>::infinity();
  return (2.0 * alpha / (1.0 - alpha)) * std::log2(fidelity);
}

double trivial_diameter(int d_a) { return 2.0 * std::log2(static_cast<double>(d_a)); }

}  // namespace renyi::bounds
