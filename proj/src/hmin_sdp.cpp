#include <cmath>
#include <limits>
#include <vector>

#include "renyi/renyi_entropy.hpp"

namespace renyi {

namespace {

// Min-entropy program: minimize tr X subject to I_A (x) X >= rho and X >= 0,
// with X Hermitian on B. Solved by a log-det barrier with Newton steps over
// the d_B^2 real coordinates of X; the problem is tiny at desk scale, so a
// dedicated solver beats a general SDP dependency.

struct Barrier {
  const Matrix& rho;
  int d_a;
  int d_b;
  std::vector<Matrix> basis;  // orthonormal Hermitian basis of B

  Barrier(const Matrix& rho_in, int da, int db) : rho(rho_in), d_a(da), d_b(db) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < db; ++i) {
      Matrix e = Matrix::Zero(db, db);
      e(i, i) = 1.0;
      basis.push_back(std::move(e));
    }
    for (int i = 0; i < db; ++i) {
      for (int j = i + 1; j < db; ++j) {
        Matrix e = Matrix::Zero(db, db);
        e(i, j) = inv_sqrt2;
        e(j, i) = inv_sqrt2;
        basis.push_back(std::move(e));
        Matrix f = Matrix::Zero(db, db);
        f(i, j) = Complex(0.0, -inv_sqrt2);
        f(j, i) = Complex(0.0, inv_sqrt2);
        basis.push_back(std::move(f));
      }
    }
  }

  int n() const { return d_b * d_b; }

  Matrix embed(const Matrix& x) const {
    Matrix out(d_a * d_b, d_a * d_b);
    out.setZero();
    for (int a = 0; a < d_a; ++a) out.block(a * d_b, a * d_b, d_b, d_b) = x;
    return out;
  }

  Matrix slack(const Matrix& x) const { return embed(x) - rho; }

  static double min_eig(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  static double log_det(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      acc += std::log(es.eigenvalues()(i));
    }
    return acc;
  }

  bool feasible(const Matrix& x) const {
    return min_eig(x) > 0.0 && min_eig(slack(x)) > 0.0;
  }

  double phi(const Matrix& x, double mu) const {
    return x.trace().real() - mu * (log_det(slack(x)) + log_det(x));
  }

  // tr_A of a full operator
  Matrix trace_out_a(const Matrix& m) const {
    Matrix out = Matrix::Zero(d_b, d_b);
    for (int a = 0; a < d_a; ++a) out += m.block(a * d_b, a * d_b, d_b, d_b);
    return out;
  }
};

}  // namespace

EntropyResult hmin(const BipartiteState& rho) {
  const int d_a = rho.d_a();
  const int d_b = rho.d_b();

  if (d_b == 1) {
    // X is scalar: optimum is the largest eigenvalue of rho_A
    PsdOperator rho_a(rho.matrix());
    const RealVector& w = rho_a.eigen().values;
    const double x = w(w.size() - 1);
    return EntropyResult{-std::log2(x), DensityOperator::maximally_mixed(1),
                         SolverKind::ClosedForm, 0, 0.0, true};
  }

  Barrier barrier(rho.matrix(), d_a, d_b);
  const int n = barrier.n();

  // strictly feasible start
  PsdOperator full(rho.matrix());
  const double lambda_max = full.eigen().values(full.dim() - 1);
  Matrix x = 2.0 * std::max(lambda_max, 1e-8) * Matrix::Identity(d_b, d_b);

  double mu = 1.0;
  const double mu_min = 1e-10;
  const double mu_factor = 0.2;
  int newton_total = 0;
  bool stalled = false;

  while (mu > mu_min) {
    for (int inner = 0; inner < 50; ++inner) {
      ++newton_total;
      const Matrix s = barrier.slack(x);
      Eigen::LLT<Matrix> slack_llt(s);
      Eigen::LLT<Matrix> x_llt(x);
      if (slack_llt.info() != Eigen::Success || x_llt.info() != Eigen::Success) {
        stalled = true;
        break;
      }
      const Matrix id_full = Matrix::Identity(d_a * d_b, d_a * d_b);
      const Matrix id_b = Matrix::Identity(d_b, d_b);
      const Matrix g_full = slack_llt.solve(id_full);   // (I (x) X - rho)^-1
      const Matrix x_inv = x_llt.solve(id_b);

      // gradient over the Hermitian basis
      const Matrix grad_m = id_b - mu * (barrier.trace_out_a(g_full) + x_inv);
      Eigen::VectorXd grad(n);
      for (int k = 0; k < n; ++k) {
        grad(k) = (barrier.basis[k].adjoint() * grad_m).trace().real();
      }

      // Hessian: mu tr(G E_k G E_l) terms for both barrier blocks
      std::vector<Matrix> ge(n);
      for (int k = 0; k < n; ++k) {
        ge[k] = g_full * barrier.embed(barrier.basis[k]);
      }
      std::vector<Matrix> xe(n);
      for (int k = 0; k < n; ++k) {
        xe[k] = x_inv * barrier.basis[k];
      }
      // tr(AB) as an elementwise sum to avoid forming the products
      auto trace_prod = [](const Matrix& a, const Matrix& b) {
        return a.cwiseProduct(b.transpose()).sum().real();
      };
      Eigen::MatrixXd hess(n, n);
      for (int k = 0; k < n; ++k) {
        for (int l = k; l < n; ++l) {
          const double v = mu * (trace_prod(ge[k], ge[l]) + trace_prod(xe[k], xe[l]));
          hess(k, l) = v;
          hess(l, k) = v;
        }
      }

      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step_vec = ldlt.solve(-grad);
      const double decrement2 = -grad.dot(step_vec);
      if (!(decrement2 > 0.0)) break;  // numerically flat

      Matrix dx = Matrix::Zero(d_b, d_b);
      for (int k = 0; k < n; ++k) dx += step_vec(k) * barrier.basis[k];

      // backtracking line search staying strictly feasible
      double t = 1.0;
      const double phi0 = barrier.phi(x, mu);
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const Matrix cand = x + t * dx;
        if (barrier.feasible(cand) &&
            barrier.phi(cand, mu) <= phi0 - 0.25 * t * decrement2) {
          x = cand;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
      if (decrement2 < 1e-14) break;
    }
    if (stalled) break;
    mu *= mu_factor;
  }

  const double tr_x = x.trace().real();
  const double feas = std::max(0.0, -Barrier::min_eig(barrier.slack(x)));
  const bool converged = !stalled && mu <= mu_min && feas <= 1e-8;
  return EntropyResult{-std::log2(tr_x),
                       DensityOperator(PsdOperator(Matrix(x / tr_x))),
                       SolverKind::Sdp,
                       newton_total,
                       feas,
                       converged};
}

}  // namespace renyi
