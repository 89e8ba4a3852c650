#include "renyi/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace renyi {

HermitianOperator::HermitianOperator(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ValidationError("HermitianOperator: matrix must be square and non-empty");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::hermiticity) {
    throw ValidationError("HermitianOperator: asymmetry " + std::to_string(asym) +
                          " exceeds tolerance");
  }
  // symmetrize so floating-point drift does not propagate
  mat_ = ((m + m.adjoint()) / 2.0).eval();
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
  return HermitianOperator(std::move(m));
}

EigenSystem eig_hermitian(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: eigensolver failed to converge", -1);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PsdOperator::PsdOperator(HermitianOperator h) : base_(std::move(h)), eigen_(eig_hermitian(base_)) {
  const double lambda_max = eigen_.values(eigen_.values.size() - 1);
  const double floor = -tol::psd_floor * std::max(lambda_max, 1.0);
  if (eigen_.values(0) < floor) {
    throw ValidationError("PsdOperator: eigenvalue " + std::to_string(eigen_.values(0)) +
                          " below PSD tolerance");
  }
}

PsdOperator PsdOperator::identity(int dim) {
  return PsdOperator(HermitianOperator::identity(dim));
}

double PsdOperator::support_cutoff() const {
  const double lambda_max = eigen_.values(eigen_.values.size() - 1);
  return tol::support_rel * std::max(lambda_max, 1.0);
}

int PsdOperator::rank() const {
  const double cut = support_cutoff();
  int r = 0;
  for (Eigen::Index i = 0; i < eigen_.values.size(); ++i) {
    if (eigen_.values(i) > cut) ++r;
  }
  return r;
}

PsdOperator matrix_power(const PsdOperator& p, double exponent) {
  if (!std::isfinite(exponent)) {
    throw ValidationError("matrix_power: exponent must be finite");
  }
  const EigenSystem& es = p.eigen();
  const double cut = p.support_cutoff();
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    mapped(i) = es.values(i) > cut ? std::pow(es.values(i), exponent) : 0.0;
  }
  Matrix out = es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
  return PsdOperator(HermitianOperator(std::move(out)));
}

double trace_power(const PsdOperator& p, double exponent) {
  const EigenSystem& es = p.eigen();
  const double cut = p.support_cutoff();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) > cut) acc += std::pow(es.values(i), exponent);
  }
  return acc;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  const int da = a.dim();
  const int db = b.dim();
  if (static_cast<long>(da) * db > tol::max_tensor_dim) {
    throw ValidationError("tensor: result dimension exceeds configured maximum");
  }
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return HermitianOperator(std::move(out));
}

HermitianOperator partial_trace(const HermitianOperator& op, int d_a, int d_b,
                                Subsystem keep) {
  if (op.dim() != d_a * d_b) {
    throw ValidationError("partial_trace: dims do not factor the operator dimension");
  }
  const Matrix& m = op.matrix();
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(d_a, d_a);
    for (int a = 0; a < d_a; ++a) {
      for (int a2 = 0; a2 < d_a; ++a2) {
        Complex acc = 0.0;
        for (int b = 0; b < d_b; ++b) acc += m(a * d_b + b, a2 * d_b + b);
        out(a, a2) = acc;
      }
    }
    return HermitianOperator(std::move(out));
  }
  Matrix out = Matrix::Zero(d_b, d_b);
  for (int b = 0; b < d_b; ++b) {
    for (int b2 = 0; b2 < d_b; ++b2) {
      Complex acc = 0.0;
      for (int a = 0; a < d_a; ++a) acc += m(a * d_b + b, a * d_b + b2);
      out(b, b2) = acc;
    }
  }
  return HermitianOperator(std::move(out));
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("trace_distance: dimension mismatch");
  }
  HermitianOperator delta(a.matrix() - b.matrix());
  EigenSystem es = eig_hermitian(delta);
  return 0.5 * es.values.cwiseAbs().sum();
}

double fidelity(const PsdOperator& rho, const PsdOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError("fidelity: dimension mismatch");
  }
  const Matrix sr = matrix_power(rho, 0.5).matrix();
  const Matrix ss = matrix_power(sigma, 0.5).matrix();
  Eigen::JacobiSVD<Matrix> svd(sr * ss);
  return svd.singularValues().sum();
}

std::pair<PsdOperator, PsdOperator> jordan_decomposition(const HermitianOperator& delta) {
  EigenSystem es = eig_hermitian(delta);
  RealVector pos = es.values.cwiseMax(0.0);
  RealVector neg = (-es.values).cwiseMax(0.0);
  Matrix p = es.vectors * pos.asDiagonal() * es.vectors.adjoint();
  Matrix n = es.vectors * neg.asDiagonal() * es.vectors.adjoint();
  return {PsdOperator(HermitianOperator(std::move(p))),
          PsdOperator(HermitianOperator(std::move(n)))};
}

Matrix Purification::marginal() const {
  const int d = system_dim();
  // rows index the system, columns index C
  Eigen::Map<const Matrix> psi(state.data(), d_c, d);  // column-major: (c, s)
  Matrix x = psi.transpose();                          // (s, c) with psi[s*d_c + c]
  return x * x.adjoint();
}

Purification purify(const PsdOperator& rho) {
  const EigenSystem& es = rho.eigen();
  const double cut = rho.support_cutoff();
  const int d = rho.dim();
  std::vector<int> keep;
  for (int i = 0; i < d; ++i) {
    if (es.values(i) > cut) keep.push_back(i);
  }
  const int d_c = static_cast<int>(keep.size());
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d_c);
  for (int c = 0; c < d_c; ++c) {
    const double w = std::sqrt(es.values(keep[c]));
    for (int s = 0; s < d; ++s) {
      psi(static_cast<Eigen::Index>(s) * d_c + c) = w * es.vectors(s, keep[c]);
    }
  }
  return {std::move(psi), d_c};
}

namespace {

// psi[s * d + c] = X(s, c) for a d x d coefficient matrix X
Vector vec_rowmajor(const Matrix& x) {
  const int d = static_cast<int>(x.rows());
  Vector psi(static_cast<Eigen::Index>(d) * x.cols());
  for (int s = 0; s < d; ++s) {
    for (int c = 0; c < x.cols(); ++c) psi(static_cast<Eigen::Index>(s) * x.cols() + c) = x(s, c);
  }
  return psi;
}

}  // namespace

std::pair<Purification, Purification> close_purifications(const PsdOperator& rho,
                                                          const PsdOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError("close_purifications: dimension mismatch");
  }
  const int d = rho.dim();
  const Matrix sr = matrix_power(rho, 0.5).matrix();
  const Matrix ss = matrix_power(sigma, 0.5).matrix();
  // Uhlmann pairing: with psi_rho = vec(sqrt(rho) U) and psi_sigma = vec(sqrt(sigma)),
  // the overlap is tr(sqrt(sigma) sqrt(rho) U); the polar unitary of
  // sqrt(sigma) sqrt(rho) maximizes it at F(rho, sigma).
  Eigen::JacobiSVD<Matrix> svd(ss * sr, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u_opt = svd.matrixV() * svd.matrixU().adjoint();
  Purification pr{vec_rowmajor(sr * u_opt), d};
  Purification ps{vec_rowmajor(ss), d};
  return {std::move(pr), std::move(ps)};
}

Matrix reduced_front(const Vector& psi, int d_front, int d_back) {
  if (psi.size() != static_cast<Eigen::Index>(d_front) * d_back) {
    throw ValidationError("reduced_front: dims do not factor the vector length");
  }
  Matrix x(d_front, d_back);
  for (int s = 0; s < d_front; ++s) {
    for (int c = 0; c < d_back; ++c) x(s, c) = psi(static_cast<Eigen::Index>(s) * d_back + c);
  }
  return x * x.adjoint();
}

Matrix reduced_ac(const Vector& psi, int d_a, int d_b, int d_c) {
  if (psi.size() != static_cast<Eigen::Index>(d_a) * d_b * d_c) {
    throw ValidationError("reduced_ac: dims do not factor the vector length");
  }
  Matrix out = Matrix::Zero(d_a * d_c, d_a * d_c);
  auto at = [&](int a, int b, int c) {
    return psi((static_cast<Eigen::Index>(a) * d_b + b) * d_c + c);
  };
  for (int a = 0; a < d_a; ++a) {
    for (int c = 0; c < d_c; ++c) {
      for (int a2 = 0; a2 < d_a; ++a2) {
        for (int c2 = 0; c2 < d_c; ++c2) {
          Complex acc = 0.0;
          for (int b = 0; b < d_b; ++b) acc += at(a, b, c) * std::conj(at(a2, b, c2));
          out(a * d_c + c, a2 * d_c + c2) = acc;
        }
      }
    }
  }
  return out;
}

}  // namespace renyi
