#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace renyi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Thrown when an input violates a documented precondition.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative routine fails to converge.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, int iterations)
      : std::runtime_error(what), iterations(iterations) {}
  int iterations;
};

// Tolerances shared across the linear-algebra layer.
namespace tol {
inline constexpr double hermiticity = 1e-10;      // max |H - H^dag| entrywise
inline constexpr double psd_floor = 1e-10;        // min eig >= -psd_floor * max(eig_max, 1)
inline constexpr double support_rel = 1e-12;      // eigenvalues below support_rel * max(eig_max, 1) are kernel
inline constexpr double reconstruction = 1e-9;
inline constexpr int max_tensor_dim = 4096;
}  // namespace tol

// Dense Hermitian matrix. Construction symmetrizes (H + H^dag)/2 when the
// asymmetry is below tolerance and rejects otherwise, so downstream code can
// rely on exact Hermiticity.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m);

  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);
  // Diagonal matrix from real entries.
  static HermitianOperator diagonal(const RealVector& d);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

 private:
  Matrix mat_;
};

// Eigendecomposition with eigenvalues ascending and unitary eigenvectors.
struct EigenSystem {
  RealVector values;
  Matrix vectors;
};

EigenSystem eig_hermitian(const HermitianOperator& h);

// Positive semidefinite operator. Validates the spectrum eagerly and keeps
// the eigendecomposition, since nearly every consumer needs it.
class PsdOperator {
 public:
  explicit PsdOperator(HermitianOperator h);
  explicit PsdOperator(Matrix m) : PsdOperator(HermitianOperator(std::move(m))) {}

  static PsdOperator identity(int dim);

  const HermitianOperator& base() const { return base_; }
  const Matrix& matrix() const { return base_.matrix(); }
  int dim() const { return base_.dim(); }
  double trace() const { return base_.trace(); }
  const EigenSystem& eigen() const { return eigen_; }

  // support cutoff: eigenvalues at or below this are treated as kernel
  double support_cutoff() const;
  int rank() const;

 private:
  HermitianOperator base_;
  EigenSystem eigen_;
};

// Eigenvalues mapped lambda -> lambda^exponent on the support, 0 on the
// kernel (pseudo-inverse convention for negative exponents).
PsdOperator matrix_power(const PsdOperator& p, double exponent);

// tr(p^exponent) over the support without forming the matrix.
double trace_power(const PsdOperator& p, double exponent);

// Kronecker product with A as the slower index: (a,b) -> a * dim_b + b.
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

enum class Subsystem { A, B };

// Partial trace of an operator on A (x) B with the composite index a*d_B + b.
HermitianOperator partial_trace(const HermitianOperator& op, int d_a, int d_b,
                                Subsystem keep);

// (1/2) ||a - b||_1
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);

// Uhlmann fidelity F = || sqrt(rho) sqrt(sigma) ||_1. Inputs need not be
// normalized (used with I (x) sigma in H_max cross-checks).
double fidelity(const PsdOperator& rho, const PsdOperator& sigma);

// delta = pos - neg with pos * neg = 0.
std::pair<PsdOperator, PsdOperator> jordan_decomposition(const HermitianOperator& delta);

// A pure vector on system (x) purifying space C, composite index s * d_C + c.
struct Purification {
  Vector state;
  int d_c;

  int system_dim() const { return static_cast<int>(state.size()) / d_c; }
  // density operator of the pure state
  Matrix projector() const { return state * state.adjoint(); }
  // partial trace over C
  Matrix marginal() const;
};

// Eigendecomposition purification with d_C = rank(rho).
Purification purify(const PsdOperator& rho);

// Uhlmann-optimal purification pair into a common d_C = dim purifying space:
// the overlap magnitude of the two vectors equals F(rho, sigma).
std::pair<Purification, Purification> close_purifications(const PsdOperator& rho,
                                                          const PsdOperator& sigma);

// Reduced states of a pure tripartite vector indexed ((a*d_b + b)*d_c + c).
Matrix reduced_front(const Vector& psi, int d_front, int d_back);  // trace out the back factor
Matrix reduced_ac(const Vector& psi, int d_a, int d_b, int d_c);   // trace out the middle factor

}  // namespace renyi
