#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "renyi/operator_core.hpp"
#include "renyi/rng.hpp"

using namespace renyi;

namespace {

Matrix random_hermitian(int d, SplitMix64& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  }
  return (g + g.adjoint()) / 2.0;
}

PsdOperator random_psd(int d, SplitMix64& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  }
  return PsdOperator(Matrix(g * g.adjoint() / d));
}

PsdOperator random_density(int d, SplitMix64& rng) {
  PsdOperator p = random_psd(d, rng);
  return PsdOperator(Matrix(p.matrix() / p.trace()));
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("hermitian operator validates and symmetrizes") {
  Matrix ok(2, 2);
  ok << Complex(1.0, 0.0), Complex(0.5, 0.25), Complex(0.5, -0.25), Complex(2.0, 0.0);
  HermitianOperator h(ok);
  CHECK((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);

  Matrix drift = ok;
  drift(0, 1) += Complex(1e-12, -1e-12);  // below tolerance: symmetrized away
  HermitianOperator h2(drift);
  CHECK((h2.matrix() - h2.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);

  Matrix bad = ok;
  bad(0, 1) = Complex(0.7, 0.25);
  CHECK_THROWS_AS(HermitianOperator{bad}, ValidationError);
  CHECK_THROWS_AS(HermitianOperator{Matrix(0, 0)}, ValidationError);
}

TEST_CASE("eig_hermitian basics") {
  EigenSystem id = eig_hermitian(HermitianOperator::identity(2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));

  EigenSystem d31 = eig_hermitian(HermitianOperator(diag2(3.0, 1.0)));
  CHECK(d31.values(0) == doctest::Approx(1.0));
  CHECK(d31.values(1) == doctest::Approx(3.0));

  Matrix pauli_x(2, 2);
  pauli_x << 0.0, 1.0, 1.0, 0.0;
  EigenSystem px = eig_hermitian(HermitianOperator(pauli_x));
  CHECK(px.values(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(px.values(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig_hermitian reconstruction and determinism") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng.next() % 5);
    HermitianOperator h(random_hermitian(d, rng));
    EigenSystem es = eig_hermitian(h);
    const Matrix rebuilt =
        es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
    CHECK((rebuilt - h.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    const Matrix gram = es.vectors.adjoint() * es.vectors;
    CHECK((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
    for (int i = 0; i + 1 < d; ++i) CHECK(es.values(i) <= es.values(i + 1));

    EigenSystem again = eig_hermitian(h);
    CHECK((again.values - es.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((again.vectors - es.vectors).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("matrix_power examples") {
  PsdOperator half(Matrix(Matrix::Identity(2, 2) * 0.5));
  CHECK((matrix_power(half, 2.0).matrix() - Matrix::Identity(2, 2) * 0.25)
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  PsdOperator d40(diag2(4.0, 0.0));
  Matrix pinv_sqrt = matrix_power(d40, -0.5).matrix();
  CHECK(pinv_sqrt(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(pinv_sqrt(1, 1)) < 1e-12);  // kernel stays kernel

  PsdOperator d94(diag2(9.0, 4.0));
  Matrix root = matrix_power(d94, 0.5).matrix();
  CHECK(root(0, 0).real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(root(1, 1).real() == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(matrix_power(d94, std::numeric_limits<double>::infinity()),
                  ValidationError);
}

TEST_CASE("matrix_power composition on full-rank inputs") {
  SplitMix64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    PsdOperator p = random_psd(3, rng);
    const double a = 0.3 + rng.uniform();
    const double b = -0.7 + 1.5 * rng.uniform();
    Matrix lhs = matrix_power(matrix_power(p, a), b).matrix();
    Matrix rhs = matrix_power(p, a * b).matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("tensor examples and index convention") {
  CHECK((tensor(HermitianOperator::identity(2), HermitianOperator::identity(2)).matrix() -
         Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // diag(1,0) (x) diag(0,1) puts the weight at composite index 0*2+1 = 1
  HermitianOperator t =
      tensor(HermitianOperator(diag2(1.0, 0.0)), HermitianOperator(diag2(0.0, 1.0)));
  RealVector expected(4);
  expected << 0.0, 1.0, 0.0, 0.0;
  for (int i = 0; i < 4; ++i) CHECK(t.matrix()(i, i).real() == doctest::Approx(expected(i)));

  HermitianOperator zz =
      tensor(HermitianOperator(diag2(1.0, -1.0)), HermitianOperator(diag2(1.0, -1.0)));
  RealVector zz_expected(4);
  zz_expected << 1.0, -1.0, -1.0, 1.0;
  for (int i = 0; i < 4; ++i) {
    CHECK(zz.matrix()(i, i).real() == doctest::Approx(zz_expected(i)));
  }

  CHECK_THROWS_AS(tensor(HermitianOperator::identity(65), HermitianOperator::identity(65)),
                  ValidationError);
}

TEST_CASE("partial_trace examples and properties") {
  SplitMix64 rng(33);

  // product states factor: tr_B(A (x) B) = A tr(B)
  for (int trial = 0; trial < 20; ++trial) {
    PsdOperator a = random_psd(2, rng);
    PsdOperator b = random_psd(3, rng);
    HermitianOperator t = tensor(a.base(), b.base());
    Matrix kept = partial_trace(t, 2, 3, Subsystem::A).matrix();
    CHECK((kept - a.matrix() * b.trace()).cwiseAbs().maxCoeff() < 1e-10);
    Matrix kept_b = partial_trace(t, 2, 3, Subsystem::B).matrix();
    CHECK((kept_b - b.matrix() * a.trace()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(partial_trace(t, 2, 3, Subsystem::A).trace() ==
          doctest::Approx(t.trace()).epsilon(1e-10));
  }

  // Bell-state marginal is maximally mixed
  Vector bell = Vector::Zero(4);
  bell(0) = 1.0 / std::sqrt(2.0);
  bell(3) = 1.0 / std::sqrt(2.0);
  HermitianOperator proj(Matrix(bell * bell.adjoint()));
  Matrix marg = partial_trace(proj, 2, 2, Subsystem::A).matrix();
  CHECK((marg - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-12);

  Matrix i44 = Matrix::Identity(4, 4) / 4.0;
  Matrix half = partial_trace(HermitianOperator(i44), 2, 2, Subsystem::B).matrix();
  CHECK((half - Matrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(partial_trace(HermitianOperator::identity(4), 3, 2, Subsystem::A),
                  ValidationError);
}

TEST_CASE("trace_distance examples") {
  SplitMix64 rng(44);
  PsdOperator rho = random_density(3, rng);
  CHECK(trace_distance(rho.base(), rho.base()) == 0.0);

  CHECK(trace_distance(HermitianOperator(diag2(1.0, 0.0)),
                       HermitianOperator(diag2(0.0, 1.0))) == doctest::Approx(1.0));

  CHECK(trace_distance(HermitianOperator(diag2(0.75, 0.25)),
                       HermitianOperator(diag2(0.5, 0.5))) ==
        doctest::Approx(0.25).epsilon(1e-12));

  Matrix a(2, 2), b(3, 3);
  a.setIdentity();
  b.setIdentity();
  CHECK_THROWS_AS(trace_distance(HermitianOperator(a), HermitianOperator(b)),
                  ValidationError);
}

TEST_CASE("trace_distance triangle inequality and unitary invariance") {
  SplitMix64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    HermitianOperator a(random_hermitian(3, rng));
    HermitianOperator b(random_hermitian(3, rng));
    HermitianOperator c(random_hermitian(3, rng));
    CHECK(trace_distance(a, c) <=
          trace_distance(a, b) + trace_distance(b, c) + 1e-9);
    CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)).epsilon(1e-12));

    // unitary conjugation preserves the spectrum of the difference
    Matrix g(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) g(i, j) = rng.complex_gaussian();
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = qr.householderQ();
    HermitianOperator ua(Matrix(u * a.matrix() * u.adjoint()));
    HermitianOperator ub(Matrix(u * b.matrix() * u.adjoint()));
    CHECK(std::abs(trace_distance(ua, ub) - trace_distance(a, b)) < 1e-9);
  }
}

TEST_CASE("fidelity examples") {
  SplitMix64 rng(66);
  PsdOperator rho = random_density(4, rng);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(fidelity(PsdOperator(diag2(1.0, 0.0)), PsdOperator(diag2(0.0, 1.0))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  CHECK(fidelity(PsdOperator(diag2(1.0, 0.0)),
                 PsdOperator(Matrix(Matrix::Identity(2, 2) / 2.0))) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("fuchs-van de graaf sandwich") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    PsdOperator rho = random_density(3, rng);
    PsdOperator sigma = random_density(3, rng);
    const double f = fidelity(rho, sigma);
    const double td = trace_distance(rho.base(), sigma.base());
    CHECK(1.0 - f <= td + 1e-9);
    CHECK(td <= std::sqrt(1.0 - f * f) + 1e-8);
  }
}

TEST_CASE("jordan decomposition") {
  auto [p1, n1] = jordan_decomposition(HermitianOperator(diag2(1.0, -1.0)));
  CHECK(p1.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(p1.matrix()(1, 1)) < 1e-14);
  CHECK(n1.matrix()(1, 1).real() == doctest::Approx(1.0));

  auto [p0, n0] = jordan_decomposition(HermitianOperator::zero(3));
  CHECK(p0.matrix().cwiseAbs().maxCoeff() < 1e-14);
  CHECK(n0.matrix().cwiseAbs().maxCoeff() < 1e-14);

  RealVector d(3);
  d << 0.3, -0.1, -0.2;
  auto [p3, n3] = jordan_decomposition(HermitianOperator::diagonal(d));
  CHECK(p3.trace() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(n3.trace() == doctest::Approx(0.3).epsilon(1e-12));

  SplitMix64 rng(88);
  for (int trial = 0; trial < 30; ++trial) {
    HermitianOperator h(random_hermitian(4, rng));
    auto [pos, neg] = jordan_decomposition(h);
    CHECK((pos.matrix() - neg.matrix() - h.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs((pos.matrix() * neg.matrix()).trace()) < 1e-9);
  }

  // traceless differences split evenly: tr(pos) = tr(neg) = trace distance
  for (int trial = 0; trial < 20; ++trial) {
    PsdOperator rho = random_density(3, rng);
    PsdOperator sigma = random_density(3, rng);
    HermitianOperator delta(rho.matrix() - sigma.matrix());
    auto [pos, neg] = jordan_decomposition(delta);
    const double eps = trace_distance(rho.base(), sigma.base());
    CHECK(pos.trace() == doctest::Approx(eps).epsilon(1e-9));
    CHECK(neg.trace() == doctest::Approx(eps).epsilon(1e-9));
  }
}

TEST_CASE("purify") {
  // pure input purifies with a trivial environment
  Vector v(2);
  v << 1.0, 0.0;
  PsdOperator pure(Matrix(v * v.adjoint()));
  Purification p = purify(pure);
  CHECK(p.d_c == 1);
  CHECK((p.marginal() - pure.matrix()).cwiseAbs().maxCoeff() < 1e-10);

  PsdOperator mixed(Matrix(Matrix::Identity(2, 2) / 2.0));
  Purification pm = purify(mixed);
  CHECK(pm.d_c == 2);
  CHECK((pm.marginal() - mixed.matrix()).cwiseAbs().maxCoeff() < 1e-10);

  Purification pd = purify(PsdOperator(diag2(0.9, 0.1)));
  CHECK(pd.d_c == 2);
  CHECK(std::abs(pd.state.norm() - 1.0) < 1e-10);
  CHECK((pd.marginal() - diag2(0.9, 0.1)).cwiseAbs().maxCoeff() < 1e-10);
  // Schmidt weights are the eigenvalues, up to a local unitary on C
  Matrix env = reduced_front(pd.state, 2, 2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(env);
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(es.eigenvalues()(1) == doctest::Approx(0.9).epsilon(1e-10));

  SplitMix64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    PsdOperator rho = random_density(4, rng);
    Purification pr = purify(rho);
    CHECK(trace_distance(HermitianOperator(pr.marginal()), rho.base()) < 1e-8);
  }
}

TEST_CASE("close_purifications") {
  SplitMix64 rng(111);
  PsdOperator rho = random_density(4, rng);
  auto [a, b] = close_purifications(rho, rho);
  CHECK(std::abs(std::abs((a.state.adjoint() * b.state)(0)) - 1.0) < 1e-10);

  auto [o1, o2] = close_purifications(PsdOperator(diag2(1.0, 0.0)),
                                       PsdOperator(diag2(0.0, 1.0)));
  CHECK(std::abs((o1.state.adjoint() * o2.state)(0)) < 1e-12);

  for (int trial = 0; trial < 20; ++trial) {
    PsdOperator r = random_density(4, rng);
    PsdOperator tau = random_density(4, rng);
    // mix toward tau to get a pair at moderate distance
    PsdOperator s(Matrix(0.8 * r.matrix() + 0.2 * tau.matrix()));
    auto [pr, ps] = close_purifications(r, s);
    const double f = fidelity(r, s);
    const double overlap = std::abs((pr.state.adjoint() * ps.state)(0));
    CHECK(overlap == doctest::Approx(f).epsilon(1e-8));
    CHECK((reduced_front(pr.state, 4, pr.d_c) - r.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((reduced_front(ps.state, 4, ps.d_c) - s.matrix()).cwiseAbs().maxCoeff() < 1e-10);

    const double eps = trace_distance(r.base(), s.base());
    HermitianOperator pa(Matrix(pr.projector()));
    HermitianOperator pb(Matrix(ps.projector()));
    const double purification_dist = trace_distance(pa, pb);
    CHECK(purification_dist <= std::sqrt(1.0 - f * f) + 1e-8);
    CHECK(purification_dist <= std::sqrt(2.0 * eps) + 1e-8);
  }
}

TEST_CASE("mccarthy inequality on random psd pairs") {
  SplitMix64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.next() % 5);
    PsdOperator p = random_psd(d, rng);
    PsdOperator q = random_psd(d, rng);
    PsdOperator sum(Matrix(p.matrix() + q.matrix()));
    for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      CHECK(trace_power(sum, a) <= trace_power(p, a) + trace_power(q, a) + 1e-8);
    }
  }
}

TEST_CASE("reduced states of tripartite vectors") {
  SplitMix64 rng(321);
  // build |psi> = |phi_AB> (x) |c> and check both reductions
  Vector phi(4);
  for (int i = 0; i < 4; ++i) phi(i) = rng.complex_gaussian();
  phi.normalize();
  Vector c(3);
  for (int i = 0; i < 3; ++i) c(i) = rng.complex_gaussian();
  c.normalize();
  Vector psi(12);
  for (int s = 0; s < 4; ++s) {
    for (int k = 0; k < 3; ++k) psi(s * 3 + k) = phi(s) * c(k);
  }
  Matrix rho_ab = reduced_front(psi, 4, 3);
  CHECK((rho_ab - phi * phi.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  Matrix rho_ac = reduced_ac(psi, 2, 2, 3);
  // for the product split the AC marginal is rho_A (x) |c><c|
  Matrix rho_a = partial_trace(HermitianOperator(Matrix(phi * phi.adjoint())), 2, 2,
                               Subsystem::A)
                     .matrix();
  HermitianOperator expect = tensor(HermitianOperator(rho_a),
                                    HermitianOperator(Matrix(c * c.adjoint())));
  CHECK((rho_ac - expect.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}
