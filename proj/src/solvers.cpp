#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "renyi/renyi_entropy.hpp"
#include "renyi/rng.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEtaFloor = 1e-14;  // interior floor inside the fixed-point loop

// Conditional-entropy working set: everything the inner loops need, with the
// state pre-split into d_B x d_B blocks (A slow, B fast).
struct Problem {
  Matrix rho;
  int d_a;
  int d_b;
  double alpha;
  double s;  // exponent applied to eta: -alpha'/2 = (1 - alpha) / (2 alpha)

  Problem(const BipartiteState& state, const RenyiOrder& order)
      : rho(state.matrix()),
        d_a(state.d_a()),
        d_b(state.d_b()),
        alpha(order.value()),
        s(-order.alpha_prime() / 2.0) {}

  // S = (I (x) m) rho (I (x) m) assembled blockwise
  Matrix sandwich(const Matrix& m) const {
    Matrix out(d_a * d_b, d_a * d_b);
    for (int a = 0; a < d_a; ++a) {
      for (int a2 = 0; a2 < d_a; ++a2) {
        out.block(a * d_b, a2 * d_b, d_b, d_b) =
            m * rho.block(a * d_b, a2 * d_b, d_b, d_b) * m;
      }
    }
    return out;
  }

  // m = eta^s from an eigendecomposition of eta; eigenvalues are floored at
  // `floor` when positive, and kernel directions (w <= 0) are dropped.
  Matrix eta_power(const Eigen::SelfAdjointEigenSolver<Matrix>& es, double floor) const {
    RealVector w = es.eigenvalues();
    RealVector mapped(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double v = std::max(w(i), floor);
      mapped(i) = v > 0.0 ? std::pow(v, s) : 0.0;
    }
    return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
  }

  // objective g(eta) = (1/(1-alpha)) log2 tr((eta^s rho eta^s)^alpha),
  // evaluated exactly (no interior floor). For alpha > 1 a kernel of eta that
  // carries weight of rho_B makes the objective -inf.
  double objective(const Matrix& eta) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(eta);
    if (alpha > 1.0) {
      const RealVector& w = es.eigenvalues();
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) <= 0.0) {
          const auto v = es.eigenvectors().col(i);
          double weight = 0.0;
          for (int a = 0; a < d_a; ++a) {
            weight += (v.adjoint() * rho.block(a * d_b, a * d_b, d_b, d_b) * v)(0).real();
          }
          if (weight > 1e-14) return -kInf;
        }
      }
    }
    const Matrix m = eta_power(es, 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> ss(sandwich(m));
    double f = 0.0;
    for (Eigen::Index i = 0; i < ss.eigenvalues().size(); ++i) {
      const double lam = ss.eigenvalues()(i);
      if (lam > 0.0) f += std::pow(lam, alpha);
    }
    if (f <= 0.0) return alpha < 1.0 ? -kInf : kInf;
    return std::log2(f) / (1.0 - alpha);
  }

  // one step of the stationarity map: normalize(tr_A[(eta^s rho eta^s)^alpha])
  Matrix map(const Matrix& eta) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(eta);
    const Matrix m = eta_power(es, kEtaFloor);
    Eigen::SelfAdjointEigenSolver<Matrix> ss(sandwich(m));
    RealVector w = ss.eigenvalues().cwiseMax(0.0);
    RealVector powered(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      powered(i) = w(i) > 0.0 ? std::pow(w(i), alpha) : 0.0;
    }
    const Matrix t = ss.eigenvectors() * powered.asDiagonal() * ss.eigenvectors().adjoint();
    Matrix next = Matrix::Zero(d_b, d_b);
    for (int a = 0; a < d_a; ++a) next += t.block(a * d_b, a * d_b, d_b, d_b);
    const double tr = next.trace().real();
    if (!(tr > 0.0)) return Matrix::Identity(d_b, d_b) / d_b;
    return next / tr;
  }

  HermitianOperator marginal_b() const {
    Matrix out = Matrix::Zero(d_b, d_b);
    for (int a = 0; a < d_a; ++a) out += rho.block(a * d_b, a * d_b, d_b, d_b);
    return HermitianOperator(std::move(out));
  }
};

double iterate_distance(const Matrix& a, const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// weighted geometric combination exp((1-theta) log a + theta log b), the
// damping used when the plain map oscillates
Matrix log_mix(const Matrix& a, const Matrix& b, double theta) {
  auto logm = [](const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    RealVector w = es.eigenvalues();
    RealVector lw(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) lw(i) = std::log(std::max(w(i), 1e-300));
    return Matrix(es.eigenvectors() * lw.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Matrix x = (1.0 - theta) * logm(a) + theta * logm(b);
  Eigen::SelfAdjointEigenSolver<Matrix> es((x + x.adjoint()) / 2.0);
  RealVector w = es.eigenvalues();
  RealVector ew(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) ew(i) = std::exp(w(i));
  Matrix out = es.eigenvectors() * ew.asDiagonal() * es.eigenvectors().adjoint();
  return out / out.trace().real();
}

Matrix floor_state(const Matrix& eta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(eta);
  RealVector w = es.eigenvalues().cwiseMax(kEtaFloor);
  Matrix out = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  return out / out.trace().real();
}

EntropyResult make_result(const Problem& prob, const Matrix& eta, SolverKind kind,
                          int iterations, double residual, bool converged) {
  return EntropyResult{prob.objective(eta),
                       DensityOperator(PsdOperator(Matrix(eta))),
                       kind,
                       iterations,
                       residual,
                       converged};
}

}  // namespace

EntropyResult solve_fixed_point(const BipartiteState& rho, const RenyiOrder& order,
                                const SolverConfig& config) {
  if (order.is_infinite()) {
    throw ValidationError("solve_fixed_point: order must be finite");
  }
  Problem prob(rho, order);
  Matrix eta = floor_state(prob.marginal_b().matrix());
  // damping weight: undamped for alpha <= 1; 1/alpha cancels the dominant
  // oscillation mode for alpha > 1 (exact in the commuting case)
  double theta = std::min(1.0, 1.0 / prob.alpha);
  double prev_step = kInf;
  double window_step = kInf;
  int rising = 0;
  int iter = 0;
  double step = kInf;
  for (; iter < config.fp_max_iters; ++iter) {
    const Matrix mapped = prob.map(eta);
    const Matrix next = theta < 1.0 ? log_mix(eta, mapped, theta) : mapped;
    step = iterate_distance(next, eta);
    eta = next;
    if (step < config.fp_step_tol) break;
    if (step > prev_step * (1.0 + 1e-12)) {
      if (++rising >= 3 && theta > 0.05) {
        theta *= 0.5;
        rising = 0;
      }
    } else {
      rising = 0;
    }
    prev_step = step;
    // sublinear crawl (optimizer on a face of the state space): hand over to
    // the fallback search instead of burning the iteration budget
    if ((iter & 255) == 255) {
      if (step > 0.25 * window_step) break;
      window_step = step;
    }
  }
  const double residual = iterate_distance(prob.map(eta), eta);
  const bool converged = residual < config.stationarity_tol;
  return make_result(prob, eta, SolverKind::FixedPoint, iter, residual, converged);
}

// --- Nelder-Mead over the Cholesky-style parametrization --------------------

namespace {

// eta = L L^dag / tr(L L^dag) with L lower triangular: d_b real diagonal
// entries followed by re/im pairs for the strict lower triangle.
Matrix eta_from_params(const std::vector<double>& x, int d_b) {
  Matrix l = Matrix::Zero(d_b, d_b);
  int k = 0;
  for (int i = 0; i < d_b; ++i) l(i, i) = x[k++];
  for (int i = 0; i < d_b; ++i) {
    for (int j = 0; j < i; ++j) {
      l(i, j) = Complex(x[k], x[k + 1]);
      k += 2;
    }
  }
  Matrix eta = l * l.adjoint();
  const double tr = eta.trace().real();
  if (!(tr > 1e-300)) return Matrix::Identity(d_b, d_b) / d_b;
  return eta / tr;
}

std::vector<double> params_from_eta(const Matrix& eta) {
  const int d_b = static_cast<int>(eta.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(eta);
  RealVector w = es.eigenvalues().cwiseMax(1e-12);
  Matrix sqrt_eta = es.eigenvectors() * w.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  // reduce the square root to lower-triangular form via QR of its adjoint,
  // then rotate column phases so the diagonal is real
  Eigen::HouseholderQR<Matrix> qr(sqrt_eta.adjoint());
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  Matrix l = r.adjoint();
  for (int j = 0; j < d_b; ++j) {
    const double a = std::abs(l(j, j));
    if (a > 0.0) l.col(j) *= std::conj(l(j, j)) / a;
  }
  std::vector<double> x(static_cast<size_t>(d_b) * d_b);
  int k = 0;
  for (int i = 0; i < d_b; ++i) x[k++] = l(i, i).real();
  for (int i = 0; i < d_b; ++i) {
    for (int j = 0; j < i; ++j) {
      x[k++] = l(i, j).real();
      x[k++] = l(i, j).imag();
    }
  }
  return x;
}

struct SimplexResult {
  std::vector<double> best_x;
  double best_f;
  int evals;
};

// standard Nelder-Mead on R^n, minimizing
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, int max_iters) {
  const int n = static_cast<int>(x0.size());
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) {
    xs[i + 1][i] += (std::abs(x0[i]) > 1e-8) ? 0.05 * std::abs(x0[i]) : 0.00025;
  }
  int evals = 0;
  for (int i = 0; i <= n; ++i) fs[i] = (++evals, f(xs[i]));

  auto order_simplex = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> nxs(n + 1);
    std::vector<double> nfs(n + 1);
    for (int i = 0; i <= n; ++i) {
      nxs[i] = xs[idx[i]];
      nfs[i] = fs[idx[i]];
    }
    xs = std::move(nxs);
    fs = std::move(nfs);
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    order_simplex();
    if (std::abs(fs[n] - fs[0]) < 1e-13 * (1.0 + std::abs(fs[0]))) break;
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) centroid[j] += xs[i][j] / n;
    }
    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = centroid[j] + t * (xs[n][j] - centroid[j]);
      return p;
    };
    std::vector<double> xr = blend(-1.0);
    double fr = (++evals, f(xr));
    if (fr < fs[0]) {
      std::vector<double> xe = blend(-2.0);
      double fe = (++evals, f(xe));
      if (fe < fr) {
        xs[n] = std::move(xe);
        fs[n] = fe;
      } else {
        xs[n] = std::move(xr);
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = std::move(xr);
      fs[n] = fr;
    } else {
      const bool outside = fr < fs[n];
      std::vector<double> xc = blend(outside ? -0.5 : 0.5);
      double fc = (++evals, f(xc));
      if (fc < std::min(fr, fs[n])) {
        xs[n] = std::move(xc);
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j) xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          fs[i] = (++evals, f(xs[i]));
        }
      }
    }
  }
  order_simplex();
  return {xs[0], fs[0], evals};
}

}  // namespace

EntropyResult solve_direct_search(const BipartiteState& rho, const RenyiOrder& order,
                                  const SolverConfig& config, const Matrix& init) {
  if (order.is_infinite()) {
    throw ValidationError("solve_direct_search: order must be finite");
  }
  Problem prob(rho, order);
  const int n = rho.d_b() * rho.d_b();
  SplitMix64 rng(config.seed);

  auto objective = [&](const std::vector<double>& x) {
    const double g = prob.objective(eta_from_params(x, rho.d_b()));
    return std::isfinite(g) ? -g : kInf;
  };

  double best_f = kInf;
  std::vector<double> best_x;
  int total_evals = 0;
  for (int restart = 0; restart < std::max(1, config.ds_restarts); ++restart) {
    std::vector<double> x0;
    if (restart == 0) {
      Matrix seed_eta = init.size() > 0 ? init : floor_state(prob.marginal_b().matrix());
      // stage one: optimize the spectrum alone in the seed's eigenbasis.
      // Near-boundary optima put the hard direction in the eigenvalues, and
      // the full simplex is slow to follow it; d_B log-scale parameters are
      // not.
      Eigen::SelfAdjointEigenSolver<Matrix> es(seed_eta);
      const Matrix basis = es.eigenvectors();
      std::vector<double> logw(rho.d_b());
      for (int i = 0; i < rho.d_b(); ++i) {
        logw[i] = std::log(std::max(es.eigenvalues()(i), 1e-16));
      }
      auto spectrum_obj = [&](const std::vector<double>& lw) {
        RealVector w(rho.d_b());
        for (int i = 0; i < rho.d_b(); ++i) w(i) = std::exp(std::min(lw[i], 50.0));
        Matrix eta = basis * w.asDiagonal() * basis.adjoint();
        eta /= eta.trace().real();
        const double g = prob.objective(eta);
        return std::isfinite(g) ? -g : kInf;
      };
      SimplexResult spec =
          nelder_mead(spectrum_obj, std::move(logw), 200 * rho.d_b());
      total_evals += spec.evals;
      RealVector w(rho.d_b());
      for (int i = 0; i < rho.d_b(); ++i) w(i) = std::exp(std::min(spec.best_x[i], 50.0));
      Matrix refined = basis * w.asDiagonal() * basis.adjoint();
      refined /= refined.trace().real();
      x0 = params_from_eta(refined);
    } else {
      x0.resize(n);
      for (int i = 0; i < n; ++i) x0[i] = rng.gaussian();
    }
    SimplexResult r = nelder_mead(objective, std::move(x0), config.ds_max_iters);
    total_evals += r.evals;
    // second pass with a fresh simplex; flat valleys need the restart
    SimplexResult r2 = nelder_mead(objective, r.best_x, config.ds_max_iters);
    total_evals += r2.evals;
    if (r2.best_f < r.best_f) r = std::move(r2);
    if (r.best_f < best_f) {
      best_f = r.best_f;
      best_x = std::move(r.best_x);
    }
  }
  Matrix eta = eta_from_params(best_x, rho.d_b());
  // certify via the stationarity map; the simplex may stop short of machine
  // stationarity, so the certificate is advisory here
  const Matrix eta_floored = floor_state(eta);
  const double residual = iterate_distance(prob.map(eta_floored), eta_floored);
  return make_result(prob, eta, SolverKind::DirectSearch, total_evals, residual,
                     residual < config.stationarity_tol);
}

// --- Bloch-ball grid oracle (d_B == 2) --------------------------------------

namespace detail {

namespace {

// y^2 + b y + c = 0 with real roots; cancellation-stable
void solve_quadratic(double b, double c, double* out) {
  const double disc = std::max(b * b - 4.0 * c, 0.0);
  const double sq = std::sqrt(disc);
  const double y1 = (b >= 0.0) ? (-b - sq) / 2.0 : (-b + sq) / 2.0;
  const double y2 = (y1 != 0.0) ? c / y1 : -b - y1;
  out[0] = y1;
  out[1] = y2;
}

// all real roots of x^3 + b2 x^2 + b1 x + b0 (clamped trigonometric form)
void solve_cubic_real(double b2, double b1, double b0, double* out) {
  const double sh = b2 / 3.0;
  const double cp = b1 - b2 * b2 / 3.0;
  const double cq = b0 - b1 * b2 / 3.0 + 2.0 * b2 * b2 * b2 / 27.0;
  const double m = -cp / 3.0;
  if (m <= 0.0) {
    // near-triple root; spread is below resolution
    const double disc = std::sqrt(std::max(cq * cq / 4.0 + cp * cp * cp / 27.0, 0.0));
    const double u = std::cbrt(-cq / 2.0 + disc);
    const double v = std::cbrt(-cq / 2.0 - disc);
    out[0] = out[1] = out[2] = u + v - sh;
    return;
  }
  const double rr = 2.0 * std::sqrt(m);
  const double arg = std::clamp((3.0 * cq) / (cp * rr), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  for (int k = 0; k < 3; ++k) {
    out[k] = rr * std::cos(phi - 2.0943951023931953 * k) - sh;
  }
}

}  // namespace

std::array<double, 4> hermitian4_eigenvalues(const Matrix& s) {
  // power sums via one matrix square
  const Matrix s2 = s * s;
  const double p1 = s.trace().real();
  const double p2 = s2.trace().real();
  double p3 = 0.0, p4 = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      p3 += (s2(i, j) * std::conj(s(i, j))).real();
      p4 += std::norm(s2(i, j));
    }
  }
  if (!(p2 > 0.0)) return {0.0, 0.0, 0.0, 0.0};
  const double scale = std::sqrt(p2);
  const double q1 = p1 / scale, q2 = 1.0, q3 = p3 / (scale * scale * scale),
               q4 = p4 / (scale * scale * scale * scale);
  // Newton's identities: char poly x^4 - e1 x^3 + e2 x^2 - e3 x + e4
  const double e1 = q1;
  const double e2 = (e1 * q1 - q2) / 2.0;
  const double e3 = (e2 * q1 - e1 * q2 + q3) / 3.0;
  const double e4 = (e3 * q1 - e2 * q2 + e1 * q3 - q4) / 4.0;

  std::array<double, 4> roots{};
  const double ztol = 1e-13;
  if (std::abs(e4) < ztol) {
    // deflate roots at zero instead of pushing a degenerate quartic through
    // the resolvent (multiple zero eigenvalues are exactly this case)
    if (std::abs(e3) < ztol) {
      if (std::abs(e2) < ztol) {
        roots = {0.0, 0.0, 0.0, e1};
      } else {
        roots[0] = roots[1] = 0.0;
        solve_quadratic(-e1, e2, roots.data() + 2);
      }
    } else {
      roots[0] = 0.0;
      solve_cubic_real(-e1, e2, -e3, roots.data() + 1);
    }
  } else {
    // depress: x = y + h
    const double h = e1 / 4.0;
    const double h2 = h * h;
    const double p = e2 - 6.0 * h2;
    const double q = -e3 + 2.0 * e2 * h - 8.0 * h * h2;
    const double r = e4 - e3 * h + e2 * h2 - 3.0 * h2 * h2;

    if (std::abs(q) < 1e-14) {
      double ys[2];
      solve_quadratic(p, r, ys);  // z^2 + p z + r with z = y^2
      const double a = std::sqrt(std::max(ys[0], 0.0));
      const double b = std::sqrt(std::max(ys[1], 0.0));
      roots = {a, -a, b, -b};
    } else {
      // resolvent cubic z^3 + 2p z^2 + (p^2 - 4r) z - q^2, largest root
      double zs[3];
      solve_cubic_real(2.0 * p, p * p - 4.0 * r, -q * q, zs);
      const double z = std::max({zs[0], zs[1], zs[2], 0.0});
      const double u = std::sqrt(z);
      const double half = (p + z) / 2.0;
      double w1 = half, w2 = half;
      if (u > 1e-12) {
        w1 -= q / (2.0 * u);
        w2 += q / (2.0 * u);
      }
      solve_quadratic(u, w1, roots.data());
      solve_quadratic(-u, w2, roots.data() + 2);
    }
    for (auto& y : roots) y += h;
  }

  // guarded Newton polish on the characteristic polynomial
  for (auto& x : roots) {
    for (int it = 0; it < 2; ++it) {
      const double px = (((x - e1) * x + e2) * x - e3) * x + e4;
      const double dpx = ((4.0 * x - 3.0 * e1) * x + 2.0 * e2) * x - e3;
      if (std::abs(dpx) < 1e-8) break;  // multiple root: leave the deflated value
      const double step = px / dpx;
      if (std::abs(step) > 0.1) break;
      x -= step;
    }
  }
  // restore the exact trace; multiple roots scatter symmetrically and this
  // cancels the first-order error of their trace powers
  const double drift = (e1 - (roots[0] + roots[1] + roots[2] + roots[3])) / 4.0;
  for (auto& x : roots) x = (x + drift) * scale;
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace detail

EntropyResult solve_bloch_grid(const BipartiteState& rho, const RenyiOrder& order,
                               int resolution) {
  if (order.is_infinite()) {
    throw ValidationError("solve_bloch_grid: order must be finite");
  }
  if (rho.d_b() != 2) {
    throw ValidationError("solve_bloch_grid: requires d_B == 2");
  }
  if (resolution < 2) {
    throw ValidationError("solve_bloch_grid: resolution must be >= 2");
  }
  Problem prob(rho, order);
  const int d_a = rho.d_a();
  const int d = d_a * 2;
  const double alpha = prob.alpha;
  const double s = prob.s;

  // cache the 2x2 B-blocks of rho
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(d_a) * d_a);
  for (int a = 0; a < d_a; ++a) {
    for (int a2 = 0; a2 < d_a; ++a2) {
      blocks.push_back(prob.rho.block(a * 2, a2 * 2, 2, 2));
    }
  }

  const double step = 2.0 / (resolution - 1);
  double best_g = -kInf;
  double best_x = 0.0, best_y = 0.0, best_z = 0.0;
  Matrix sand(d, d);
  Matrix m(2, 2);
  const bool fast_square = alpha == 2.0;

  for (int iz = 0; iz < resolution; ++iz) {
    const double z = -1.0 + iz * step;
    for (int iy = 0; iy < resolution; ++iy) {
      const double y = -1.0 + iy * step;
      for (int ix = 0; ix < resolution; ++ix) {
        const double x = -1.0 + ix * step;
        const double r2 = x * x + y * y + z * z;
        if (r2 > 1.0 + 1e-12) continue;
        const double r = std::sqrt(r2);
        const double lp = (1.0 + r) / 2.0;
        const double lm = (1.0 - r) / 2.0;
        if (alpha > 1.0 && lm <= 0.0) continue;  // negative powers blow up at the boundary
        // m = eta^s expanded in the Pauli basis
        const double fp = std::pow(lp, s);
        const double fm = lm > 0.0 ? std::pow(lm, s) : 0.0;
        const double ci = (fp + fm) / 2.0;
        const double cr = r > 0.0 ? (fp - fm) / (2.0 * r) : 0.0;
        m(0, 0) = ci + cr * z;
        m(1, 1) = ci - cr * z;
        m(0, 1) = Complex(cr * x, -cr * y);
        m(1, 0) = Complex(cr * x, cr * y);

        for (int a = 0; a < d_a; ++a) {
          for (int a2 = 0; a2 < d_a; ++a2) {
            sand.block(a * 2, a2 * 2, 2, 2).noalias() =
                m * blocks[static_cast<size_t>(a) * d_a + a2] * m;
          }
        }
        double f;
        if (fast_square) {
          f = sand.squaredNorm();
        } else if (d == 4 && lm > 1e-8) {
          // quartic closed form away from the boundary shell, where the
          // sandwich stays comfortably full rank; eigenvalues below the
          // support cutoff are dropped exactly as in trace_power
          const auto lams = detail::hermitian4_eigenvalues(sand);
          const double cut = tol::support_rel * std::max(lams[3], 1.0);
          f = 0.0;
          for (double lam : lams) {
            if (lam > cut) f += std::pow(lam, alpha);
          }
        } else {
          Eigen::SelfAdjointEigenSolver<Matrix> es(sand, Eigen::EigenvaluesOnly);
          const Eigen::Index top = es.eigenvalues().size() - 1;
          const double cut = tol::support_rel * std::max(es.eigenvalues()(top), 1.0);
          f = 0.0;
          for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double lam = es.eigenvalues()(i);
            if (lam > cut) f += std::pow(lam, alpha);
          }
        }
        if (!(f > 0.0)) continue;
        const double g = std::log2(f) / (1.0 - alpha);
        if (g > best_g) {
          best_g = g;
          best_x = x;
          best_y = y;
          best_z = z;
        }
      }
    }
  }

  Matrix eta(2, 2);
  eta << Complex((1.0 + best_z) / 2.0, 0.0), Complex(best_x / 2.0, -best_y / 2.0),
      Complex(best_x / 2.0, best_y / 2.0), Complex((1.0 - best_z) / 2.0, 0.0);
  const int total = resolution * resolution * resolution;
  return EntropyResult{best_g,
                       DensityOperator(PsdOperator(Matrix(eta))),
                       SolverKind::GridOracle,
                       total,
                       step,  // resolution-limited; report the lattice spacing
                       true};
}

}  // namespace renyi
