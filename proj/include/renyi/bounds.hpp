#pragma once

#include "renyi/renyi_order.hpp"

namespace renyi::bounds {

struct BoundInputs {
  double epsilon = 0.0;
  int d_a = 1;
  RenyiOrder order = RenyiOrder(2.0);
};

// h(x) = -x log2 x - (1-x) log2(1-x), continuously extended to h(0)=h(1)=0.
double binary_entropy(double x);

// 2 eps log2(d_A) + (1+eps) h(eps/(1+eps))
double afw_von_neumann(double epsilon, int d_a);

// 2 eps log2(d_A) + (1+eps) log2(1+eps) - eps log2(eps); identical to
// afw_von_neumann by expanding h.
double afw_limit_expression(double epsilon, int d_a);

// log2(1+eps) + (1/(1-a)) log2(1 + eps^a d_A^{2(1-a)} - eps/(1+eps)^{1-a}),
// valid for a in [1/2, 1).
double bound_low(double epsilon, int d_a, double alpha);

// strengthened variant for states classical on A (or on B):
// log2(1+eps) + (1/(1-a)) log2(1 + eps^a d_A^{1-a} - eps/(d_A(1+eps))^{1-a})
double bound_low_classical(double epsilon, int d_a, double alpha);

// continuity bound for a > 1, implemented as bound_low(sqrt(2 eps), d_A, beta)
// with beta = a/(2a-1); for eps > 1/2 the substituted argument exceeds 1 and
// the formula is evaluated as written.
double bound_high(double epsilon, int d_a, const RenyiOrder& alpha);

// true when bound_high's substituted argument sqrt(2 eps) reaches 1
bool bound_high_at_boundary(double epsilon);

// log2(1 + eps d_A^2), min-entropy continuity bound
double bound_hmin(double epsilon, int d_a);

// (1/(1-a)) log2((1-eps)^a + eps^a (d_A-1)^{1-a}); 0 at d_A = 1 by convention
double bound_jabbour_datta(double epsilon, int d_a, double alpha);

// (2a/(1-a)) log2 F; -inf at F = 0
double leditzky_gap(double fidelity, double alpha);

// trivial diameter 2 log2(d_A) of the conditional-entropy range
double trivial_diameter(int d_a);

}  // namespace renyi::bounds
