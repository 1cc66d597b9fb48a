#pragma once

// The convergence factor Omega_s^k, enumeration of the lattice coset
// Lambda + u inside a sup-norm ball of w = xM, and the truncated Eisenstein
// cocycle Psi_s(A)(P, u, M) = sum_{x in Lambda + u} psi(A)(P, x) Omega_s^k(x, M).
//
// Points are grouped in shells of width W by the sup-norm of w: shell j
// holds the points with jW < max_i |w_i| <= (j + 1)W (shell 0 also holds
// w = 0).  Every sum is accumulated per shell, in lexicographic order of the
// integer coordinates inside a shell, using fixed-size chunks and a pairwise
// tree so the result is independent of the worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/rational_cocycle.hpp"

namespace eisc {

struct LatticeCoset {
  std::vector<Lattice2> lattices;  // Lambda_1 .. Lambda_n
  ExactVector u;

  static LatticeCoset of(const FieldInstance& inst);
  int n() const { return static_cast<int>(lattices.size()); }
  // x_i = u_i + z_{2i} w_{i1} + z_{2i+1} w_{i2}
  ExactVector point(const std::vector<long>& z) const;
};

struct TruncationParams {
  double radius = 10.0;
  int precision = kDefaultPrecision;
  double shell_width = 0.0;  // 0 picks radius / 16
  unsigned workers = 0;      // 0 picks the hardware concurrency
};

struct CosetPoint {
  std::vector<long> z;  // integer coordinates with respect to the lattice bases
  ExactVector x;
  int shell = 0;
};

// Every x in Lambda + u with max_i |(xM)_i| <= radius, exactly once, ordered
// by shell and then lexicographically by z.
std::vector<CosetPoint> enumerate_coset(const LatticeCoset& coset, const CMatrix& m, double radius,
                                        double shell_width = 0.0);

// Omega_s^k(x, M) = prod_i conj(w_i)^k exp(-s log |w_i|^2), w = xM.
// Throws DivisionByZero if some w_i vanishes.
Complex omega(const ExactVector& x, const CMatrix& m, const Complex& s, int k);
Complex omega_from_w(const std::vector<Complex>& w, const Complex& s, int k);

struct PsiValue {
  Complex value;
  std::uint64_t terms_summed = 0;
  // Empirical magnitude of the omitted tail (last-shell ratio heuristic).
  Real tail_estimate;
  double radius = 0.0;
  double shell_width = 0.0;
  int precision = kDefaultPrecision;
  std::vector<Complex> shell_sums;
  std::vector<Real> shell_abs_sums;
  // Least-squares slope of log(shell_abs_sums) against log(shell index) over
  // the outer half of the shells; absolute convergence needs it below -1.
  double decay_exponent = 0.0;
  bool nonconvergent = false;
  std::vector<std::string> warnings;
};

// One term of a chain to be paired with Psi_s: coefficient times a tuple.
struct WeightedTuple {
  long coefficient = 1;
  const PsiEvaluator* psi = nullptr;
};

struct PsiBatchRequest {
  std::vector<Complex> s_values;
  int k = 0;
  std::vector<double> radii;  // each a multiple of shell_width
  double shell_width = 0.0;   // 0 picks min(radii) / 8
  int precision = kDefaultPrecision;
  unsigned workers = 0;
};

// Evaluates sum_c coefficient_c Psi_s(tuple_c) for every s and every radius
// in one pass over the largest ball.  Result is indexed [s][radius].
std::vector<std::vector<PsiValue>> eval_Psi_batch(const std::vector<WeightedTuple>& chain,
                                                  const LatticeCoset& coset, const CMatrix& m,
                                                  const PsiBatchRequest& request);

PsiValue eval_Psi(const Tuple& t, const HomogPoly& p, const LatticeCoset& coset, const CMatrix& m,
                  const Complex& s, int k, const TruncationParams& params);

// Tail heuristic and decay fit used by PsiValue; exposed for reuse by the
// L-function side and for tests.
Real shell_tail_estimate(const std::vector<Complex>& shell_sums);
double shell_decay_exponent(const std::vector<Real>& shell_abs_sums);

}  // namespace eisc
