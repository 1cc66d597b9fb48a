#pragma once

// The rational function f(sigma)(P, x) and the homogeneous cocycle psi built
// from it by the smallest-index column rule.

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/poly_ops.hpp"

namespace eisc {

using ExactVector = std::vector<FElem>;
// An ordered n-tuple of n x n matrices over F.
using Tuple = std::vector<FMatrix>;

// <x, c> for a row vector x and column j of A, exactly.
FElem pairing(const ExactVector& x, const FMatrix& a, std::size_t j);
std::vector<Complex> to_complex(const ExactVector& x);

// det(sigma) sum_r P_r(sigma) prod_j r_j! / <x, sigma_j>^(1 + r_j).
// Throws DivisionByZero if some pairing is zero or below 2^(8-p) times the
// size of its summands.
Complex eval_f(const CMatrix& sigma, const HomogPoly& p, const std::vector<Complex>& x);
// Same, with the expansion of P already computed for this sigma.
Complex eval_f(const CMatrix& sigma, const Complex& det_sigma, const PartitionExpansion& pr,
               const std::vector<Complex>& x);
// Variant that returns 0 when a pairing vanishes instead of signalling.
Complex eval_f_or_zero(const CMatrix& sigma, const HomogPoly& p, const std::vector<Complex>& x);

struct ColumnSelection {
  CMatrix sigma;       // column k is column d[k] of A_k
  std::vector<int> d;  // 0-based column indices
  FElem det;           // exact det(sigma)
};

// For each k the smallest j with <x, column j of A_k> != 0 (exact test).
// Throws Error for x = 0 or a matrix whose pairings all vanish.
std::vector<int> decompose_X(const Tuple& t, const ExactVector& x);
ColumnSelection select_columns(const Tuple& t, const ExactVector& x);

// psi(A_1, ..., A_n)(P, x); zero for x = 0.
Complex eval_psi(const Tuple& t, const HomogPoly& p, const ExactVector& x);

// Repeated evaluation of psi for one tuple and one polynomial.  The selected
// sigma, its determinant and the P_r(sigma) expansion depend only on the
// column vector d, so they are computed once per d and shared.  Safe to call
// from several threads.
class PsiEvaluator {
 public:
  PsiEvaluator(Tuple t, HomogPoly p);

  const Tuple& tuple() const { return tuple_; }
  const HomogPoly& polynomial() const { return poly_; }

  Complex operator()(const ExactVector& x) const;
  // xc must be the complex image of x at the working precision.
  Complex operator()(const ExactVector& x, const std::vector<Complex>& xc) const;

 private:
  struct Selected {
    CMatrix sigma;
    Complex det;
    PartitionExpansion pr;
  };
  const Selected& selected(const std::vector<int>& d) const;

  Tuple tuple_;
  HomogPoly poly_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, std::vector<int>>, std::unique_ptr<Selected>> cache_;
};

}  // namespace eisc
