#pragma once

// The representation varrho of K^x on F^n, the regulator and orientation
// sign of a set of unit generators, the cycle E[b, M] in bar notation, and
// the pairing of a cocycle with a chain.

#include <functional>
#include <string>
#include <vector>

#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/poly_ops.hpp"
#include "eiscocycle/rational_cocycle.hpp"

namespace eisc {

// Exact matrix of xi -> eta xi in the basis m: row j holds the coordinates
// of eta m_j, so x varrho(eta) corresponds to eta * (sum x_j m_j).
FMatrix varrho(const KElem& eta, const FieldInstance& inst);
// Entrywise distance between varrho(eta) and M delta(eta) M^-1 at precision p.
Real varrho_residual(const KElem& eta, const FieldInstance& inst, int precision);

struct RegulatorData {
  std::vector<std::vector<Real>> log_matrix;  // L_ij = 2 log|rho_i(eps_j)|, i, j < n-1
  Real regulator;
  int rho = 1;  // (-1)^(n-1) sign(regulator)
};

// Throws DegenerateRegulator when |R| is not certified away from zero.
RegulatorData regulator(const FieldInstance& inst, const std::vector<KElem>& units, int precision);
inline RegulatorData regulator(const FieldInstance& inst, int precision) {
  return regulator(inst, inst.units, precision);
}

// Full log vector (2 log|rho_i(x)|)_{i=1..n}.
std::vector<Real> log_vector(const KElem& x, int precision);

struct BarChain {
  struct Term {
    long coefficient = 0;
    Tuple tuple;
  };
  std::vector<Term> terms;

  int n() const { return terms.empty() ? 0 : static_cast<int>(terms.front().tuple.size()); }
};

// rho sum_pi sign(pi) (1, A_pi(1), A_pi(1) A_pi(2), ...) with A_i = varrho(eps_i).
BarChain build_cycle(const FieldInstance& inst, const std::vector<KElem>& generators, int precision);
inline BarChain build_cycle(const FieldInstance& inst, int precision) {
  return build_cycle(inst, inst.units, precision);
}

// det(e, v_2 - v_1, ..., v_n - v_1) for the vertices v_j of the log simplex
// of the permuted generators; its sign is the orientation of that simplex.
Real simplex_orientation(const FieldInstance& inst, const std::vector<KElem>& generators,
                         const std::vector<int>& permutation, int precision);

// Sum of coefficient * evaluator(tuple) over the chain.
Complex pair(const BarChain& chain, const std::function<Complex(const Tuple&)>& evaluator);

// Records {coeff, matrices} with exact entries written as [a, b] pairs.
std::string chain_to_json(const BarChain& chain);

// n = 2 only: rho sum_{|j| <= J} psi(A^j, A^(j+1))(P, x) for A = varrho(eps).
// For P = P^(l-1) and J -> infinity this tends to det M ((l-1)!)^2 / Q(x)^l.
Complex unit_orbit_partial_sum(const FieldInstance& inst, const HomogPoly& p, const ExactVector& x, int J,
                               int precision);

// All permutations of {0, .., m-1} in lexicographic order with their signs.
std::vector<std::pair<std::vector<int>, int>> signed_permutations(int m);

}  // namespace eisc
