#pragma once

// The Hecke character lambda, partial L-functions summed directly over the
// coset fb^-1 + r modulo the unit group V_f, their assembly into L(s, chi),
// and the elliptic sums E_k^l for n = 2.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/unit_homology.hpp"

namespace eisc {

struct HeckeCharData {
  int k = 0;
  int l = 1;
};

// conj(nu)^k nu^-l with nu the embedded relative norm of a.  Throws
// DivisionByZero for a = 0.
Complex lambda_char(const KElem& a, int k, int l, int precision);

// Coordinates c of the log vector of xi in the basis of unit log vectors,
// after removing the norm direction: 2 log|rho_i(xi)| = log N(xi)/n +
// sum_j c_j 2 log|rho_i(eps_j)|.
std::vector<Real> log_coordinates(const KElem& xi, const std::vector<KElem>& units, int precision);

// The unique xi * eta with eta in <units> whose log coordinates lie in
// [0, 1)^(n-1).  Coordinates within 2^(16-p) of an integer count as that
// integer.
KElem reduce_mod_units(const KElem& xi, const std::vector<KElem>& units, int precision);
inline KElem reduce_mod_units(const KElem& xi, const FieldInstance& inst, int precision) {
  return reduce_mod_units(xi, inst.units, precision);
}

struct LValue {
  Complex value;
  double norm_bound = 0.0;
  std::uint64_t terms = 0;
  Real tail_estimate;
  // Sums over shells of width W in N^(1/2n), the scale comparable to the
  // sup-norm radius on the Eisenstein side.
  std::vector<Complex> shell_sums;
  double shell_width = 0.0;
  std::vector<std::string> warnings;
};

struct LBatchRequest {
  std::vector<Complex> s_values;
  int k = 0;
  int l = 1;
  std::vector<double> norm_bounds;
  double shell_width = 0.0;  // 0 picks min(B)^(1/2n) / 8
  int precision = kDefaultPrecision;
  unsigned workers = 0;
  // BoxIncomplete is thrown rather than visiting more candidates than this.
  std::uint64_t max_candidates = 400'000'000;
};

// [U_f:V_f]^-1 sum lambda(xi) N(xi)^-s over xi in fb^-1 + r, prime to f,
// one per V_f-orbit, with N(xi) = |N_{K/Q}(xi)| <= B.  Indexed [s][B].
std::vector<std::vector<LValue>> partial_L_batch(const FieldInstance& inst, const LBatchRequest& request);
LValue partial_L(const FieldInstance& inst, const Complex& s, int k, int l, double norm_bound,
                 int precision = kDefaultPrecision);

// sum_b chi(b) N(b)^-s sum_r phi(r) L(b, r, s) with one instance per pair
// (b, r); chi(b), N(b) and phi(r) are read from each instance's class data.
LValue full_L(const std::vector<FieldInstance>& entries, const HeckeCharData& chr, const Complex& s,
              double norm_bound, int precision = kDefaultPrecision);

// sum over w in Lambda + u with 0 < |w| <= R of conj(w)^k / (w^l |w|^(2s)).
Complex eval_Ekl(const Complex& u, const Complex& w1, const Complex& w2, int k, int l, const Complex& s, double radius,
                 int precision = kDefaultPrecision);

}  // namespace eisc
