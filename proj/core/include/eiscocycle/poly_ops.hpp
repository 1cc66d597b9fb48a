#pragma once

// Homogeneous polynomials in n variables with complex coefficients, the
// GL_n action (A P)(x) = P(xA), the expansion P(y sigma^T) = sum_r P_r y^r,
// and the two norm forms attached to the matrix M.

#include <map>
#include <ostream>
#include <vector>

#include "eiscocycle/numeric.hpp"

namespace eisc {

using Exponent = std::vector<int>;

class HomogPoly {
 public:
  HomogPoly() = default;
  // The zero polynomial of the given shape.
  HomogPoly(int nvars, int degree);

  static HomogPoly constant(int nvars, const Complex& c);
  static HomogPoly monomial(const Exponent& e, const Complex& c = Complex(1));
  // sum_i c_i x_i
  static HomogPoly linear_form(const std::vector<Complex>& coeffs);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  // Terms in lexicographic order of the exponent, which is graded-lex order
  // since every exponent has the same total degree.
  const std::map<Exponent, Complex>& terms() const { return terms_; }

  void add_term(const Exponent& e, const Complex& c);
  // Drops coefficients that are exactly zero.
  void prune();

  Complex operator()(const std::vector<Complex>& x) const;

  HomogPoly& operator+=(const HomogPoly& o);
  HomogPoly& operator*=(const Complex& c);

 private:
  int nvars_ = 0;
  int degree_ = 0;
  std::map<Exponent, Complex> terms_;
};

HomogPoly operator+(HomogPoly a, const HomogPoly& b);
HomogPoly operator*(const HomogPoly& a, const HomogPoly& b);
HomogPoly operator*(HomogPoly a, const Complex& c);
HomogPoly pow(const HomogPoly& p, int e);
std::ostream& operator<<(std::ostream& os, const HomogPoly& p);

// Largest max_abs_component of the coefficient differences.
Real max_coefficient_difference(const HomogPoly& a, const HomogPoly& b);

// x -> P(xA): variable i is replaced by the linear form given by column i of A.
HomogPoly act(const CMatrix& a, const HomogPoly& p);

// Coefficients P_r(sigma) of P(y sigma^T) in the variables y (no factorial
// normalisation).
using PartitionExpansion = std::map<Exponent, Complex>;
PartitionExpansion expand_Pr(const HomogPoly& p, const CMatrix& sigma);

enum class NormForm { P, Q };

// (prod_i <x, c_i>)^e where c_i is column i of M (variant Q) or of M^{-T}
// (variant P).  e = 0 yields the constant 1.
HomogPoly norm_form_poly(const CMatrix& m, NormForm variant, int e);

// All exponent vectors of n variables with total degree g, lexicographic.
std::vector<Exponent> exponents_of_degree(int n, int g);

}  // namespace eisc
