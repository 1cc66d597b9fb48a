#pragma once

// Independent reference computations used only by the tests.  None of them
// goes through the library's expansion, enumeration or orbit-reduction code:
// they work directly with integer coordinates, Gaussian integers and exact
// rational arithmetic.

#include <map>
#include <vector>

#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/poly_ops.hpp"
#include "eiscocycle/rational_cocycle.hpp"

namespace oracle {

using eisc::Complex;
using eisc::ExactVector;
using eisc::Exponent;
using eisc::FElem;
using eisc::FMatrix;

// det(sigma) P(-d/dx) prod_j 1/<x, sigma_j>, by repeated symbolic
// differentiation of products of inverse powers of linear forms, exactly.
FElem differentiate_f(const FMatrix& sigma, const std::map<Exponent, FElem>& p, const ExactVector& x);

// sum over nonzero principal ideals (alpha) of Z[zeta8] with N(alpha) <= B of
// conj(nu)^k nu^-l N^-s, nu = N_{K/Q(i)}(alpha).  Ideals are reached through
// an integer box in the power basis of zeta8 that provably holds a generator
// of every such ideal; each generator found is weighted by one over the
// number of its associates inside the box.
struct IdealSum {
  Complex value;
  long ideals = 0;  // sum of weights, i.e. the number of ideals
};
IdealSum zeta8_principal_ideal_sum(const Complex& s, int k, int l, double norm_bound);

// [U:V]^-1 sum over V-orbits of xi in Z[i][sqrt2] with |N(xi)| <= B of
// nu^-l N^-s for V = <3 + 2 sqrt2> and [U:V] = 8.  Orbits are deduplicated
// by counting orbit members inside a rectangular box in (a, b), xi = a + b sqrt2.
IdealSum sqrt2_orbit_sum(const Complex& s, int l, double norm_bound);

// sum over (m, n) != 0 with m^2 + n^2 <= R^2 of 1 / (m + n i)^4.
Complex g4_double_loop(double radius);

// Number of x in Z[i]^2 with max |x_i| <= R, by a plain box scan.
long gaussian_pairs_in_ball(double radius);

}  // namespace oracle
