#pragma once

// Double-precision lattice geometry shared by the Eisenstein and the
// L-function enumerations.  Candidates found here are always re-tested at
// the working precision by the callers; the margins below only need to keep
// every genuine point inside the candidate set.

#include <complex>
#include <functional>
#include <vector>

#include "eiscocycle/exact_field.hpp"

namespace eisc::detail {

using cd = std::complex<double>;

inline cd to_cd(const Complex& z) { return {z.re.to_double(), z.im.to_double()}; }

// The affine map z -> w = xM with x_j = u_j + z_{2j} w_{j1} + z_{2j+1} w_{j2}.
struct AffineCosetMap {
  int n = 0;
  int m = 0;
  std::vector<cd> gen;                 // w_{j1}, w_{j2} interleaved
  std::vector<cd> u;
  std::vector<std::vector<cd>> M;      // M[j][i]

  AffineCosetMap(const std::vector<Lattice2>& lattices, const std::vector<FElem>& offset, const CMatrix& mat);

  void image(const long* z, cd* w) const;
  // Real matrix G (2n x 2n) and vector c with real coordinates of w equal to
  // G z + c.  Row pair (2i, 2i+1) is divided by scale[i].
  void real_form(const std::vector<double>& scale, std::vector<std::vector<double>>& G, std::vector<double>& c) const;
};

// Every z in Z^m with |G z + c|^2 <= bound, flattened, in a deterministic
// order (Fincke-Pohst enumeration with a small safety margin).
std::vector<long> short_vectors(const std::vector<std::vector<double>>& G, const std::vector<double>& c, double bound);
// Same enumeration, handing each z to visit(const long*) instead of storing it.
void visit_short_vectors(const std::vector<std::vector<double>>& G, const std::vector<double>& c, double bound,
                         const std::function<void(const long*)>& visit);

}  // namespace eisc::detail
