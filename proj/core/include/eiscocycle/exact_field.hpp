#pragma once

// Exact arithmetic in an imaginary quadratic field F = Q(sqrt(-D)) and in a
// degree-n extension K = F(theta), complex embeddings of K fixing F, and the
// bundle of arithmetic data that describes one coset fb^-1 + r.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eiscocycle/numeric.hpp"

namespace eisc {

// a + b*sqrt(-D) with rational a, b.  A purely rational element carries
// D = 0 and combines with elements of any field; two irrational operands
// must agree on D.
class FElem {
 public:
  FElem() = default;
  FElem(int a) : a_(a) {}
  FElem(long a) : a_(a) {}
  FElem(mpq_class a) : a_(std::move(a)) { a_.canonicalize(); }
  FElem(mpq_class a, mpq_class b, std::int64_t D);

  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }
  std::int64_t D() const { return d_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  // True when both coordinates are integers.  This equals membership in
  // Z[sqrt(-D)], which is the full ring of integers only for D = 1, 2 mod 4.
  bool has_integer_coordinates() const;

  FElem& operator+=(const FElem& o);
  FElem& operator-=(const FElem& o);
  FElem& operator*=(const FElem& o);
  FElem& operator/=(const FElem& o);
  FElem operator-() const;

  Complex to_complex() const;
  std::string to_string() const;

 private:
  std::int64_t merge_D(const FElem& o) const;

  mpq_class a_ = 0;
  mpq_class b_ = 0;
  std::int64_t d_ = 0;
};

inline FElem operator+(FElem x, const FElem& y) { x += y; return x; }
inline FElem operator-(FElem x, const FElem& y) { x -= y; return x; }
inline FElem operator*(FElem x, const FElem& y) { x *= y; return x; }
inline FElem operator/(FElem x, const FElem& y) { x /= y; return x; }
bool operator==(const FElem& x, const FElem& y);
inline bool operator!=(const FElem& x, const FElem& y) { return !(x == y); }
std::ostream& operator<<(std::ostream& os, const FElem& x);

FElem conj(const FElem& x);
// N_{F/Q}(x) = a^2 + D b^2.
mpq_class norm(const FElem& x);
FElem inverse(const FElem& x);
FElem pow(FElem x, long e);

using FMatrix = Matrix<FElem>;

// Exact determinant and inverse over F.  inverse throws SingularMatrix.
FElem determinant(FMatrix a);
FMatrix inverse(const FMatrix& a);
CMatrix to_complex(const FMatrix& a);

class EmbeddingSet;

// K = F[theta]/(theta^n + c_{n-1} theta^{n-1} + ... + c_0).  Holds the
// reductions of theta^0 .. theta^{2n-2} to the power basis, which is the
// multiplication table, and caches embeddings per precision.
class ExtensionField {
 public:
  ExtensionField(std::int64_t D, std::vector<FElem> minpoly);

  std::int64_t D() const { return d_; }
  int degree() const { return static_cast<int>(minpoly_.size()); }
  // c_0 .. c_{n-1}; the leading coefficient 1 is implicit.
  const std::vector<FElem>& minimal_polynomial() const { return minpoly_; }
  const std::vector<std::vector<FElem>>& power_table() const { return powers_; }

  std::vector<FElem> multiply(const std::vector<FElem>& x, const std::vector<FElem>& y) const;

  // Embeddings at precision p bits, built once and shared.
  std::shared_ptr<const EmbeddingSet> embeddings(int p) const;

 private:
  std::int64_t d_;
  std::vector<FElem> minpoly_;
  std::vector<std::vector<FElem>> powers_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::shared_ptr<const EmbeddingSet>> cache_;
};

using FieldPtr = std::shared_ptr<const ExtensionField>;

class KElem {
 public:
  KElem() = default;
  KElem(FieldPtr field, std::vector<FElem> coords);
  // The element x of F viewed inside K.
  static KElem from_F(FieldPtr field, const FElem& x);
  static KElem theta(FieldPtr field);

  const FieldPtr& field() const { return field_; }
  const std::vector<FElem>& coords() const { return coords_; }
  int degree() const { return static_cast<int>(coords_.size()); }

  bool is_zero() const;
  // Returns the F-value if x lies in F (all higher coordinates vanish).
  std::optional<FElem> as_F() const;

  KElem& operator+=(const KElem& o);
  KElem& operator-=(const KElem& o);
  KElem& operator*=(const KElem& o);
  KElem operator-() const;

  std::string to_string() const;

 private:
  void check_same_field(const KElem& o) const;

  FieldPtr field_;
  std::vector<FElem> coords_;
};

inline KElem operator+(KElem x, const KElem& y) { x += y; return x; }
inline KElem operator-(KElem x, const KElem& y) { x -= y; return x; }
inline KElem operator*(KElem x, const KElem& y) { x *= y; return x; }
KElem operator*(const FElem& c, KElem x);
bool operator==(const KElem& x, const KElem& y);
inline bool operator!=(const KElem& x, const KElem& y) { return !(x == y); }
std::ostream& operator<<(std::ostream& os, const KElem& x);

// Matrix of y -> x*y in the power basis (column j holds the coordinates of
// x*theta^j).
FMatrix multiplication_matrix(const KElem& x);
// N_{K/F}(x) as the determinant of the multiplication matrix.
FElem rel_norm(const KElem& x);
// Throws DivisionByZero for x = 0.
KElem inverse(const KElem& x);
KElem pow(const KElem& x, long e);
// Coordinates of x with respect to an F-basis of K (exact linear solve).
std::vector<FElem> coordinates_in_basis(const KElem& x, const std::vector<KElem>& basis);

// The n embeddings of K fixing F, ordered by decreasing real part and then
// decreasing imaginary part of the image of theta.
class EmbeddingSet {
 public:
  EmbeddingSet(const ExtensionField& field, int precision);

  int precision() const { return precision_; }
  int size() const { return static_cast<int>(roots_.size()); }
  const Complex& theta_image(int i) const { return roots_.at(static_cast<std::size_t>(i)); }
  // Smallest pairwise distance between the theta images.
  const Real& separation() const { return separation_; }

  Complex embed(const KElem& x, int i) const;

 private:
  int precision_;
  std::vector<Complex> roots_;
  Real separation_;
};

// rho_i(x) at precision p (0-based embedding index).
Complex embed(const KElem& x, int i, int precision);

// A rank-2 lattice Z w1 + Z w2 inside F.
struct Lattice2 {
  FElem w1;
  FElem w2;

  // Exact coordinates (c1, c2) with x = c1 w1 + c2 w2.
  std::pair<mpq_class, mpq_class> coordinates(const FElem& x) const;
  bool contains(const FElem& x) const;
  bool independent() const;
};

// Residue classes of (O_K/f)^x with their character values, plus a Z-basis
// of f used for the exact congruence tests.
struct Conductor {
  std::vector<KElem> z_basis;
  struct Residue {
    KElem representative;
    mpq_class turns;  // phi(representative) = exp(2 pi i turns)
  };
  std::vector<Residue> residues;
};

// Optional data tying an instance to a term of the full L-function:
// chi(b), N(b) and phi(r).
struct ClassData {
  Complex chi_b = Complex(1);
  mpq_class norm_b = 1;
  mpq_class phi_turns = 0;
};

struct FieldInstance {
  std::string name;
  FieldPtr field;
  std::vector<KElem> basis;         // m_1 .. m_n
  std::vector<Lattice2> lattices;   // Lambda_1 .. Lambda_n
  std::vector<FElem> u;             // r = sum u_i m_i
  KElem r;
  std::vector<KElem> units;         // free generators of V_f
  std::vector<KElem> torsion;       // every root of unity of U_f, including 1
  std::vector<KElem> unit_group_free;  // free generators of U_f modulo torsion
  long unit_index = 1;              // [U_f : V_f]
  std::optional<Conductor> conductor;  // absent means f = (1)
  std::vector<KElem> fb_inverse_basis;  // optional Z-basis of f b^-1
  int k = 0;
  int l = 1;
  ClassData class_data;

  int n() const { return field ? field->degree() : 0; }
  std::int64_t D() const { return field ? field->D() : 0; }
  KElem element(const std::vector<FElem>& x) const;  // sum x_i m_i
};

// M_{ji} = rho_i(m_j).  Throws SingularMatrix when |det M| is not certified
// away from zero at precision p.
CMatrix build_M(const FieldInstance& inst, int precision);

// Exact membership in sum Lambda_i m_i, and in the coset (sum Lambda_i m_i) + r.
bool in_lattice(const FieldInstance& inst, const KElem& xi);
bool in_coset(const FieldInstance& inst, const KElem& xi);
// Coordinates x in F^n with xi = sum x_i m_i.
std::vector<FElem> basis_coordinates(const FieldInstance& inst, const KElem& xi);

// Exact test for a - b in f.  With f = (1) every pair is congruent.
bool congruent_mod_f(const FieldInstance& inst, const KElem& a, const KElem& b);
// Whether (xi) is prime to f, decided by the residue table.
bool prime_to_conductor(const FieldInstance& inst, const KElem& xi);
// phi of the residue class of xi; nullopt if xi is not prime to f.
std::optional<mpq_class> residue_character_turns(const FieldInstance& inst, const KElem& xi);

// lambda(a) = conj(nu)^k nu^-l with nu = N_{K/F}(a), exactly.
FElem lambda_exact(const KElem& a, int k, int l);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

ValidationReport validate_instance(const FieldInstance& inst, int precision = kDefaultPrecision);

}  // namespace eisc
