#include "eiscocycle/exact_field.hpp"

#include <algorithm>
#include <sstream>

namespace eisc {

// ---------------------------------------------------------------------------
// FElem

FElem::FElem(mpq_class a, mpq_class b, std::int64_t D) : a_(std::move(a)), b_(std::move(b)), d_(D) {
  a_.canonicalize();
  b_.canonicalize();
  if (D < 0) throw Error("FElem: D must be positive");
  if (b_ != 0 && D == 0) throw Error("FElem: irrational part needs D > 0");
}

bool FElem::has_integer_coordinates() const {
  return a_.get_den() == 1 && b_.get_den() == 1;
}

std::int64_t FElem::merge_D(const FElem& o) const {
  if (d_ == 0) return o.d_;
  if (o.d_ == 0 || o.d_ == d_) return d_;
  throw Error("FElem: mixing elements of different quadratic fields");
}

FElem& FElem::operator+=(const FElem& o) {
  d_ = merge_D(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

FElem& FElem::operator-=(const FElem& o) {
  d_ = merge_D(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

FElem& FElem::operator*=(const FElem& o) {
  d_ = merge_D(o);
  if (b_ == 0 && o.b_ == 0) {
    a_ *= o.a_;
    return *this;
  }
  mpq_class na = a_ * o.a_ - mpq_class(d_) * b_ * o.b_;
  mpq_class nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  return *this;
}

FElem& FElem::operator/=(const FElem& o) {
  *this *= inverse(o);
  return *this;
}

FElem FElem::operator-() const {
  FElem r(*this);
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Complex FElem::to_complex() const {
  if (b_ == 0) return Complex(Real(a_));
  return Complex(Real(a_), Real(b_) * sqrt(Real(static_cast<long>(d_))));
}

std::string FElem::to_string() const {
  std::ostringstream os;
  if (b_ == 0) {
    os << a_;
  } else if (a_ == 0) {
    os << b_ << "*sqrt(-" << d_ << ")";
  } else {
    os << a_ << (b_ > 0 ? "+" : "-") << abs(b_) << "*sqrt(-" << d_ << ")";
  }
  return os.str();
}

bool operator==(const FElem& x, const FElem& y) {
  if (x.a() != y.a() || x.b() != y.b()) return false;
  return x.b() == 0 || x.D() == y.D();
}

std::ostream& operator<<(std::ostream& os, const FElem& x) { return os << x.to_string(); }

FElem conj(const FElem& x) {
  if (x.b() == 0) return x;
  return FElem(x.a(), -x.b(), x.D());
}

mpq_class norm(const FElem& x) { return x.a() * x.a() + mpq_class(x.D()) * x.b() * x.b(); }

FElem inverse(const FElem& x) {
  if (x.is_zero()) throw DivisionByZero("inverse of zero in F");
  mpq_class n = norm(x);
  FElem c = conj(x);
  return FElem(c.a() / n, c.b() / n, x.D());
}

FElem pow(FElem x, long e) {
  if (e < 0) {
    x = inverse(x);
    e = -e;
  }
  FElem r(1);
  while (e > 0) {
    if (e & 1) r *= x;
    e >>= 1;
    if (e > 0) x *= x;
  }
  return r;
}

FElem determinant(FMatrix a) {
  if (!a.square()) throw Error("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  FElem det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k).is_zero()) ++piv;
    if (piv == n) return FElem(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    FElem inv = inverse(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      FElem f = a(i, k) * inv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

FMatrix inverse(const FMatrix& m) {
  if (!m.square()) throw SingularMatrix("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  FMatrix a = m;
  FMatrix inv = FMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a(piv, k).is_zero()) ++piv;
    if (piv == n) throw SingularMatrix("matrix over F is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    FElem p = inverse(a(k, k));
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= p;
      inv(k, j) *= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      FElem f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

CMatrix to_complex(const FMatrix& a) {
  return a.map([](const FElem& x) { return x.to_complex(); });
}

// ---------------------------------------------------------------------------
// ExtensionField

ExtensionField::ExtensionField(std::int64_t D, std::vector<FElem> minpoly) : d_(D), minpoly_(std::move(minpoly)) {
  if (D <= 0) throw InvalidInstance("D must be a positive squarefree integer");
  const std::size_t n = minpoly_.size();
  if (n == 0) throw InvalidInstance("extension degree must be at least 1");
  for (const auto& c : minpoly_)
    if (!c.is_rational() && c.D() != D) throw InvalidInstance("minimal polynomial coefficient outside F");

  powers_.assign(2 * n - 1, std::vector<FElem>(n, FElem(0)));
  for (std::size_t k = 0; k < n; ++k) powers_[k][k] = FElem(1);
  // theta^{k+1} = theta * theta^k, reducing theta^n = -sum c_j theta^j.
  for (std::size_t k = n; k < 2 * n - 1; ++k) {
    const auto& prev = powers_[k - 1];
    std::vector<FElem> next(n, FElem(0));
    for (std::size_t j = 1; j < n; ++j) next[j] = prev[j - 1];
    const FElem& top = prev[n - 1];
    if (!top.is_zero())
      for (std::size_t j = 0; j < n; ++j) next[j] -= top * minpoly_[j];
    powers_[k] = std::move(next);
  }
}

std::vector<FElem> ExtensionField::multiply(const std::vector<FElem>& x, const std::vector<FElem>& y) const {
  const std::size_t n = minpoly_.size();
  std::vector<FElem> c(n, FElem(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j].is_zero()) continue;
      FElem p = x[i] * y[j];
      const auto& t = powers_[i + j];
      for (std::size_t m = 0; m < n; ++m)
        if (!t[m].is_zero()) c[m] += p * t[m];
    }
  }
  return c;
}

std::shared_ptr<const EmbeddingSet> ExtensionField::embeddings(int p) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = cache_.find(p);
  if (it != cache_.end()) return it->second;
  auto e = std::make_shared<const EmbeddingSet>(*this, p);
  cache_.emplace(p, e);
  return e;
}

// ---------------------------------------------------------------------------
// KElem

KElem::KElem(FieldPtr field, std::vector<FElem> coords) : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw Error("KElem without a field");
  if (static_cast<int>(coords_.size()) != field_->degree()) throw Error("KElem: coordinate count does not match degree");
}

KElem KElem::from_F(FieldPtr field, const FElem& x) {
  std::vector<FElem> c(static_cast<std::size_t>(field->degree()), FElem(0));
  c[0] = x;
  return KElem(std::move(field), std::move(c));
}

KElem KElem::theta(FieldPtr field) {
  const int n = field->degree();
  if (n == 1) return from_F(field, FElem(0) - field->minimal_polynomial()[0]);
  std::vector<FElem> c(static_cast<std::size_t>(n), FElem(0));
  c[1] = FElem(1);
  return KElem(std::move(field), std::move(c));
}

bool KElem::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const FElem& c) { return c.is_zero(); });
}

std::optional<FElem> KElem::as_F() const {
  for (std::size_t j = 1; j < coords_.size(); ++j)
    if (!coords_[j].is_zero()) return std::nullopt;
  return coords_.empty() ? FElem(0) : coords_[0];
}

void KElem::check_same_field(const KElem& o) const {
  if (field_ != o.field_) throw Error("KElem: operands belong to different fields");
}

KElem& KElem::operator+=(const KElem& o) {
  check_same_field(o);
  for (std::size_t j = 0; j < coords_.size(); ++j) coords_[j] += o.coords_[j];
  return *this;
}

KElem& KElem::operator-=(const KElem& o) {
  check_same_field(o);
  for (std::size_t j = 0; j < coords_.size(); ++j) coords_[j] -= o.coords_[j];
  return *this;
}

KElem& KElem::operator*=(const KElem& o) {
  check_same_field(o);
  coords_ = field_->multiply(coords_, o.coords_);
  return *this;
}

KElem KElem::operator-() const {
  KElem r(*this);
  for (auto& c : r.coords_) c = -c;
  return r;
}

std::string KElem::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < coords_.size(); ++j) os << (j ? ", " : "") << coords_[j];
  os << ']';
  return os.str();
}

KElem operator*(const FElem& c, KElem x) {
  std::vector<FElem> coords = x.coords();
  for (auto& v : coords) v = c * v;
  return KElem(x.field(), std::move(coords));
}

bool operator==(const KElem& x, const KElem& y) {
  return x.field() == y.field() && x.coords() == y.coords();
}

std::ostream& operator<<(std::ostream& os, const KElem& x) { return os << x.to_string(); }

FMatrix multiplication_matrix(const KElem& x) {
  const int n = x.degree();
  FMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  std::vector<FElem> e(static_cast<std::size_t>(n), FElem(0));
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), FElem(0));
    e[static_cast<std::size_t>(j)] = FElem(1);
    auto col = x.field()->multiply(x.coords(), e);
    for (int i = 0; i < n; ++i) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = col[static_cast<std::size_t>(i)];
  }
  return m;
}

FElem rel_norm(const KElem& x) { return determinant(multiplication_matrix(x)); }

KElem inverse(const KElem& x) {
  if (x.is_zero()) throw DivisionByZero("inverse of zero in K");
  FMatrix inv = inverse(multiplication_matrix(x));
  // The inverse is the preimage of 1, i.e. the first column of the inverse
  // of the multiplication matrix.
  return KElem(x.field(), inv.col(0));
}

KElem pow(const KElem& x, long e) {
  KElem base = e < 0 ? inverse(x) : x;
  if (e < 0) e = -e;
  KElem r = KElem::from_F(x.field(), FElem(1));
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return r;
}

std::vector<FElem> coordinates_in_basis(const KElem& x, const std::vector<KElem>& basis) {
  const std::size_t n = basis.size();
  if (static_cast<int>(n) != x.degree()) throw Error("coordinates_in_basis: basis size does not match degree");
  FMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(j, i) = basis[i].coords()[j];
  FMatrix inv = inverse(b);
  std::vector<FElem> out(n, FElem(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += inv(i, j) * x.coords()[j];
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

Complex horner(const std::vector<Complex>& coeffs, const Complex& z) {
  // coeffs hold c_0 .. c_{n-1} of a monic polynomial of degree n.
  Complex acc(1);
  for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * z + coeffs[j];
  return acc;
}

Complex horner_derivative(const std::vector<Complex>& coeffs, const Complex& z) {
  const long n = static_cast<long>(coeffs.size());
  Complex acc{Real(n)};
  for (long j = n - 1; j >= 1; --j) acc = acc * z + coeffs[static_cast<std::size_t>(j)] * Real(j);
  return acc;
}

// Whether the monic polynomial with lower coefficients c has a root in F.
// After y = d x with d clearing every denominator, a root in F is integral,
// so its coordinates are half-integers; the nearest candidate to each
// complex root is then confirmed or rejected exactly.
bool has_root_in_F(const ExtensionField& field, int precision) {
  const auto& c = field.minimal_polynomial();
  const std::size_t n = c.size();
  mpz_class d = 1;
  for (const auto& ci : c) {
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), ci.a().get_den_mpz_t());
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), ci.b().get_den_mpz_t());
  }
  const FElem dF{mpq_class(d)};
  std::vector<FElem> scaled(c);
  FElem dpow(1);
  for (std::size_t i = n; i-- > 0;) {
    dpow *= dF;
    scaled[i] *= dpow;
  }
  auto value_at = [&](const FElem& r) {
    FElem v(1);
    for (std::size_t i = n; i-- > 0;) v = v * r + scaled[i];
    return v;
  };
  PrecisionScope scope(precision);
  const auto emb = field.embeddings(precision);
  const Real sqrtD = sqrt(Real(field.D()));
  for (int i = 0; i < emb->size(); ++i) {
    Complex z = emb->theta_image(i) * Complex(Real(d));
    mpq_class a(round_to_integer(z.re * Real(2)), 2);
    mpq_class b(round_to_integer(z.im * Real(2) / sqrtD), 2);
    a.canonicalize();
    b.canonicalize();
    if (value_at(FElem(a, b, field.D())).is_zero()) return true;
  }
  return false;
}

}  // namespace

EmbeddingSet::EmbeddingSet(const ExtensionField& field, int precision) : precision_(precision) {
  const int guard = precision + 64;
  const int n = field.degree();
  PrecisionScope scope(guard);

  std::vector<Complex> coeffs;
  for (const auto& c : field.minimal_polynomial()) coeffs.push_back(c.to_complex());

  std::vector<Complex> z;
  if (n == 1) {
    z.push_back(-coeffs[0]);
  } else {
    // Aberth iteration from points on a circle enclosing every root.
    Real bound(1);
    for (const auto& c : coeffs) bound = max(bound, abs(c) + Real(1));
    for (int k = 0; k < n; ++k) {
      Real ang = Real::pi() * Real(2) * (Real(k) + Real(0.3)) / Real(n);
      z.push_back(Complex(bound * cos(ang), bound * sin(ang)));
    }
    const Real tol = Real::pow2(-(guard - 8));
    for (int iter = 0, settled = 0; iter < 2000 && settled < 3; ++iter) {
      Real worst(0);
      for (int k = 0; k < n; ++k) {
        auto& zk = z[static_cast<std::size_t>(k)];
        Complex f = horner(coeffs, zk);
        if (f.is_zero()) continue;
        Complex ratio = f / horner_derivative(coeffs, zk);
        Complex s(0);
        for (int j = 0; j < n; ++j)
          if (j != k) s += inverse(zk - z[static_cast<std::size_t>(j)]);
        Complex step = ratio / (Complex(1) - ratio * s);
        worst = max(worst, abs(step) / max(Real(1), abs(zk)));
        zk -= step;
      }
      if (worst < tol) ++settled;
    }
  }

  // Certify: each disk of radius n|f|/|f'| around an approximation holds a
  // root, and the disks must be disjoint and small.
  std::vector<Real> radius;
  for (const auto& zk : z) {
    if (n == 1) {
      radius.push_back(Real(0));
      continue;
    }
    Complex d = horner_derivative(coeffs, zk);
    if (d.is_zero()) throw PrecisionUnderflow("minimal polynomial has a repeated root");
    Real r = abs(horner(coeffs, zk)) / abs(d) * Real(n);
    if (r > Real::pow2(-(precision + 8)) * max(Real(1), abs(zk)))
      throw PrecisionUnderflow("embedding roots could not be certified at " + std::to_string(precision) + " bits");
    radius.push_back(std::move(r));
  }
  separation_ = Real(n == 1 ? 1 : 0);
  bool first = true;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Real d = abs(z[static_cast<std::size_t>(a)] - z[static_cast<std::size_t>(b)]);
      if (d <= radius[static_cast<std::size_t>(a)] + radius[static_cast<std::size_t>(b)] ||
          d <= Real::pow2(-precision / 2))
        throw PrecisionUnderflow("embeddings are not separated at " + std::to_string(precision) + " bits");
      if (first || d < separation_) separation_ = d;
      first = false;
    }

  const Real tie = Real::pow2(-precision / 2);
  std::sort(z.begin(), z.end(), [&](const Complex& x, const Complex& y) {
    if (abs(x.re - y.re) > tie) return x.re > y.re;
    return x.im > y.im;
  });
  roots_ = std::move(z);
  separation_ = with_precision(separation_, precision);
}

Complex EmbeddingSet::embed(const KElem& x, int i) const {
  if (i < 0 || i >= size()) throw Error("embedding index out of range");
  const auto& c = x.coords();
  const Complex& t = roots_[static_cast<std::size_t>(i)];
  Complex acc;
  {
    PrecisionScope scope(precision_ + 64);
    acc = Complex(0);
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * t + c[j].to_complex();
  }
  return with_precision(acc, precision_);
}

Complex embed(const KElem& x, int i, int precision) {
  return x.field()->embeddings(precision)->embed(x, i);
}

// ---------------------------------------------------------------------------
// Lattices and instance helpers

std::pair<mpq_class, mpq_class> Lattice2::coordinates(const FElem& x) const {
  mpq_class det = w1.a() * w2.b() - w2.a() * w1.b();
  if (det == 0) throw InvalidInstance("lattice basis is degenerate");
  mpq_class c1 = (x.a() * w2.b() - w2.a() * x.b()) / det;
  mpq_class c2 = (w1.a() * x.b() - x.a() * w1.b()) / det;
  return {c1, c2};
}

bool Lattice2::contains(const FElem& x) const {
  auto [c1, c2] = coordinates(x);
  return c1.get_den() == 1 && c2.get_den() == 1;
}

bool Lattice2::independent() const { return w1.a() * w2.b() - w2.a() * w1.b() != 0; }

KElem FieldInstance::element(const std::vector<FElem>& x) const {
  if (x.size() != basis.size()) throw Error("element: coordinate count does not match basis");
  KElem xi = KElem::from_F(field, FElem(0));
  for (std::size_t i = 0; i < x.size(); ++i) xi += x[i] * basis[i];
  return xi;
}

CMatrix build_M(const FieldInstance& inst, int precision) {
  const int n = inst.n();
  auto emb = inst.field->embeddings(precision);
  PrecisionScope scope(precision);
  CMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = emb->embed(inst.basis[static_cast<std::size_t>(j)], i);

  // Hadamard's bound scales the singularity threshold to the rows.
  Real hadamard(1);
  for (int j = 0; j < n; ++j) {
    Real s(0);
    for (int i = 0; i < n; ++i) s += norm(m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)));
    hadamard *= sqrt(s);
  }
  Real d = abs(determinant(m));
  if (d <= Real::pow2(8 - precision) * hadamard) throw SingularMatrix("M is singular at the working precision");
  return m;
}

std::vector<FElem> basis_coordinates(const FieldInstance& inst, const KElem& xi) {
  return coordinates_in_basis(xi, inst.basis);
}

bool in_lattice(const FieldInstance& inst, const KElem& xi) {
  auto x = basis_coordinates(inst, xi);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!inst.lattices[i].contains(x[i])) return false;
  return true;
}

bool in_coset(const FieldInstance& inst, const KElem& xi) { return in_lattice(inst, xi - inst.r); }

namespace {

// Flattens a KElem into 2n rationals (a_0, b_0, a_1, b_1, ...).
std::vector<mpq_class> rational_coords(const KElem& x) {
  std::vector<mpq_class> v;
  for (const auto& c : x.coords()) {
    v.push_back(c.a());
    v.push_back(c.b());
  }
  return v;
}

// Whether v lies in the Z-span of the given vectors (which must be
// Q-independent); solved by exact elimination on the augmented system.
bool in_z_span(const std::vector<std::vector<mpq_class>>& gens, const std::vector<mpq_class>& v) {
  const std::size_t rows = v.size();
  const std::size_t cols = gens.size();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = gens[j][i];
    a[i][cols] = v[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) throw InvalidInstance("Z-basis is not linearly independent");
    std::swap(a[p], a[r]);
    mpq_class inv = 1 / a[r][c];
    for (std::size_t j = c; j <= cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (std::size_t j = c; j <= cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (a[i][cols] != 0) return false;
  for (std::size_t i = 0; i < r; ++i)
    if (a[i][cols].get_den() != 1) return false;
  return true;
}

bool in_z_span(const std::vector<KElem>& basis, const KElem& x) {
  std::vector<std::vector<mpq_class>> gens;
  for (const auto& b : basis) gens.push_back(rational_coords(b));
  return in_z_span(gens, rational_coords(x));
}

}  // namespace

bool congruent_mod_f(const FieldInstance& inst, const KElem& a, const KElem& b) {
  if (!inst.conductor) return true;
  return in_z_span(inst.conductor->z_basis, a - b);
}

std::optional<mpq_class> residue_character_turns(const FieldInstance& inst, const KElem& xi) {
  if (!inst.conductor) return mpq_class(0);
  for (const auto& res : inst.conductor->residues)
    if (congruent_mod_f(inst, xi, res.representative)) return res.turns;
  return std::nullopt;
}

bool prime_to_conductor(const FieldInstance& inst, const KElem& xi) {
  return residue_character_turns(inst, xi).has_value();
}

FElem lambda_exact(const KElem& a, int k, int l) {
  if (a.is_zero()) throw DivisionByZero("lambda of zero");
  FElem nu = rel_norm(a);
  return pow(conj(nu), k) * pow(nu, -l);
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

bool is_rational_square(const mpq_class& q) {
  if (q < 0) return false;
  return mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t());
}

// Whether x = y^2 for some y in F.
bool is_square_in_F(const FElem& x) {
  const mpq_class& a = x.a();
  const mpq_class& b = x.b();
  if (b == 0) {
    // y rational, or y a rational multiple of sqrt(-D).
    return is_rational_square(a) || (x.D() > 0 && is_rational_square(-a / mpq_class(x.D())));
  }
  // y = s + t sqrt(-D) with s t != 0: s^2 = (a + sqrt(a^2 + D b^2)) / 2.
  mpq_class n = norm(x);
  if (!is_rational_square(n)) return false;
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), n.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), n.get_den_mpz_t());
  mpq_class root(num, den);
  for (const mpq_class& cand : {mpq_class((a + root) / 2), mpq_class((a - root) / 2)})
    if (cand > 0 && is_rational_square(cand)) return true;
  return false;
}

}  // namespace

ValidationReport validate_instance(const FieldInstance& inst, int precision) {
  ValidationReport rep;
  auto add = [&](std::string name, bool ok, std::string witness = {}) {
    rep.checks.push_back({std::move(name), ok, ok ? std::string() : std::move(witness)});
  };
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(name, false, e.what());
    }
  };

  if (!inst.field) {
    add("field.present", false, "instance has no extension field");
    return rep;
  }
  const int n = inst.n();
  const auto un = static_cast<std::size_t>(n);

  if (n == 2) {
    const auto& c = inst.field->minimal_polynomial();
    FElem disc = c[1] * c[1] - FElem(4) * c[0];
    add("minimal_polynomial.irreducible", !is_square_in_F(disc), "discriminant " + disc.to_string() + " is a square in F");
  } else if (n == 3) {
    // A reducible cubic has a linear factor.
    guarded("minimal_polynomial.irreducible", [&] {
      add("minimal_polynomial.irreducible", !has_root_in_F(*inst.field, precision), "the cubic has a root in F");
    });
  }
  guarded("embeddings.separated", [&] {
    auto e = inst.field->embeddings(precision);
    add("embeddings.separated", true);
  });

  add("basis.count", inst.basis.size() == un, "expected " + std::to_string(n) + " basis elements");
  add("lattices.count", inst.lattices.size() == un, "expected " + std::to_string(n) + " lattices");
  add("u.count", inst.u.size() == un, "expected " + std::to_string(n) + " offsets");
  if (inst.basis.size() != un || inst.lattices.size() != un || inst.u.size() != un) return rep;

  for (std::size_t j = 0; j < un; ++j)
    add("basis.nonzero[" + std::to_string(j) + "]", !inst.basis[j].is_zero(), "m_" + std::to_string(j + 1) + " = 0");
  guarded("basis.independent", [&] {
    FMatrix b(un, un);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) b(j, i) = inst.basis[i].coords()[j];
    FElem d = determinant(b);
    add("basis.independent", !d.is_zero(), "coordinate determinant is 0");
  });
  guarded("M.nonsingular", [&] {
    build_M(inst, precision);
    add("M.nonsingular", true);
  });
  for (std::size_t i = 0; i < un; ++i)
    add("lattice.independent[" + std::to_string(i) + "]", inst.lattices[i].independent(),
        "Lambda_" + std::to_string(i + 1) + " basis " + inst.lattices[i].w1.to_string() + ", " + inst.lattices[i].w2.to_string());

  guarded("r.decomposition", [&] {
    KElem diff = inst.r - inst.element(inst.u);
    add("r.decomposition", diff.is_zero(), "r - sum u_i m_i = " + diff.to_string());
  });

  add("units.count", static_cast<int>(inst.units.size()) == n - 1,
      "expected " + std::to_string(n - 1) + " unit generators, got " + std::to_string(inst.units.size()));
  for (std::size_t j = 0; j < inst.units.size(); ++j) {
    const KElem& eps = inst.units[j];
    const std::string tag = "[" + std::to_string(j) + "]";
    guarded("units.relative_norm" + tag, [&] {
      FElem nu = rel_norm(eps);
      add("units.relative_norm" + tag, nu == FElem(1), "rel_norm = " + nu.to_string());
    });
    guarded("units.congruence" + tag, [&] {
      KElem one = KElem::from_F(inst.field, FElem(1));
      add("units.congruence" + tag, congruent_mod_f(inst, eps, one), "epsilon - 1 is not in f");
    });
    guarded("units.lattice_stable" + tag, [&] {
      KElem inv = inverse(eps);
      std::string bad;
      for (std::size_t i = 0; i < un && bad.empty(); ++i)
        for (const FElem& w : {inst.lattices[i].w1, inst.lattices[i].w2}) {
          KElem xi = w * inst.basis[i];
          if (!in_lattice(inst, eps * xi) || !in_lattice(inst, inv * xi)) {
            bad = "epsilon^(+-1) * " + xi.to_string() + " leaves the lattice";
            break;
          }
        }
      add("units.lattice_stable" + tag, bad.empty(), bad);
    });
    guarded("units.coset_stable" + tag, [&] {
      KElem d = eps * inst.r - inst.r;
      add("units.coset_stable" + tag, in_lattice(inst, d), "epsilon r - r = " + d.to_string());
    });
  }

  if (n >= 2 && static_cast<int>(inst.units.size()) == n - 1) {
    guarded("units.independent", [&] {
      PrecisionScope scope(precision);
      auto emb = inst.field->embeddings(precision);
      CMatrix logs(un - 1, un - 1);
      for (std::size_t i = 0; i + 1 < un; ++i)
        for (std::size_t j = 0; j + 1 < un; ++j)
          logs(i, j) = Complex(Real(2) * log(abs(emb->embed(inst.units[j], static_cast<int>(i)))));
      Real reg = abs(determinant(logs).re);
      add("units.independent", reg > Real::pow2(16 - precision), "regulator " + reg.to_string(10));
    });
  }

  add("unit_index.positive", inst.unit_index > 0, "index " + std::to_string(inst.unit_index));
  if (!inst.torsion.empty()) {
    add("unit_index.torsion_divides", inst.unit_index % static_cast<long>(inst.torsion.size()) == 0,
        "index " + std::to_string(inst.unit_index) + " is not a multiple of the torsion order " +
            std::to_string(inst.torsion.size()));
    guarded("torsion.group", [&] {
      KElem one = KElem::from_F(inst.field, FElem(1));
      bool has_one = std::find(inst.torsion.begin(), inst.torsion.end(), one) != inst.torsion.end();
      std::string bad = has_one ? "" : "1 missing from the torsion list";
      for (const auto& a : inst.torsion) {
        for (const auto& b : inst.torsion)
          if (bad.empty() && std::find(inst.torsion.begin(), inst.torsion.end(), a * b) == inst.torsion.end())
            bad = "product " + (a * b).to_string() + " missing from the torsion list";
      }
      add("torsion.group", bad.empty(), bad);
    });
  }

  guarded("character.trivial_on_units", [&] {
    std::string bad;
    std::vector<const KElem*> gens;
    for (const auto& t : inst.torsion) gens.push_back(&t);
    for (const auto& g : inst.unit_group_free) gens.push_back(&g);
    for (const auto& e : inst.units) gens.push_back(&e);
    for (const KElem* g : gens) {
      FElem v = lambda_exact(*g, inst.k, inst.l);
      if (v != FElem(1)) {
        bad = "lambda(" + g->to_string() + ") = " + v.to_string() + " for (k, l) = (" + std::to_string(inst.k) + ", " +
              std::to_string(inst.l) + ")";
        break;
      }
    }
    add("character.trivial_on_units", bad.empty(), bad);
  });
  add("character.k_nonnegative", inst.k >= 0, "k = " + std::to_string(inst.k));
  add("character.l_positive", inst.l > 0, "l = " + std::to_string(inst.l));

  if (inst.conductor) {
    guarded("residues.multiplicative", [&] {
      std::string bad;
      const auto& res = inst.conductor->residues;
      for (const auto& a : res)
        for (const auto& b : res) {
          if (!bad.empty()) break;
          auto t = residue_character_turns(inst, a.representative * b.representative);
          if (!t) {
            bad = "product of residues " + a.representative.to_string() + ", " + b.representative.to_string() +
                  " is not in the table";
            continue;
          }
          mpq_class diff = *t - a.turns - b.turns;
          if (diff.get_den() != 1) bad = "phi is not multiplicative at " + a.representative.to_string();
        }
      add("residues.multiplicative", bad.empty(), bad);
    });
  }

  if (!inst.fb_inverse_basis.empty()) {
    guarded("fb_inverse.matches", [&] {
      std::string bad;
      for (const auto& g : inst.fb_inverse_basis)
        if (!in_lattice(inst, g)) {
          bad = "supplied generator " + g.to_string() + " is not in sum Lambda_i m_i";
          break;
        }
      for (std::size_t i = 0; i < un && bad.empty(); ++i)
        for (const FElem& w : {inst.lattices[i].w1, inst.lattices[i].w2}) {
          KElem xi = w * inst.basis[i];
          if (!in_z_span(inst.fb_inverse_basis, xi)) {
            bad = "pseudo-basis element " + xi.to_string() + " is not in the supplied f b^-1";
            break;
          }
        }
      add("fb_inverse.matches", bad.empty(), bad);
    });
  }
  return rep;
}

}  // namespace eisc
