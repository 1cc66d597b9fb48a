#include "eiscocycle/numeric.hpp"

#include <cstdlib>
#include <ostream>
#include <string>

namespace eisc {

namespace {
thread_local int g_precision = kDefaultPrecision;
}

int working_precision() noexcept { return g_precision; }

void set_working_precision(int bits) {
  if (bits < 16 || bits > (1 << 20)) throw Error("working precision out of range: " + std::to_string(bits));
  g_precision = bits;
}

PrecisionScope::PrecisionScope(int bits) : saved_(g_precision) { set_working_precision(bits); }
PrecisionScope::~PrecisionScope() { g_precision = saved_; }

Real Real::from_string(std::string_view text) {
  Real r;
  std::string s(text);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) throw Error("cannot parse real number '" + s + "'");
  return r;
}

Real Real::pi() {
  Real r;
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::pow2(long e) {
  Real r(1);
  mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
  return r;
}

std::string Real::to_string(int digits) const {
  if (digits <= 0) digits = static_cast<int>(precision() * 0.30103) + 2;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

Real abs(Real x) { mpfr_abs(x.get(), x.get(), MPFR_RNDN); return x; }
Real sqrt(Real x) { mpfr_sqrt(x.get(), x.get(), MPFR_RNDN); return x; }
Real log(Real x) { mpfr_log(x.get(), x.get(), MPFR_RNDN); return x; }
Real exp(Real x) { mpfr_exp(x.get(), x.get(), MPFR_RNDN); return x; }
Real sin(Real x) { mpfr_sin(x.get(), x.get(), MPFR_RNDN); return x; }
Real cos(Real x) { mpfr_cos(x.get(), x.get(), MPFR_RNDN); return x; }
Real floor(Real x) { mpfr_floor(x.get(), x.get()); return x; }
Real ldexp(Real x, long e) { mpfr_mul_2si(x.get(), x.get(), e, MPFR_RNDN); return x; }

Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, const Real& e) {
  Real r;
  mpfr_pow(r.get(), base.get(), e.get(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

mpz_class round_to_integer(const Real& x) {
  Real r(x);
  mpfr_round(r.get(), x.get());
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
  return z;
}

Real with_precision(const Real& x, int bits) {
  PrecisionScope scope(bits);
  Real r;
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  auto digits = os.precision();
  return os << x.to_string(digits > 0 ? static_cast<int>(digits) : 0);
}

Complex Complex::from_strings(std::string_view re, std::string_view im) {
  return Complex(Real::from_string(re), Real::from_string(im));
}

Complex Complex::root_of_unity(const mpq_class& turns) {
  // Reduce to [0,1) and special-case the quarter turns so that characters
  // with values in {1, i, -1, -i} stay exact.
  mpq_class t = turns;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  t -= fl;
  if (t == 0) return Complex(1);
  if (t == mpq_class(1, 4)) return Complex(Real(0), Real(1));
  if (t == mpq_class(1, 2)) return Complex(-1);
  if (t == mpq_class(3, 4)) return Complex(Real(0), Real(-1));
  Real angle = Real::pi() * Real(2) * Real(t);
  Real c, s;
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return Complex(std::move(c), std::move(s));
}

Complex& Complex::operator*=(const Complex& o) {
  // Each component is a two-product sum rounded once.
  Real r, i;
  mpfr_fmms(r.get(), re.get(), o.re.get(), im.get(), o.im.get(), MPFR_RNDN);
  mpfr_fmma(i.get(), re.get(), o.im.get(), im.get(), o.re.get(), MPFR_RNDN);
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real d = norm(o);
  if (d.is_zero()) throw DivisionByZero("complex division by zero");
  Real r, i;
  mpfr_fmma(r.get(), re.get(), o.re.get(), im.get(), o.im.get(), MPFR_RNDN);
  mpfr_fmms(i.get(), im.get(), o.re.get(), re.get(), o.im.get(), MPFR_RNDN);
  re = std::move(r) / d;
  im = std::move(i) / d;
  return *this;
}

Complex conj(Complex z) {
  mpfr_neg(z.im.get(), z.im.get(), MPFR_RNDN);
  return z;
}

Real norm(const Complex& z) {
  Real r;
  mpfr_fmma(r.get(), z.re.get(), z.re.get(), z.im.get(), z.im.get(), MPFR_RNDN);
  return r;
}

Real abs(const Complex& z) {
  Real r;
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex inverse(const Complex& z) {
  Real d = norm(z);
  if (d.is_zero()) throw DivisionByZero("inverse of complex zero");
  return Complex(z.re / d, -(z.im / d));
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  Real c, s;
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
  return Complex(c * m, s * m);
}

Complex pow(Complex z, long e) {
  if (e < 0) {
    z = inverse(z);
    e = -e;
  }
  Complex result(1);
  while (e > 0) {
    if (e & 1) result *= z;
    e >>= 1;
    if (e > 0) z *= z;
  }
  return result;
}

Real max_abs_component(const Complex& z) { return max(abs(z.re), abs(z.im)); }

Complex with_precision(const Complex& z, int bits) {
  return Complex(with_precision(z.re, bits), with_precision(z.im, bits));
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << '(' << z.re << ", " << z.im << ')';
}

Complex determinant(CMatrix a) {
  if (!a.square()) throw Error("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  Complex det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    Real best = norm(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      Real v = norm(a(i, k));
      if (v > best) {
        best = std::move(v);
        piv = i;
      }
    }
    if (best.is_zero()) return Complex(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    Complex inv = inverse(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      Complex f = a(i, k) * inv;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

CMatrix inverse(const CMatrix& m) {
  if (!m.square()) throw SingularMatrix("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  CMatrix a = m;
  CMatrix inv = CMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    Real best = norm(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      Real v = norm(a(i, k));
      if (v > best) {
        best = std::move(v);
        piv = i;
      }
    }
    if (best.is_zero()) throw SingularMatrix("matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    Complex p = inverse(a(k, k));
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= p;
      inv(k, j) *= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      Complex f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Real max_entry_difference(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("max_entry_difference: shape mismatch");
  Real worst(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = max(worst, max_abs_component(a(i, j) - b(i, j)));
  return worst;
}

}  // namespace eisc
