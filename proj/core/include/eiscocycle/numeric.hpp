#pragma once

// Multiprecision real and complex scalars built on MPFR, plus a small dense
// matrix template shared by the exact and the floating-point code paths.
//
// Every freshly created Real takes the calling thread's working precision.
// Arithmetic results inherit the precision of the object they are written
// into, so a computation that starts at p bits stays at p bits.

#include <mpfr.h>
#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eiscocycle/errors.hpp"

namespace eisc {

inline constexpr int kDefaultPrecision = 128;

int working_precision() noexcept;
void set_working_precision(int bits);

// Sets the working precision for the current thread until destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

class Real {
 public:
  Real() { init(working_precision()); mpfr_set_zero(v_, 1); }
  Real(double x) { init(working_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(int x) { init(working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(long x) { init(working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(long long x) { init(working_precision()); mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN); }
  explicit Real(const mpq_class& q) { init(working_precision()); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  explicit Real(const mpz_class& z) { init(working_precision()); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }

  Real(const Real& o) { init(mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { v_[0] = o.v_[0]; o.v_[0]._mpfr_d = nullptr; }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (!live()) init(mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) {
      if (live()) mpfr_clear(v_);
      v_[0] = o.v_[0];
      o.v_[0]._mpfr_d = nullptr;
    }
    return *this;
  }
  ~Real() { if (live()) mpfr_clear(v_); }

  static Real from_string(std::string_view text);
  static Real pi();
  static Real pow2(long e);

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Decimal rendering with the given number of significant digits (0 picks
  // enough digits to round-trip the binary value).
  std::string to_string(int digits = 0) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long exponent() const { return is_zero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

 private:
  bool live() const { return v_[0]._mpfr_d != nullptr; }
  void init(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

  mpfr_t v_;
};

inline Real operator+(Real a, const Real& b) { a += b; return a; }
inline Real operator-(Real a, const Real& b) { a -= b; return a; }
inline Real operator*(Real a, const Real& b) { a *= b; return a; }
inline Real operator/(Real a, const Real& b) { a /= b; return a; }

inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }
inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }

Real abs(Real x);
Real sqrt(Real x);
Real log(Real x);
Real exp(Real x);
Real sin(Real x);
Real cos(Real x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& base, const Real& e);
Real floor(Real x);
Real ldexp(Real x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
// Nearest integer as a GMP integer (ties away from zero).
mpz_class round_to_integer(const Real& x);
// Copy of x rounded to the given number of bits.
Real with_precision(const Real& x, int bits);

std::ostream& operator<<(std::ostream& os, const Real& x);

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(Real r) : re(std::move(r)), im(0) {}
  Complex(double r) : re(r), im(0) {}
  Complex(int r) : re(r), im(0) {}
  Complex(long r) : re(r), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  static Complex from_strings(std::string_view re, std::string_view im);
  // exp(2*pi*i*t) for rational t; exact on the axes.
  static Complex root_of_unity(const mpq_class& turns);

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& o) { re *= o; im *= o; return *this; }
  Complex& operator/=(const Real& o) { re /= o; im /= o; return *this; }
  Complex operator-() const { return Complex(-re, -im); }
};

inline Complex operator+(Complex a, const Complex& b) { a += b; return a; }
inline Complex operator-(Complex a, const Complex& b) { a -= b; return a; }
inline Complex operator*(Complex a, const Complex& b) { a *= b; return a; }
inline Complex operator/(Complex a, const Complex& b) { a /= b; return a; }
inline Complex operator*(Complex a, const Real& b) { a *= b; return a; }
inline Complex operator*(const Real& b, Complex a) { a *= b; return a; }
inline Complex operator/(Complex a, const Real& b) { a /= b; return a; }
inline Complex operator*(Complex a, long b) { a *= Real(b); return a; }
inline Complex operator*(long b, Complex a) { a *= Real(b); return a; }
inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

Complex conj(Complex z);
// |z|^2, computed with a single rounding.
Real norm(const Complex& z);
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex inverse(const Complex& z);
Complex exp(const Complex& z);
// Integer power by repeated squaring; negative exponents go through inverse().
Complex pow(Complex z, long e);
// Largest of |re|, |im|: a cheap magnitude proxy within a factor sqrt(2).
Real max_abs_component(const Complex& z);
Complex with_precision(const Complex& z, int bits);

std::ostream& operator<<(std::ostream& os, const Complex& z);

// Row-major dense matrix.  T only needs value semantics and construction from
// int, so the same template serves Complex and exact field elements.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw Error("Matrix: data size does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(data_.size());
    for (const auto& v : data_) out.push_back(f(v));
    return Matrix<U>(rows_, cols_, std::move(out));
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error("Matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

template <class T>
bool operator==(const Matrix<T>& a, const Matrix<T>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.data() == b.data();
}

// Row vector times matrix: (xA)_j = sum_i x_i A_ij.
template <class T>
std::vector<T> row_times(const std::vector<T>& x, const Matrix<T>& a) {
  if (x.size() != a.rows()) throw Error("row_times: shape mismatch");
  std::vector<T> y(a.cols(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += x[i] * a(i, j);
  return y;
}

using CMatrix = Matrix<Complex>;

// Gaussian elimination with partial pivoting on |.|.  Throws SingularMatrix
// when a pivot is exactly zero; callers certify conditioning separately.
Complex determinant(CMatrix a);
CMatrix inverse(const CMatrix& a);
// Largest entrywise max_abs_component of a - b.
Real max_entry_difference(const CMatrix& a, const CMatrix& b);

}  // namespace eisc
