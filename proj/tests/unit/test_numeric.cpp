#include "doctest.h"
#include "eiscocycle/numeric.hpp"

using namespace eisc;

TEST_CASE("precision scope restores the previous precision") {
  const int before = working_precision();
  {
    PrecisionScope scope(256);
    CHECK(working_precision() == 256);
    Real x(1);
    CHECK(mpfr_get_prec(x.get()) == 256);
  }
  CHECK(working_precision() == before);
}

TEST_CASE("square root of two squares back to two within an ulp") {
  PrecisionScope scope(200);
  Real r = sqrt(Real(2));
  CHECK(abs(r * r - Real(2)) <= Real::pow2(-196));
}

TEST_CASE("roots of unity at quarter turns are exact") {
  CHECK(Complex::root_of_unity(mpq_class(1, 4)) == Complex(Real(0), Real(1)));
  CHECK(Complex::root_of_unity(mpq_class(1, 2)) == Complex(-1));
  CHECK(Complex::root_of_unity(mpq_class(3, 4)) == Complex(Real(0), Real(-1)));
  CHECK(Complex::root_of_unity(mpq_class(0)) == Complex(1));
  Complex z = Complex::root_of_unity(mpq_class(1, 8));
  CHECK(abs(pow(z, 8) - Complex(1)) <= Real::pow2(-120));
}

TEST_CASE("complex division inverts multiplication") {
  Complex a(Real(3), Real(-7)), b(Real(0.5), Real(2));
  Complex q = (a * b) / b;
  CHECK(abs(q - a) <= Real::pow2(-120));
  CHECK(abs(inverse(b) * b - Complex(1)) <= Real::pow2(-124));
}

TEST_CASE("integer powers handle negative exponents") {
  Complex z(Real(1), Real(1));
  CHECK(abs(pow(z, -2) * pow(z, 2) - Complex(1)) <= Real::pow2(-124));
  CHECK(pow(z, 0) == Complex(1));
}

TEST_CASE("matrix determinant and inverse") {
  CMatrix a(3, 3);
  const double v[3][3] = {{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = Complex(v[i][j]);
  CHECK(abs(determinant(a) - Complex(18)) <= Real::pow2(-120));
  CMatrix prod = a * inverse(a);
  CHECK(max_entry_difference(prod, CMatrix::identity(3)) <= Real::pow2(-120));
}

TEST_CASE("singular matrices are rejected") {
  CMatrix a(2, 2);
  a(0, 0) = Complex(1);
  a(0, 1) = Complex(2);
  a(1, 0) = Complex(2);
  a(1, 1) = Complex(4);
  CHECK_THROWS_AS(inverse(a), SingularMatrix);
}

TEST_CASE("moved-from reals can be reassigned") {
  Real a(5);
  Real b(std::move(a));
  a = Real(7);
  CHECK(a == Real(7));
  CHECK(b == Real(5));
}

TEST_CASE("rounding to an integer") {
  CHECK(round_to_integer(Real(2.4)) == 2);
  CHECK(round_to_integer(Real(-2.6)) == -3);
}
