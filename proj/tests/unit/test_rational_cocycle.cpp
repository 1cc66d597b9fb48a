#include <random>

#include "doctest.h"
#include "eiscocycle/rational_cocycle.hpp"
#include "oracles.hpp"

using namespace eisc;

namespace {

const FElem I(mpq_class(0), mpq_class(1), 1);

FMatrix fm(std::initializer_list<std::initializer_list<long>> rows) {
  FMatrix a(rows.size(), rows.size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long v : r) a(i, j++) = FElem(v);
    ++i;
  }
  return a;
}

Real rel(const Complex& a, const Complex& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST_CASE("f(I)(1, x) = 1 / (x1 x2)") {
  ExactVector x = {FElem(mpq_class(3, 2)), FElem(mpq_class(-2), mpq_class(1), 1)};
  Complex got = eval_f(CMatrix::identity(2), HomogPoly::constant(2, Complex(1)), to_complex(x));
  Complex want = inverse((x[0] * x[1]).to_complex());
  CHECK(rel(got, want) <= Real::pow2(-120));
}

TEST_CASE("f(I)(x1 x2, x) = 1 / (x1 x2)^2") {
  ExactVector x = {FElem(5), FElem(mpq_class(1), mpq_class(1), 1)};
  Complex got = eval_f(CMatrix::identity(2), HomogPoly::monomial({1, 1}), to_complex(x));
  Complex want = inverse(pow((x[0] * x[1]).to_complex(), 2));
  CHECK(rel(got, want) <= Real::pow2(-120));
}

TEST_CASE("f with columns (1,0), (1,1) and P = 1") {
  ExactVector x = {FElem(2), FElem(7)};
  Complex got = eval_f(to_complex(fm({{1, 1}, {0, 1}})), HomogPoly::constant(2, Complex(1)), to_complex(x));
  CHECK(rel(got, Complex(Real(1) / Real(18))) <= Real::pow2(-120));
}

TEST_CASE("vanishing pairings are signalled or zeroed") {
  std::vector<Complex> x = {Complex(0), Complex(1)};
  HomogPoly one = HomogPoly::constant(2, Complex(1));
  CHECK_THROWS_AS(eval_f(CMatrix::identity(2), one, x), DivisionByZero);
  CHECK(eval_f_or_zero(CMatrix::identity(2), one, x) == Complex(0));
}

TEST_CASE("column selection by the first nonvanishing pairing") {
  Tuple id2 = {FMatrix::identity(2), FMatrix::identity(2)};
  CHECK(decompose_X(id2, {FElem(0), FElem(1)}) == std::vector<int>{1, 1});
  CHECK(decompose_X(id2, {FElem(4), FElem(1)}) == std::vector<int>{0, 0});
  Tuple id3 = {FMatrix::identity(3), FMatrix::identity(3), FMatrix::identity(3)};
  CHECK(decompose_X(id3, {FElem(0), FElem(0), FElem(1)}) == std::vector<int>{2, 2, 2});
  Tuple sw = {fm({{0, 1}, {1, 0}}), FMatrix::identity(2)};
  CHECK(decompose_X(sw, {FElem(1), FElem(0)})[0] == 1);
  CHECK_THROWS(decompose_X(id2, {FElem(0), FElem(0)}));
}

TEST_CASE("decompose_X agrees with select_columns on random inputs") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<long> d(-1, 1);
  for (int t = 0; t < 10000; ++t) {
    Tuple tuple;
    for (int k = 0; k < 2; ++k) {
      FMatrix a(2, 2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) a(i, j) = FElem(d(rng));
      tuple.push_back(a);
    }
    ExactVector x = {FElem(d(rng)), FElem(d(rng))};
    if (x[0].is_zero() && x[1].is_zero()) continue;
    bool ok = true;
    for (const auto& a : tuple) ok = ok && !(a.col(0)[0].is_zero() && a.col(0)[1].is_zero() && a.col(1)[0].is_zero() && a.col(1)[1].is_zero());
    if (!ok) continue;
    try {
      auto d1 = decompose_X(tuple, x);
      auto sel = select_columns(tuple, x);
      CHECK(sel.d == d1);
    } catch (const Error&) {
      CHECK_THROWS(select_columns(tuple, x));
    }
  }
}

TEST_CASE("psi of a tuple selecting the standard basis") {
  // Column 0 of the swap matrix is e2, so the selected sigma is the identity.
  Tuple id = {FMatrix::identity(2), fm({{0, 1}, {1, 0}})};
  ExactVector x = {FElem(mpq_class(1, 3)), FElem(mpq_class(2), mpq_class(-1), 1)};
  Complex got = eval_psi(id, HomogPoly::constant(2, Complex(1)), x);
  CHECK(rel(got, inverse((x[0] * x[1]).to_complex())) <= Real::pow2(-120));
  CHECK(eval_psi(id, HomogPoly::constant(2, Complex(1)), {FElem(0), FElem(0)}) == Complex(0));
}

TEST_CASE("psi vanishes when the selected columns are dependent") {
  Tuple t = {FMatrix::identity(2), FMatrix::identity(2)};
  t[1](0, 0) = FElem(1);
  t[1](1, 0) = FElem(0);
  // both select column 0 for generic x
  CHECK(eval_psi(t, HomogPoly::constant(2, Complex(1)), {FElem(1), FElem(1)}) == Complex(0));
}

TEST_CASE("the cached evaluator agrees with direct evaluation") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<long> d(-3, 3);
  Tuple t = {fm({{1, 2}, {0, 1}}), fm({{2, 1}, {1, 1}})};
  HomogPoly p = HomogPoly::linear_form({Complex(1), Complex(Real(0), Real(2))});
  PsiEvaluator ev(t, p);
  for (int k = 0; k < 50; ++k) {
    ExactVector x = {FElem(mpq_class(d(rng)), mpq_class(d(rng)), 1), FElem(mpq_class(d(rng)), mpq_class(d(rng)), 1)};
    Complex a = ev(x);
    Complex b = eval_psi(t, p, x);
    CHECK(abs(a - b) <= Real::pow2(-110) * (Real(1) + abs(b)));
  }
}

TEST_CASE("f agrees with symbolic differentiation on a few points") {
  std::mt19937 rng(21);
  std::uniform_int_distribution<long> d(-3, 3);
  std::uniform_int_distribution<long> num(-5, 5), den(1, 5);
  int done = 0;
  while (done < 20) {
    FMatrix sigma(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) sigma(i, j) = FElem(mpq_class(d(rng)), mpq_class(d(rng)), 1);
    if (determinant(sigma).is_zero()) continue;
    ExactVector x = {FElem(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)), 1),
                     FElem(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)), 1)};
    if (pairing(x, sigma, 0).is_zero() || pairing(x, sigma, 1).is_zero()) continue;
    const int g = done % 4;
    std::map<Exponent, FElem> exact;
    HomogPoly p(2, g);
    for (const auto& e : exponents_of_degree(2, g)) {
      FElem c(mpq_class(d(rng)), mpq_class(d(rng)), 1);
      exact[e] = c;
      p.add_term(e, c.to_complex());
    }
    FElem want = oracle::differentiate_f(sigma, exact, x);
    Complex got = eval_f(to_complex(sigma), p, to_complex(x));
    if (want.is_zero())
      CHECK(abs(got) <= Real::pow2(-100));
    else
      CHECK(rel(got, want.to_complex()) <= Real::pow2(-100));
    ++done;
  }
}
