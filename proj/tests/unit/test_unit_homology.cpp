#include "doctest.h"
#include "eiscocycle/instance_io.hpp"
#include "eiscocycle/unit_homology.hpp"

using namespace eisc;

namespace {

FieldInstance load(const char* name) { return load_instance(std::string(EISC_DATA_DIR) + "/" + name); }

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

}  // namespace

TEST_CASE("varrho of 1 is the identity and varrho is multiplicative") {
  auto inst = load("cubic_q_i.json");
  CHECK(varrho(KElem::from_F(inst.field, 1), inst) == FMatrix::identity(3));
  KElem a(inst.field, {FElem(1), FElem(2), FElem(mpq_class(0), mpq_class(1), 1)});
  KElem b(inst.field, {FElem(-1), FElem(0), FElem(3)});
  CHECK(varrho(a * b, inst) == varrho(a, inst) * varrho(b, inst));
}

TEST_CASE("varrho of 3 + 2 sqrt2") {
  auto inst = load("q_i_sqrt2.json");
  FMatrix r = varrho(inst.units[0], inst);
  CHECK(r == fm({{3, 2}, {4, 3}}));
  CHECK(varrho_residual(inst.units[0], inst, 128) <= Real::pow2(8 - 128));
}

TEST_CASE("regulator of the worked instance") {
  auto inst = load("q_i_sqrt2.json");
  PrecisionScope scope(160);
  RegulatorData reg = regulator(inst, 160);
  Real want = Real(2) * log(Real(3) + Real(2) * sqrt(Real(2)));
  CHECK(abs(reg.regulator - want) <= Real::pow2(-150));
  CHECK(reg.regulator.to_double() == doctest::Approx(3.52549).epsilon(1e-5));
  CHECK(reg.rho == -1);

  RegulatorData inv = regulator(inst, {inverse(inst.units[0])}, 160);
  CHECK(abs(inv.regulator + reg.regulator) <= Real::pow2(-150));
  KElem i = KElem::from_F(inst.field, FElem(mpq_class(0), mpq_class(1), 1));
  RegulatorData rot = regulator(inst, {i * inst.units[0]}, 160);
  CHECK(abs(rot.regulator - reg.regulator) <= Real::pow2(-150));
  CHECK_THROWS_AS(regulator(inst, {KElem::from_F(inst.field, 1)}, 128), DegenerateRegulator);
}

TEST_CASE("the cycle for n = 2 is -(1, varrho(eps))") {
  auto inst = load("q_i_sqrt2.json");
  BarChain e = build_cycle(inst, 128);
  REQUIRE(e.terms.size() == 1);
  CHECK(e.terms[0].coefficient == -1);
  REQUIRE(e.terms[0].tuple.size() == 2);
  CHECK(e.terms[0].tuple[0] == FMatrix::identity(2));
  CHECK(e.terms[0].tuple[1] == varrho(inst.units[0], inst));
  CHECK(chain_to_json(e).find("\"coeff\":-1") != std::string::npos);
}

TEST_CASE("the cycle for n = 3 has two terms of opposite sign") {
  auto inst = load("cubic_q_i.json");
  BarChain e = build_cycle(inst, 128);
  REQUIRE(e.terms.size() == 2);
  CHECK(e.terms[0].coefficient == -e.terms[1].coefficient);
  for (const auto& t : e.terms) CHECK(t.tuple.size() == 3);
}

TEST_CASE("simplex orientation matches the cycle coefficients") {
  for (const char* name : {"q_i_sqrt2.json", "cubic_q_i.json", "z_zeta8.json"}) {
    CAPTURE(name);
    auto inst = load(name);
    BarChain e = build_cycle(inst, 128);
    auto perms = signed_permutations(inst.n() - 1);
    REQUIRE(perms.size() == e.terms.size());
    for (std::size_t i = 0; i < perms.size(); ++i) {
      Real det = simplex_orientation(inst, inst.units, perms[i].first, 128);
      CHECK(det.sign() == static_cast<int>(e.terms[i].coefficient));
      // |det| = n |R|
      RegulatorData reg = regulator(inst, 128);
      CHECK(abs(abs(det) - Real(inst.n()) * abs(reg.regulator)) <= Real::pow2(-100));
    }
  }
}

TEST_CASE("pairing a chain") {
  auto inst = load("q_i_sqrt2.json");
  BarChain empty;
  CHECK(pair(empty, [](const Tuple&) { return Complex(1); }) == Complex(0));
  BarChain twice;
  twice.terms.push_back({3, {FMatrix::identity(2), FMatrix::identity(2)}});
  twice.terms.push_back({-3, {FMatrix::identity(2), FMatrix::identity(2)}});
  CHECK(pair(twice, [](const Tuple&) { return Complex(Real(0.7), Real(2)); }) == Complex(0));

  BarChain e = build_cycle(inst, 128);
  CMatrix m = build_M(inst, 128);
  HomogPoly p = norm_form_poly(m, NormForm::P, 1);
  ExactVector x = {FElem(mpq_class(2), mpq_class(1), 1), FElem(-1)};
  Complex got = pair(e, [&](const Tuple& t) { return eval_psi(t, p, x); });
  Complex want = -eval_psi({FMatrix::identity(2), varrho(inst.units[0], inst)}, p, x);
  CHECK(got == want);
}

TEST_CASE("unit orbit sums tend to det M (l-1)!^2 / Q(x)^l") {
  auto inst = load("q_i_sqrt2.json");
  PrecisionScope scope(128);
  CMatrix m = build_M(inst, 128);
  HomogPoly p = norm_form_poly(m, NormForm::P, 1);  // l = 2
  ExactVector x = {FElem(mpq_class(3), mpq_class(1), 1), FElem(mpq_class(1), mpq_class(-2), 1)};
  Complex q(1);
  for (const auto& w : row_times(to_complex(x), m)) q *= w;
  Complex want = determinant(m) / (q * q);
  Complex got = unit_orbit_partial_sum(inst, p, x, 30, 128);
  CHECK(abs(got - want) <= Real(1e-20) * abs(want));
}
