#include <string>

#include "doctest.h"
#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/instance_io.hpp"

using namespace eisc;

namespace {

const FElem I(mpq_class(0), mpq_class(1), 1);

FieldInstance worked() { return load_instance(std::string(EISC_DATA_DIR) + "/q_i_sqrt2.json"); }

// a + b theta in the worked field
KElem k2(const FieldInstance& inst, const FElem& a, const FElem& b) { return KElem(inst.field, {a, b}); }

bool witness_contains(const ValidationReport& r, const std::string& name, const std::string& text) {
  const ValidationCheck* c = r.find(name);
  return c && !c->passed && c->witness.find(text) != std::string::npos;
}

}  // namespace

TEST_CASE("F arithmetic") {
  FElem a(mpq_class(1, 2), mpq_class(3), 1);
  CHECK(a * inverse(a) == FElem(1));
  CHECK(norm(a) == mpq_class(1, 4) + 9);
  CHECK(conj(a) == FElem(mpq_class(1, 2), mpq_class(-3), 1));
  CHECK(I * I == FElem(-1));
  CHECK(pow(I, -3) == I);
  CHECK_THROWS_AS(inverse(FElem(0)), DivisionByZero);
}

TEST_CASE("elements of different imaginary quadratic fields do not mix") {
  FElem a(mpq_class(0), mpq_class(1), 1), b(mpq_class(0), mpq_class(1), 2);
  CHECK_THROWS(a + b);
  CHECK(a + FElem(3) == FElem(mpq_class(3), mpq_class(1), 1));
}

TEST_CASE("relative norms in Q(i)(sqrt2)") {
  auto inst = worked();
  CHECK(rel_norm(k2(inst, 3, 2)) == FElem(1));
  CHECK(rel_norm(k2(inst, 0, 1)) == FElem(-2));
  CHECK(rel_norm(k2(inst, I, 0)) == FElem(-1));
  KElem x = k2(inst, FElem(mpq_class(2), mpq_class(-1), 1), FElem(mpq_class(1, 3)));
  KElem y = k2(inst, 5, I);
  CHECK(rel_norm(x * y) == rel_norm(x) * rel_norm(y));
  CHECK(x * inverse(x) == KElem::from_F(inst.field, 1));
}

TEST_CASE("embeddings are sorted and fix F") {
  auto inst = worked();
  PrecisionScope scope(160);
  auto emb = inst.field->embeddings(160);
  REQUIRE(emb->size() == 2);
  Real r2 = sqrt(Real(2));
  KElem s = k2(inst, 0, 1);
  CHECK(abs(emb->embed(s, 0) - Complex(r2)) <= Real::pow2(-150));
  CHECK(abs(emb->embed(s, 1) + Complex(r2)) <= Real::pow2(-150));
  CHECK(embed(KElem::from_F(inst.field, 1), 0, 160) == Complex(1));
  KElem f = KElem::from_F(inst.field, FElem(mpq_class(3), mpq_class(-2), 1));
  CHECK(emb->embed(f, 0) == emb->embed(f, 1));
  CHECK(emb->embed(f, 0) == FElem(mpq_class(3), mpq_class(-2), 1).to_complex());
}

TEST_CASE("embeddings of a cubic relative extension") {
  auto inst = load_instance(std::string(EISC_DATA_DIR) + "/cubic_q_i.json");
  auto emb = inst.field->embeddings(128);
  REQUIRE(emb->size() == 3);
  // theta = 2 cos(2 pi / 7) and its conjugates, all real.
  for (int i = 0; i < 3; ++i) CHECK(abs(emb->theta_image(i).im) <= Real::pow2(-120));
  CHECK(emb->theta_image(0).re > emb->theta_image(1).re);
  CHECK(emb->theta_image(1).re > emb->theta_image(2).re);
  KElem x = KElem(inst.field, {FElem(1), FElem(2), FElem(-1)});
  Complex prod(1);
  for (int i = 0; i < 3; ++i) prod *= emb->embed(x, i);
  CHECK(abs(prod - rel_norm(x).to_complex()) <= Real::pow2(-110));
}

TEST_CASE("the matrix M for m = (1, sqrt2)") {
  auto inst = worked();
  PrecisionScope scope(128);
  CMatrix m = build_M(inst, 128);
  Real r2 = sqrt(Real(2));
  CHECK(m(0, 0) == Complex(1));
  CHECK(m(0, 1) == Complex(1));
  CHECK(abs(m(1, 0) - Complex(r2)) <= Real::pow2(-126));
  CHECK(abs(m(1, 1) + Complex(r2)) <= Real::pow2(-126));
  CHECK(abs(determinant(m) + Complex(Real(2) * r2)) <= Real::pow2(-120));
  CMatrix prod = m.transpose() * inverse(m).transpose();
  CHECK(max_entry_difference(prod, CMatrix::identity(2)) <= Real::pow2(8 - 128));
}

TEST_CASE("coordinates, lattices and cosets") {
  auto inst = worked();
  KElem xi = k2(inst, FElem(mpq_class(2), mpq_class(1), 1), FElem(-3));
  auto c = basis_coordinates(inst, xi);
  CHECK(c[0] == FElem(mpq_class(2), mpq_class(1), 1));
  CHECK(c[1] == FElem(-3));
  CHECK(in_lattice(inst, xi));
  CHECK_FALSE(in_lattice(inst, k2(inst, FElem(mpq_class(1, 2)), 0)));
  Lattice2 z{FElem(2), FElem(mpq_class(1), mpq_class(1), 1)};
  CHECK(z.contains(FElem(mpq_class(3), mpq_class(1), 1)));
  CHECK_FALSE(z.contains(FElem(1)));
  CHECK(z.independent());
}

TEST_CASE("lambda of sqrt2 with k = 0, l = 2 is 1/4") {
  auto inst = worked();
  CHECK(lambda_exact(k2(inst, 0, 1), 0, 2) == FElem(mpq_class(1, 4)));
  CHECK(lambda_exact(k2(inst, 3, 2), 0, 2) == FElem(1));
  CHECK(lambda_exact(KElem::from_F(inst.field, 1), 3, 5) == FElem(1));
}

TEST_CASE("validation accepts the shipped instances") {
  for (const char* name : {"q_i_sqrt2.json", "z_zeta8.json", "cubic_q_i.json"}) {
    CAPTURE(name);
    auto inst = load_instance(std::string(EISC_DATA_DIR) + "/" + name);
    ValidationReport r = validate_instance(inst);
    for (const auto& c : r.checks) {
      CAPTURE(c.name);
      CAPTURE(c.witness);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("validation rejects a unit of relative norm -1") {
  auto inst = worked();
  inst.units = {k2(inst, 1, 1)};
  ValidationReport r = validate_instance(inst);
  CHECK_FALSE(r.ok());
  CHECK(witness_contains(r, "units.relative_norm[0]", "rel_norm = -1"));
}

TEST_CASE("validation reports the exact offset mismatch") {
  auto inst = worked();
  inst.r = k2(inst, 0, FElem(mpq_class(1, 2)));
  ValidationReport r = validate_instance(inst);
  const ValidationCheck* c = r.find("r.decomposition");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK(c->witness.find("1/2") != std::string::npos);
}

TEST_CASE("validation rejects a reducible polynomial and a bad character") {
  auto inst = worked();
  auto bad_l = inst;
  bad_l.l = 1;  // lambda(i) = -1 for k + l odd
  CHECK_FALSE(validate_instance(bad_l).find("character.trivial_on_units")->passed);

  FieldInstance red = parse_instance(instance_to_json(inst));
  auto field = std::make_shared<const ExtensionField>(1, std::vector<FElem>{FElem(-4), FElem(0)});
  red.field = field;
  red.basis = {KElem(field, {1, 0}), KElem(field, {0, 1})};
  red.r = KElem(field, {0, 0});
  red.units = {KElem(field, {3, 2})};
  red.torsion = {KElem::from_F(field, 1)};
  red.unit_group_free = {};
  red.fb_inverse_basis = {};
  CHECK_FALSE(validate_instance(red).find("minimal_polynomial.irreducible")->passed);
}

TEST_CASE("cubic irreducibility is decided by roots in F") {
  auto cubic = load_instance(std::string(EISC_DATA_DIR) + "/cubic_q_i.json");
  CHECK(validate_instance(cubic).find("minimal_polynomial.irreducible")->passed);

  // (x - i/2)(x^2 - 2) has the root i/2 in F.
  auto red = cubic;
  const FElem half_i(mpq_class(0), mpq_class(1, 2), 1);
  red.field = std::make_shared<const ExtensionField>(
      1, std::vector<FElem>{FElem(mpq_class(0), mpq_class(1), 1), FElem(-2), -half_i});
  CHECK_FALSE(validate_instance(red).find("minimal_polynomial.irreducible")->passed);
}

TEST_CASE("congruences modulo a conductor") {
  auto inst = worked();
  Conductor f;
  // f = (2): Z-basis 2, 2i, 2 sqrt2, 2i sqrt2
  f.z_basis = {k2(inst, 2, 0), k2(inst, 2 * I, 0), k2(inst, 0, 2), k2(inst, 0, 2 * I)};
  f.residues = {{KElem::from_F(inst.field, 1), mpq_class(0)}};
  inst.conductor = f;
  CHECK(congruent_mod_f(inst, k2(inst, 5, 4), k2(inst, 1, 0)));
  CHECK_FALSE(congruent_mod_f(inst, k2(inst, 5, 3), k2(inst, 1, 0)));
  CHECK(prime_to_conductor(inst, k2(inst, 3, 2)));
  CHECK_FALSE(prime_to_conductor(inst, k2(inst, 0, 1)));
}
