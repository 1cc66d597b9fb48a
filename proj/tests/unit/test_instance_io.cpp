#include <string>

#include "doctest.h"
#include "eiscocycle/instance_io.hpp"

using namespace eisc;

TEST_CASE("rationals parse from integers and fractions") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-6/4") == mpq_class(-3, 2));
  CHECK(format_rational(mpq_class(-3, 2)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInstance);
  CHECK_THROWS_AS(parse_rational("x"), InvalidInstance);
}

TEST_CASE("instances survive a JSON round trip") {
  for (const char* name : {"q_i_sqrt2.json", "z_zeta8.json", "cubic_q_i.json"}) {
    CAPTURE(name);
    auto a = load_instance(std::string(EISC_DATA_DIR) + "/" + name);
    auto b = parse_instance(instance_to_json(a));
    CHECK(b.name == a.name);
    CHECK(b.n() == a.n());
    CHECK(b.D() == a.D());
    CHECK(b.basis.size() == a.basis.size());
    for (std::size_t i = 0; i < a.basis.size(); ++i) CHECK(b.basis[i].coords() == a.basis[i].coords());
    CHECK(b.units.front().coords() == a.units.front().coords());
    CHECK(b.unit_index == a.unit_index);
    CHECK(b.k == a.k);
    CHECK(b.l == a.l);
    CHECK(instance_to_json(b) == instance_to_json(a));
  }
}

TEST_CASE("malformed instances are rejected") {
  CHECK_THROWS(parse_instance("{}"));
  CHECK_THROWS(parse_instance("not json"));
  CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), Error);
}

TEST_CASE("vectors and matrices of F elements") {
  auto x = parse_F_vector(R"([["1/2", "0"], [3, -1]])", 1);
  REQUIRE(x.size() == 2);
  CHECK(x[0] == FElem(mpq_class(1, 2)));
  CHECK(x[1] == FElem(mpq_class(3), mpq_class(-1), 1));
  auto t = parse_F_matrices(R"([[[[1,0],[0,0]],[[0,0],[1,0]]]])", 1);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == FMatrix::identity(2));
}
