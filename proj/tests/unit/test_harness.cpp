#include <cmath>
#include <sstream>

#include "doctest.h"
#include "eiscocycle/harness.hpp"
#include "eiscocycle/instance_io.hpp"
#include "json.hpp"

using namespace eisc;

namespace {
std::string data(const char* name) { return std::string(EISC_DATA_DIR) + "/" + name; }
}  // namespace

TEST_CASE("an empty instance list runs nothing") {
  RunConfig c;
  Report r = run_all(c);
  CHECK(r.checks.empty());
  CHECK(r.status() == "nothing-run");
  CHECK(r.ok());
}

TEST_CASE("reports serialise to parseable JSON lines") {
  Report r;
  r.seed = 9;
  r.add(tolerance_check("a", 0.5, 1.0));
  r.add(tolerance_check("b", 2.0, 1.0));
  std::istringstream in(r.to_jsonl());
  std::string line;
  std::vector<nlohmann::json> lines;
  while (std::getline(in, line)) lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0]["environment"]["seed"] == 9);
  CHECK(lines[1]["status"] == "pass");
  CHECK(lines[2]["status"] == "fail");
  CHECK_FALSE(lines[2]["witness"].get<std::string>().empty());
  CHECK(lines[3]["summary"] == "fail");
  CHECK(r.failures() == 1);
}

TEST_CASE("cocycle identities hold and the report is deterministic") {
  RunConfig c;
  c.trials = 60;
  c.seed = 42;
  Report a = check_cocycle_relations(c);
  Report b = check_cocycle_relations(c);
  CHECK(a.ok());
  CHECK(a.checks.size() == 6);
  CHECK(a.to_jsonl() == b.to_jsonl());
}

TEST_CASE("norm form and coset bijection on the worked instance") {
  auto inst = load_instance(data("q_i_sqrt2.json"));
  Report n = check_norm_form(inst, 6.0, 128);
  CHECK(n.ok());
  Report b = check_coset_bijection(inst, 4.0, 128);
  CHECK(b.ok());
}

TEST_CASE("parametrisation check reports a decreasing difference") {
  auto inst = load_instance(data("q_i_sqrt2.json"));
  RunConfig c;
  c.s_grid = {Complex(3)};
  c.radius_grid = {4.0, 8.0};
  auto res = check_parametrization(inst, c, 1.0);
  REQUIRE(res.report.checks.size() == 1);
  const auto& rec = res.report.checks[0];
  CHECK(rec.metrics.at("rel_diff.R=8") < rec.metrics.at("rel_diff.R=4"));
  CHECK(rec.status == "pass");
}

TEST_CASE("the l = 1 variant runs") {
  auto inst = load_instance(data("q_i_sqrt2.json"));
  auto variant = inst;
  variant.l = 1;
  variant.k = 3;  // lambda is then trivial on the relative norms of roots of unity
  RunConfig c;
  c.s_grid = {Complex(3)};
  c.radius_grid = {3.0, 6.0};
  auto res = check_parametrization(variant, c, 1.0);
  CHECK(res.report.checks.size() == 1);
  CHECK(std::isfinite(res.report.checks[0].measured));
}

TEST_CASE("a failing instance makes run_all fail") {
  RunConfig c;
  c.instance_paths = {std::string(EISC_TEST_DIR) + "/unit/data/bad_unit.json"};
  Report r = run_all(c);
  CHECK_FALSE(r.ok());
  CHECK(r.status() == "fail");
}
