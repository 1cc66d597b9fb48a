#include "eiscocycle/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace eisc {

using nlohmann::json;

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw InvalidInstance("malformed rational '" + text + "'");
  if (q.get_den() == 0) throw InvalidInstance("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string format_rational(const mpq_class& q) { return q.get_str(10); }

namespace {

mpq_class read_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InvalidInstance("expected a rational (integer or \"p/q\" string), got " + j.dump());
}

FElem read_F(const json& j, std::int64_t D) {
  if (!j.is_array() || j.size() != 2) throw InvalidInstance("F element must be [a, b], got " + j.dump());
  return FElem(read_rational(j[0]), read_rational(j[1]), D);
}

KElem read_K(const json& j, const FieldPtr& field) {
  if (!j.is_array() || static_cast<int>(j.size()) != field->degree())
    throw InvalidInstance("K element must list " + std::to_string(field->degree()) + " F coordinates, got " + j.dump());
  std::vector<FElem> c;
  for (const auto& e : j) c.push_back(read_F(e, field->D()));
  return KElem(field, std::move(c));
}

std::vector<KElem> read_K_list(const json& j, const FieldPtr& field) {
  std::vector<KElem> out;
  if (j.is_null()) return out;
  for (const auto& e : j) out.push_back(read_K(e, field));
  return out;
}

json write_F(const FElem& x) { return json::array({format_rational(x.a()), format_rational(x.b())}); }

json write_K(const KElem& x) {
  json j = json::array();
  for (const auto& c : x.coords()) j.push_back(write_F(c));
  return j;
}

json write_K_list(const std::vector<KElem>& xs) {
  json j = json::array();
  for (const auto& x : xs) j.push_back(write_K(x));
  return j;
}

}  // namespace

FieldInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("instance is not valid JSON: ") + e.what());
  }
  try {
    FieldInstance inst;
    inst.name = j.value("name", std::string("unnamed"));
    const auto D = j.at("D").get<std::int64_t>();
    std::vector<FElem> minpoly;
    for (const auto& c : j.at("minpoly")) minpoly.push_back(read_F(c, D));
    inst.field = std::make_shared<const ExtensionField>(D, std::move(minpoly));

    inst.basis = read_K_list(j.at("basis"), inst.field);
    for (const auto& lat : j.at("lattices")) {
      if (!lat.is_array() || lat.size() != 2) throw InvalidInstance("lattice must be [w1, w2]");
      inst.lattices.push_back({read_F(lat[0], D), read_F(lat[1], D)});
    }
    for (const auto& c : j.at("u")) inst.u.push_back(read_F(c, D));
    inst.r = j.contains("r") ? read_K(j.at("r"), inst.field) : inst.element(inst.u);
    inst.units = read_K_list(j.at("units"), inst.field);
    inst.torsion = read_K_list(j.value("torsion", json()), inst.field);
    inst.unit_group_free = read_K_list(j.value("unit_group_free", json()), inst.field);
    inst.unit_index = j.at("unit_index").get<long>();
    if (j.contains("conductor") && !j.at("conductor").is_null()) {
      const auto& c = j.at("conductor");
      Conductor cond;
      cond.z_basis = read_K_list(c.at("z_basis"), inst.field);
      for (const auto& r : c.at("residues"))
        cond.residues.push_back({read_K(r.at("rep"), inst.field), read_rational(r.value("turns", json(0)))});
      inst.conductor = std::move(cond);
    }
    inst.fb_inverse_basis = read_K_list(j.value("fb_inverse_basis", json()), inst.field);
    if (j.contains("character")) {
      inst.k = j.at("character").value("k", 0);
      inst.l = j.at("character").value("l", 1);
    }
    if (j.contains("class_data")) {
      const auto& c = j.at("class_data");
      if (c.contains("chi_b")) {
        const auto& v = c.at("chi_b");
        inst.class_data.chi_b = Complex::from_strings(v.at(0).get<std::string>(), v.at(1).get<std::string>());
      }
      if (c.contains("norm_b")) inst.class_data.norm_b = read_rational(c.at("norm_b"));
      if (c.contains("phi_turns")) inst.class_data.phi_turns = read_rational(c.at("phi_turns"));
    }
    return inst;
  } catch (const json::exception& e) {
    throw InvalidInstance(std::string("malformed instance: ") + e.what());
  }
}

FieldInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance("cannot open instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string instance_to_json(const FieldInstance& inst) {
  json j;
  j["name"] = inst.name;
  j["D"] = inst.D();
  json mp = json::array();
  for (const auto& c : inst.field->minimal_polynomial()) mp.push_back(write_F(c));
  j["minpoly"] = mp;
  j["basis"] = write_K_list(inst.basis);
  json lats = json::array();
  for (const auto& l : inst.lattices) lats.push_back(json::array({write_F(l.w1), write_F(l.w2)}));
  j["lattices"] = lats;
  json u = json::array();
  for (const auto& c : inst.u) u.push_back(write_F(c));
  j["u"] = u;
  j["r"] = write_K(inst.r);
  j["units"] = write_K_list(inst.units);
  j["torsion"] = write_K_list(inst.torsion);
  j["unit_group_free"] = write_K_list(inst.unit_group_free);
  j["unit_index"] = inst.unit_index;
  if (inst.conductor) {
    json res = json::array();
    for (const auto& r : inst.conductor->residues)
      res.push_back({{"rep", write_K(r.representative)}, {"turns", format_rational(r.turns)}});
    j["conductor"] = {{"z_basis", write_K_list(inst.conductor->z_basis)}, {"residues", res}};
  } else {
    j["conductor"] = nullptr;
  }
  if (!inst.fb_inverse_basis.empty()) j["fb_inverse_basis"] = write_K_list(inst.fb_inverse_basis);
  j["character"] = {{"k", inst.k}, {"l", inst.l}};
  j["class_data"] = {{"chi_b", json::array({inst.class_data.chi_b.re.to_string(), inst.class_data.chi_b.im.to_string()})},
                     {"norm_b", format_rational(inst.class_data.norm_b)},
                     {"phi_turns", format_rational(inst.class_data.phi_turns)}};
  return j.dump(2);
}

std::vector<FElem> parse_F_vector(const std::string& json_text, std::int64_t D) {
  json j = json::parse(json_text);
  if (!j.is_array()) throw InvalidInstance("expected an array of F elements");
  std::vector<FElem> out;
  for (const auto& e : j) out.push_back(read_F(e, D));
  return out;
}

std::vector<FMatrix> parse_F_matrices(const std::string& json_text, std::int64_t D) {
  json j = json::parse(json_text);
  if (!j.is_array()) throw InvalidInstance("expected an array of matrices");
  std::vector<FMatrix> out;
  for (const auto& m : j) {
    const std::size_t n = m.size();
    FMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      if (m[r].size() != n) throw InvalidInstance("matrix rows must have " + std::to_string(n) + " entries");
      for (std::size_t c = 0; c < n; ++c) a(r, c) = read_F(m[r][c], D);
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace eisc
