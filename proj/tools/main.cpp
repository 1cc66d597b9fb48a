// Command line front end: one subcommand per operation, JSON lines out,
// exit status 0 exactly when every check passed.

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "eiscocycle/harness.hpp"
#include "eiscocycle/instance_io.hpp"
#include "json.hpp"

using namespace eisc;
using nlohmann::json;

namespace {

// Accepts "a", "a+bi", "a-bi" and "bi".
Complex parse_complex(const std::string& text) {
  static const std::regex full(R"(^([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)(?:([-+])([0-9]*\.?[0-9]*(?:[eE][-+]?[0-9]+)?)i)?$)");
  static const std::regex imag(R"(^([-+]?[0-9]*\.?[0-9]*(?:[eE][-+]?[0-9]+)?)i$)");
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  std::smatch m;
  if (std::regex_match(t, m, full)) {
    Real im_part(0);
    if (m[2].matched) {
      im_part = Real::from_string(m[3].str().empty() ? "1" : m[3].str());
      if (m[2].str() == "-") im_part = -im_part;
    }
    return Complex(Real::from_string(m[1].str()), im_part);
  }
  if (std::regex_match(t, m, imag)) {
    std::string mag = m[1].str();
    if (mag.empty() || mag == "+") mag = "1";
    if (mag == "-") mag = "-1";
    return Complex(Real(0), Real::from_string(mag));
  }
  throw std::invalid_argument("cannot parse complex number '" + text + "'");
}

json value_record(const std::string& name, const Complex& v, double bound, std::uint64_t terms, const Real& tail) {
  return json{{"name", name},
              {"value_re", v.re.to_string(30)},
              {"value_im", v.im.to_string(30)},
              {"B_or_R", bound},
              {"terms", terms},
              {"tail_estimate", tail.to_double()}};
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eisenstein cocycle and Hecke L-value verification"};
  app.require_subcommand(1);

  std::vector<std::string> instances;
  std::vector<std::string> s_text;
  std::vector<double> radii;
  std::vector<double> bounds;
  int precision = kDefaultPrecision;
  std::uint64_t seed = 1;
  std::string out;
  int k = -1;
  int l = -1;
  unsigned workers = 0;
  int trials = 1000;
  std::string x_text, tuple_text, u_text = "0", w1_text = "1", w2_text = "i";
  double tolerance = 1e-6;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--precision", precision, "working precision in bits")->check(CLI::Range(64, 100000));
    sub->add_option("--out", out, "write records to this file instead of stdout");
    sub->add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
  };
  auto with_instance = [&](CLI::App* sub, bool many) {
    auto* o = sub->add_option("--instance", instances, "instance JSON file")->check(CLI::ExistingFile);
    if (!many) o->expected(1);
    o->required();
  };

  auto* validate = app.add_subcommand("validate", "check an instance for consistency");
  with_instance(validate, false);
  common(validate);

  auto* psi = app.add_subcommand("eval-psi", "evaluate psi(A)(P^(l-1), x) on the unit cycle or a given tuple");
  with_instance(psi, false);
  psi->add_option("--x", x_text, "row vector [[a,b],...] of F coordinates")->required();
  psi->add_option("--tuple", tuple_text, "explicit tuple of matrices; default is the unit cycle");
  psi->add_option("--l", l, "power of the norm form is l - 1 (default from the instance)");
  common(psi);

  auto* Psi = app.add_subcommand("eval-Psi", "truncated Psi_s(E)(P^(l-1), u, M)");
  with_instance(Psi, false);
  Psi->add_option("--s", s_text, "complex s, e.g. 3 or 3+2i")->required();
  Psi->add_option("--radius", radii, "sup-norm radius R")->required();
  Psi->add_option("--k", k, "weight k (default from the instance)");
  common(Psi);

  auto* pl = app.add_subcommand("eval-partial-L", "partial L-function by direct summation");
  with_instance(pl, false);
  pl->add_option("--s", s_text, "complex s")->required();
  pl->add_option("--norm-bound", bounds, "norm bound B")->required();
  pl->add_option("--k", k, "weight k (default from the instance)");
  pl->add_option("--l", l, "weight l (default from the instance)");
  common(pl);

  auto* fl = app.add_subcommand("eval-L", "L(s, chi) assembled from one instance per (b, r)");
  with_instance(fl, true);
  fl->add_option("--s", s_text, "complex s")->required();
  fl->add_option("--norm-bound", bounds, "norm bound B")->required();
  fl->add_option("--k", k, "weight k (default from the first instance)");
  fl->add_option("--l", l, "weight l (default from the first instance)");
  common(fl);

  auto* ekl = app.add_subcommand("eval-Ekl", "truncated elliptic sum E_k^l(u, Lambda, s)");
  ekl->add_option("--u", u_text, "complex offset u");
  ekl->add_option("--w1", w1_text, "first lattice generator");
  ekl->add_option("--w2", w2_text, "second lattice generator");
  ekl->add_option("--k", k, "exponent of conj(w)")->required();
  ekl->add_option("--l", l, "exponent of 1/w")->required();
  ekl->add_option("--s", s_text, "complex s")->required();
  ekl->add_option("--radius", radii, "radius R")->required();
  common(ekl);

  auto* cc = app.add_subcommand("check-cocycle", "randomised cocycle, homogeneity and factor identities");
  cc->add_option("--seed", seed, "random seed");
  cc->add_option("--trials", trials, "trials per dimension");
  common(cc);

  auto* cp = app.add_subcommand("check-parametrization", "compare the cocycle side with the direct L side");
  with_instance(cp, false);
  cp->add_option("--s", s_text, "complex s values")->required();
  cp->add_option("--radius", radii, "R grid")->required();
  cp->add_option("--norm-bound", bounds, "B grid (default (R/2)^(2n))");
  cp->add_option("--tolerance", tolerance, "relative tolerance at the largest grid point");
  common(cp);

  auto* ra = app.add_subcommand("run-all", "every suite on every instance");
  ra->add_option("--instance", instances, "instance JSON files")->check(CLI::ExistingFile);
  ra->add_option("--seed", seed, "random seed");
  ra->add_option("--trials", trials, "trials per dimension for the cocycle identities");
  ra->add_option("--s", s_text, "complex s values for the parametrisation check");
  ra->add_option("--radius", radii, "R grid for the parametrisation check");
  common(ra);

  CLI11_PARSE(app, argc, argv);

  try {
    PrecisionScope scope(precision);
    Output output(out);
    std::ostream& os = output.stream();
    std::vector<Complex> s_values;
    for (const auto& t : s_text) s_values.push_back(parse_complex(t));

    RunConfig config;
    config.instance_paths = instances;
    config.s_grid = s_values;
    config.radius_grid = radii;
    config.norm_bound_grid = bounds;
    config.precision = precision;
    config.seed = seed;
    config.out_path = out;
    config.trials = trials;
    config.workers = workers;

    if (*validate) {
      FieldInstance inst = load_instance(instances.front());
      ValidationReport vr = validate_instance(inst, precision);
      Report report;
      report.precision = precision;
      for (const auto& c : vr.checks) {
        CheckRecord r;
        r.name = c.name;
        r.status = c.passed ? "pass" : "fail";
        r.witness = c.witness;
        report.add(std::move(r));
      }
      os << report.to_jsonl();
      return report.ok() ? 0 : 1;
    }
    if (*psi) {
      FieldInstance inst = load_instance(instances.front());
      ExactVector x = parse_F_vector(x_text, inst.D());
      CMatrix m = build_M(inst, precision);
      HomogPoly p = norm_form_poly(m, NormForm::P, (l > 0 ? l : inst.l) - 1);
      Complex v(0);
      if (!tuple_text.empty()) {
        v = eval_psi(parse_F_matrices(tuple_text, inst.D()), p, x);
      } else {
        BarChain chain = build_cycle(inst, precision);
        v = pair(chain, [&](const Tuple& t) { return eval_psi(t, p, x); });
      }
      os << value_record("eval-psi", v, 0.0, 1, Real(0)).dump() << '\n';
      return 0;
    }
    if (*Psi) {
      FieldInstance inst = load_instance(instances.front());
      CMatrix m = build_M(inst, precision);
      HomogPoly p = norm_form_poly(m, NormForm::P, inst.l - 1);
      BarChain chain = build_cycle(inst, precision);
      std::vector<std::unique_ptr<PsiEvaluator>> ev;
      std::vector<WeightedTuple> wt;
      for (const auto& t : chain.terms) {
        ev.push_back(std::make_unique<PsiEvaluator>(t.tuple, p));
        wt.push_back({t.coefficient, ev.back().get()});
      }
      PsiBatchRequest req;
      req.s_values = s_values;
      req.k = k >= 0 ? k : inst.k;
      req.radii = radii;
      req.precision = precision;
      req.workers = workers;
      auto res = eval_Psi_batch(wt, LatticeCoset::of(inst), m, req);
      bool ok = true;
      for (std::size_t si = 0; si < res.size(); ++si)
        for (const auto& v : res[si]) {
          json j = value_record("eval-Psi", v.value, v.radius, v.terms_summed, v.tail_estimate);
          j["s"] = s_text[si];
          j["decay_exponent"] = v.decay_exponent;
          j["nonconvergent"] = v.nonconvergent;
          j["warnings"] = v.warnings;
          ok = ok && !v.nonconvergent;
          os << j.dump() << '\n';
        }
      return ok ? 0 : 1;
    }
    if (*pl) {
      FieldInstance inst = load_instance(instances.front());
      LBatchRequest req;
      req.s_values = s_values;
      req.k = k >= 0 ? k : inst.k;
      req.l = l > 0 ? l : inst.l;
      req.norm_bounds = bounds;
      req.precision = precision;
      req.workers = workers;
      auto res = partial_L_batch(inst, req);
      for (std::size_t si = 0; si < res.size(); ++si)
        for (const auto& v : res[si]) {
          json j = value_record("eval-partial-L", v.value, v.norm_bound, v.terms, v.tail_estimate);
          j["s"] = s_text[si];
          j["warnings"] = v.warnings;
          os << j.dump() << '\n';
        }
      return 0;
    }
    if (*fl) {
      std::vector<FieldInstance> entries;
      for (const auto& path : instances) entries.push_back(load_instance(path));
      HeckeCharData chr{k >= 0 ? k : entries.front().k, l > 0 ? l : entries.front().l};
      for (std::size_t si = 0; si < s_values.size(); ++si)
        for (double b : bounds) {
          LValue v = full_L(entries, chr, s_values[si], b, precision);
          json j = value_record("eval-L", v.value, b, v.terms, v.tail_estimate);
          j["s"] = s_text[si];
          j["warnings"] = v.warnings;
          os << j.dump() << '\n';
        }
      return 0;
    }
    if (*ekl) {
      Complex u = parse_complex(u_text), w1 = parse_complex(w1_text), w2 = parse_complex(w2_text);
      for (std::size_t si = 0; si < s_values.size(); ++si)
        for (double r : radii) {
          Complex v = eval_Ekl(u, w1, w2, k, l, s_values[si], r, precision);
          json j = value_record("eval-Ekl", v, r, 0, Real(0));
          j["s"] = s_text[si];
          os << j.dump() << '\n';
        }
      return 0;
    }
    Report report;
    if (*cc) {
      report = check_cocycle_relations(config);
    } else if (*cp) {
      FieldInstance inst = load_instance(instances.front());
      report = check_parametrization(inst, config, tolerance).report;
    } else if (*ra) {
      report = run_all(config);
    }
    os << report.to_jsonl();
    return report.ok() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << '\n';
    return 2;
  }
}
