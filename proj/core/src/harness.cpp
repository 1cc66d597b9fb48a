#include "eiscocycle/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "eiscocycle/instance_io.hpp"
#include "eiscocycle/unit_homology.hpp"
#include "json.hpp"

namespace eisc {

using nlohmann::json;

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool Report::ok() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == "fail"; }));
}

std::string Report::status() const {
  if (checks.empty()) return "nothing-run";
  return ok() ? "pass" : "fail";
}

std::string Report::to_jsonl() const {
  std::ostringstream os;
  os << json{{"environment", {{"precision", precision}, {"seed", seed}, {"version", kVersion}}}}.dump() << '\n';
  for (const auto& c : checks) {
    json j = {{"name", c.name},         {"status", c.status},       {"measured", c.measured},
              {"expected", c.expected}, {"tolerance", c.tolerance}, {"witness", c.witness}};
    if (!c.metrics.empty()) j["metrics"] = c.metrics;
    if (!c.info.empty()) j["info"] = c.info;
    os << j.dump() << '\n';
  }
  const std::size_t failed = failures();
  os << json{{"summary", status()}, {"checks", checks.size()}, {"failed", failed}}.dump() << '\n';
  return os.str();
}

CheckRecord tolerance_check(const std::string& name, double measured, double tolerance, const std::string& witness) {
  CheckRecord r;
  r.name = name;
  r.measured = measured;
  r.tolerance = tolerance;
  r.status = measured <= tolerance ? "pass" : "fail";
  if (r.status == "fail") r.witness = witness.empty() ? "measured value exceeds tolerance" : witness;
  return r;
}

double matched_norm_bound(double radius, int n) { return std::pow(radius / 2.0, 2.0 * n); }

namespace {

std::string complex_string(const Complex& z) { return z.re.to_string(20) + " " + z.im.to_string(20) + "i"; }

template <class T>
std::string streamed(const T& v) {
  std::ostringstream os;
  if constexpr (std::is_same_v<T, ExactVector>) {
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
  } else {
    os << v;
  }
  return os.str();
}

std::string suffix_s(const Complex& s) {
  std::ostringstream os;
  os << s.re.to_double();
  if (!s.im.is_zero()) os << (s.im.sign() > 0 ? "+" : "") << s.im.to_double() << "i";
  return os.str();
}

// Seeded sampler for the randomised identities.
class Sampler {
 public:
  Sampler(std::uint64_t seed, std::int64_t D) : rng_(seed), d_(D) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  FElem integral(long height) { return FElem(mpq_class(integer(-height, height)), mpq_class(integer(-height, height)), d_); }

  FElem rational(long height) {
    mpq_class a(integer(-height, height), integer(1, height));
    mpq_class b(integer(-height, height), integer(1, height));
    a.canonicalize();
    b.canonicalize();
    return FElem(a, b, d_);
  }

  FMatrix matrix(int n, long height) {
    const auto un = static_cast<std::size_t>(n);
    for (;;) {
      FMatrix a(un, un);
      for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) a(i, j) = integral(height);
      if (!determinant(a).is_zero()) return a;
    }
  }

  ExactVector vector(int n, long height) {
    for (;;) {
      ExactVector x;
      bool nonzero = false;
      for (int i = 0; i < n; ++i) {
        x.push_back(rational(height));
        nonzero = nonzero || !x.back().is_zero();
      }
      if (nonzero) return x;
    }
  }

  HomogPoly polynomial(int n, int max_degree) {
    const int g = static_cast<int>(integer(0, max_degree));
    HomogPoly p(n, g);
    for (const auto& e : exponents_of_degree(n, g)) p.add_term(e, Complex(Real(integer(-3, 3)), Real(integer(-3, 3))));
    p.prune();
    if (p.terms().empty()) p.add_term(exponents_of_degree(n, g).front(), Complex(1));
    return p;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::int64_t d_;
};

constexpr long kEntryHeight = 3;
constexpr long kVectorHeight = 5;
constexpr int kMaxDegree = 2;
constexpr long kToleranceExponent = -96;

struct Worst {
  double ratio = 0.0;
  bool failed = false;
  std::string witness;

  void update(const Real& residual, const Real& scale, int trial, const std::string& detail = "") {
    const Real bound = Real::pow2(kToleranceExponent) * scale;
    double r = scale.is_zero() ? (residual.is_zero() ? 0.0 : HUGE_VAL) : (residual / scale).to_double();
    if (r > ratio) ratio = r;
    if (residual > bound && !failed) {
      failed = true;
      witness = "trial " + std::to_string(trial) + ": residual " + residual.to_string(6) + " scale " + scale.to_string(6) + detail;
    }
  }

  CheckRecord record(const std::string& name, int trials) const {
    CheckRecord r;
    r.name = name;
    r.measured = ratio;
    r.tolerance = std::ldexp(1.0, static_cast<int>(kToleranceExponent));
    r.status = failed ? "fail" : "pass";
    r.witness = witness;
    r.metrics["trials"] = trials;
    return r;
  }
};

Tuple drop(const Tuple& t, std::size_t i) {
  Tuple out;
  for (std::size_t j = 0; j < t.size(); ++j)
    if (j != i) out.push_back(t[j]);
  return out;
}

}  // namespace

Report check_cocycle_relations(const RunConfig& config) {
  Report report;
  report.precision = config.precision;
  report.seed = config.seed;
  PrecisionScope scope(config.precision);
  for (int n : config.dimensions) {
    if (n < 2 || n > 3) throw Error("check_cocycle_relations: dimension must be 2 or 3");
    const auto un = static_cast<std::size_t>(n);
    Sampler rng(config.seed * 1000003ULL + static_cast<std::uint64_t>(n), config.field_D);

    Worst cocycle;
    for (int t = 0; t < config.trials; ++t) {
      Tuple tuple;
      for (int i = 0; i <= n; ++i) tuple.push_back(rng.matrix(n, kEntryHeight));
      if (t % 10 == 9) {
        // Shared columns force det(sigma) = 0 in some faces.
        for (std::size_t r = 0; r < un; ++r) tuple[1](r, 0) = tuple[0](r, 0);
      }
      ExactVector x = rng.vector(n, kVectorHeight);
      HomogPoly p = rng.polynomial(n, kMaxDegree);
      Complex sum(0);
      Real scale(0);
      for (std::size_t i = 0; i <= un; ++i) {
        Complex v = eval_psi(drop(tuple, i), p, x);
        scale = max(scale, abs(v));
        if (i % 2 == 0)
          sum += v;
        else
          sum -= v;
      }
      cocycle.update(abs(sum), scale, t);
    }
    report.add(cocycle.record("cocycle.n" + std::to_string(n), config.trials));

    Worst homog;
    for (int t = 0; t < config.trials; ++t) {
      Tuple tuple;
      for (int i = 0; i < n; ++i) tuple.push_back(rng.matrix(n, kEntryHeight));
      FMatrix a = rng.matrix(n, kEntryHeight);
      ExactVector x = rng.vector(n, kVectorHeight);
      HomogPoly p = rng.polynomial(n, kMaxDegree);
      Tuple moved;
      for (const auto& m : tuple) moved.push_back(a * m);
      Complex lhs = eval_psi(moved, p, x);
      Complex rhs = determinant(a).to_complex() * eval_psi(tuple, act(to_complex(a).transpose(), p), row_times(x, a));
      homog.update(abs(lhs - rhs), max(abs(lhs), abs(rhs)), t,
                   "; lhs " + complex_string(lhs) + " rhs " + complex_string(rhs) + " P " + streamed(p) + " x " + streamed(x));
    }
    report.add(homog.record("homogeneity.n" + std::to_string(n), config.trials));

    Worst factor;
    for (int t = 0; t < config.trials; ++t) {
      FMatrix sigma = rng.matrix(n, kEntryHeight);
      ExactVector x = rng.vector(n, kVectorHeight);
      CMatrix m(un, un);
      for (std::size_t i = 0; i < un; ++i)
        for (std::size_t j = 0; j < un; ++j) m(i, j) = Complex(Real(rng.uniform(-2, 2)), Real(rng.uniform(-2, 2)));
      Complex s(Real(rng.uniform(1.0, 3.0)), Real(rng.uniform(-2.0, 2.0)));
      const int k = static_cast<int>(rng.integer(0, 2));
      Complex lhs = omega(row_times(x, sigma), m, s, k);
      Complex rhs = omega(x, to_complex(sigma) * m, s, k);
      factor.update(abs(lhs - rhs), max(abs(lhs), abs(rhs)), t);
    }
    report.add(factor.record("factor.n" + std::to_string(n), config.trials));
  }
  return report;
}

Report check_norm_form(const FieldInstance& inst, double radius, int precision) {
  PrecisionScope scope(precision);
  Report report;
  report.precision = precision;
  CMatrix m = build_M(inst, precision);
  auto points = enumerate_coset(LatticeCoset::of(inst), m, radius);
  Real worst_q(0), worst_abs(0);
  std::string witness;
  std::size_t used = 0;
  for (const auto& pt : points) {
    KElem xi = inst.element(pt.x);
    if (xi.is_zero()) continue;
    ++used;
    auto w = row_times(to_complex(pt.x), m);
    Complex q(1);
    for (const auto& v : w) q *= v;
    FElem nu = rel_norm(xi);
    Complex nuc = nu.to_complex();
    Real e1 = abs(q - nuc) / abs(nuc);
    Real nq(norm(nu));
    Real e2 = abs(norm(q) - nq) / nq;
    if (e1 > worst_q) {
      worst_q = e1;
      if (witness.empty() && e1 > Real::pow2(kToleranceExponent)) witness = "xi = " + xi.to_string();
    }
    if (e2 > worst_abs) {
      worst_abs = e2;
      if (witness.empty() && e2 > Real::pow2(kToleranceExponent)) witness = "xi = " + xi.to_string();
    }
  }
  const double tol = std::ldexp(1.0, static_cast<int>(kToleranceExponent));
  auto a = tolerance_check("norm_form.relative_norm." + inst.name, worst_q.to_double(), tol, witness);
  a.metrics["points"] = static_cast<double>(used);
  a.metrics["radius"] = radius;
  auto b = tolerance_check("norm_form.absolute_norm." + inst.name, worst_abs.to_double(), tol, witness);
  b.metrics["points"] = static_cast<double>(used);
  b.metrics["radius"] = radius;
  if (used == 0) {
    a.status = b.status = "fail";
    a.witness = b.witness = "no coset points inside the radius";
  }
  report.add(a);
  report.add(b);
  return report;
}

Report check_coset_bijection(const FieldInstance& inst, double radius, int precision) {
  PrecisionScope scope(precision);
  Report report;
  report.precision = precision;
  CMatrix m = build_M(inst, precision);
  auto points = enumerate_coset(LatticeCoset::of(inst), m, radius);
  std::set<std::string> seen;
  CheckRecord r;
  r.name = "coset_bijection." + inst.name;
  r.status = "pass";
  for (const auto& pt : points) {
    KElem xi = inst.element(pt.x);
    if (!in_coset(inst, xi)) {
      r.status = "fail";
      r.witness = "xi = " + xi.to_string() + " is not in the coset";
      break;
    }
    if (basis_coordinates(inst, xi) != pt.x) {
      r.status = "fail";
      r.witness = "coordinates of xi = " + xi.to_string() + " do not round-trip";
      break;
    }
    if (!seen.insert(xi.to_string()).second) {
      r.status = "fail";
      r.witness = "xi = " + xi.to_string() + " appears twice";
      break;
    }
  }
  r.measured = static_cast<double>(points.size());
  r.metrics["radius"] = radius;
  report.add(r);
  return report;
}

CocycleLValues cocycle_side_L(const FieldInstance& inst, const std::vector<KElem>& generators, long unit_index,
                              const RunConfig& config) {
  PrecisionScope scope(config.precision);
  const int n = inst.n();
  BarChain chain = build_cycle(inst, generators, config.precision);
  CMatrix m = build_M(inst, config.precision);
  HomogPoly p = norm_form_poly(m, NormForm::P, inst.l - 1);

  std::vector<std::unique_ptr<PsiEvaluator>> evaluators;
  std::vector<WeightedTuple> weighted;
  for (const auto& term : chain.terms) {
    evaluators.push_back(std::make_unique<PsiEvaluator>(term.tuple, p));
    weighted.push_back(WeightedTuple{term.coefficient, evaluators.back().get()});
  }
  PsiBatchRequest req;
  req.s_values = config.s_grid;
  req.k = inst.k;
  req.radii = config.radius_grid;
  req.precision = config.precision;
  req.workers = config.workers;
  auto psi = eval_Psi_batch(weighted, LatticeCoset::of(inst), m, req);

  Real fact(1);
  for (int j = 2; j < inst.l; ++j) fact *= Real(j);
  Complex factor = determinant(m) * pow(Complex(fact), n) * unit_index;
  CocycleLValues out;
  for (const auto& row : psi) {
    std::vector<Complex> v;
    std::vector<double> t;
    for (const auto& pv : row) {
      v.push_back(pv.value / factor);
      t.push_back((pv.tail_estimate / abs(factor)).to_double());
    }
    out.value.push_back(std::move(v));
    out.tail.push_back(std::move(t));
  }
  return out;
}

ParametrizationResult check_parametrization(const FieldInstance& inst, const RunConfig& config, double rel_tolerance) {
  if (config.s_grid.empty() || config.radius_grid.empty()) throw Error("check_parametrization: empty grid");
  PrecisionScope scope(config.precision);
  ParametrizationResult res;
  res.report.precision = config.precision;
  res.report.seed = config.seed;

  std::vector<double> bounds = config.norm_bound_grid;
  if (bounds.empty())
    for (double r : config.radius_grid) bounds.push_back(matched_norm_bound(r, inst.n()));
  if (bounds.size() != config.radius_grid.size()) throw Error("check_parametrization: R and B grids differ in length");

  CocycleLValues cs = cocycle_side_L(inst, inst.units, inst.unit_index, config);
  res.cocycle_L = cs.value;
  res.cocycle_tail = cs.tail;

  LBatchRequest lreq;
  lreq.s_values = config.s_grid;
  lreq.k = inst.k;
  lreq.l = inst.l;
  lreq.norm_bounds = bounds;
  lreq.precision = config.precision;
  lreq.workers = config.workers;
  res.direct_L = partial_L_batch(inst, lreq);

  for (std::size_t si = 0; si < config.s_grid.size(); ++si) {
    CheckRecord r;
    r.name = "parametrization." + inst.name + ".s=" + suffix_s(config.s_grid[si]);
    r.tolerance = rel_tolerance;
    std::vector<double> diffs;
    for (std::size_t ri = 0; ri < config.radius_grid.size(); ++ri) {
      const Complex& lhs = cs.value[si][ri];
      const LValue& rhs = res.direct_L[si][ri];
      double d = (abs(lhs - rhs.value) / abs(rhs.value)).to_double();
      diffs.push_back(d);
      std::ostringstream key;
      key << "R=" << config.radius_grid[ri];
      r.metrics["rel_diff." + key.str()] = d;
      r.metrics["B." + key.str()] = bounds[ri];
      r.metrics["cocycle_tail." + key.str()] = cs.tail[si][ri];
      r.metrics["L_tail." + key.str()] = rhs.tail_estimate.to_double();
      r.info["cocycle_side." + key.str()] = complex_string(lhs);
      r.info["L_side." + key.str()] = complex_string(rhs.value);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < diffs.size(); ++i) decreasing = decreasing && diffs[i] < diffs[i - 1];
    r.measured = diffs.back();
    // Geometric extrapolation from the last two grid points.
    if (diffs.size() >= 2 && diffs.back() < diffs[diffs.size() - 2]) {
      double q = diffs.back() / diffs[diffs.size() - 2];
      r.metrics["extrapolated_rel_diff"] = diffs.back() * q / (1.0 - q);
    }
    const bool small = diffs.back() <= rel_tolerance;
    r.status = small && decreasing ? "pass" : "fail";
    if (!small) {
      std::ostringstream w;
      w << "relative difference " << diffs.back() << " at the largest grid point exceeds " << rel_tolerance;
      r.witness = w.str();
    } else if (!decreasing) {
      r.witness = "relative differences do not decrease strictly along the grid";
    }
    res.report.add(std::move(r));
  }
  return res;
}

Report check_convergence_domain(const FieldInstance& inst, const Complex& s, double radius, bool expect_convergent,
                                int precision) {
  PrecisionScope scope(precision);
  Report report;
  report.precision = precision;
  BarChain chain = build_cycle(inst, precision);
  CMatrix m = build_M(inst, precision);
  HomogPoly one = HomogPoly::constant(inst.n(), Complex(1));
  std::vector<std::unique_ptr<PsiEvaluator>> evaluators;
  std::vector<WeightedTuple> weighted;
  for (const auto& term : chain.terms) {
    evaluators.push_back(std::make_unique<PsiEvaluator>(term.tuple, one));
    weighted.push_back(WeightedTuple{term.coefficient, evaluators.back().get()});
  }
  PsiBatchRequest req;
  req.s_values = {s};
  req.k = 0;
  req.radii = {radius};
  req.shell_width = radius / 16.0;
  req.precision = precision;
  PsiValue v = eval_Psi_batch(weighted, LatticeCoset::of(inst), m, req)[0][0];

  CheckRecord r;
  r.name = "convergence." + inst.name + ".s=" + suffix_s(s);
  r.measured = v.decay_exponent;
  r.expected = -1.0;
  r.metrics["nonconvergent_flag"] = v.nonconvergent ? 1.0 : 0.0;
  r.metrics["radius"] = radius;
  r.metrics["terms"] = static_cast<double>(v.terms_summed);
  const bool decays = std::isfinite(v.decay_exponent) && v.decay_exponent < -1.0 && !v.nonconvergent;
  if (expect_convergent) {
    r.status = decays ? "pass" : "fail";
    if (!decays) r.witness = "shell sums do not decay faster than 1/j";
  } else {
    r.status = v.nonconvergent ? "pass" : "fail";
    if (!v.nonconvergent) r.witness = "nonconvergence flag did not raise";
  }
  report.add(std::move(r));
  return report;
}

Report run_all(const RunConfig& config) {
  Report report;
  report.precision = config.precision;
  report.seed = config.seed;
  if (config.instance_paths.empty()) return report;

  std::vector<FieldInstance> instances;
  for (const auto& path : config.instance_paths) instances.push_back(load_instance(path));

  std::set<std::pair<std::int64_t, int>> cocycle_done;
  for (const auto& inst : instances) {
    ValidationReport vr = validate_instance(inst, config.precision);
    for (const auto& c : vr.checks) {
      CheckRecord r;
      r.name = "validate." + inst.name + "." + c.name;
      r.status = c.passed ? "pass" : "fail";
      r.witness = c.witness;
      report.add(std::move(r));
    }
    if (!vr.ok()) continue;

    if (cocycle_done.insert({inst.D(), inst.n()}).second && (inst.n() == 2 || inst.n() == 3)) {
      RunConfig cc = config;
      cc.dimensions = {inst.n()};
      cc.field_D = inst.D();
      report.append(check_cocycle_relations(cc));
    }
    const double small = inst.n() == 2 ? 8.0 : 3.0;
    report.append(check_norm_form(inst, small, config.precision));
    report.append(check_coset_bijection(inst, small, config.precision));

    RunConfig pc = config;
    if (pc.s_grid.empty()) pc.s_grid = {Complex(3)};
    if (pc.radius_grid.empty()) pc.radius_grid = inst.n() == 2 ? std::vector<double>{4, 8} : std::vector<double>{2, 4};
    report.append(check_parametrization(inst, pc).report);
  }
  return report;
}

}  // namespace eisc
