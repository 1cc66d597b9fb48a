#pragma once

// Verification suites and their structured reports.  Every suite returns a
// Report whose records carry the measured quantity, the tolerance it was
// held to and, on failure, a witness.  Reports serialise as JSON lines.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eiscocycle/eisenstein_sum.hpp"
#include "eiscocycle/exact_field.hpp"
#include "eiscocycle/hecke_l.hpp"

namespace eisc {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::vector<std::string> instance_paths;
  std::string operation;
  std::vector<Complex> s_grid;
  std::vector<double> radius_grid;
  // Empty means B = (R/2)^(2n) for each R in radius_grid.
  std::vector<double> norm_bound_grid;
  int precision = kDefaultPrecision;
  std::uint64_t seed = 1;
  std::string out_path;
  int trials = 1000;
  std::vector<int> dimensions = {2, 3};
  std::int64_t field_D = 1;
  unsigned workers = 0;
};

struct CheckRecord {
  std::string name;
  std::string status;  // "pass", "fail" or "info"
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string witness;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> info;
};

struct Report {
  std::vector<CheckRecord> checks;
  int precision = kDefaultPrecision;
  std::uint64_t seed = 0;

  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  void append(const Report& other);
  bool ok() const;
  std::size_t failures() const;
  // "pass", "fail" or "nothing-run".
  std::string status() const;
  // One JSON object per line: environment, each record, then a summary.
  std::string to_jsonl() const;
};

// Standard record for a quantity compared against a tolerance.
CheckRecord tolerance_check(const std::string& name, double measured, double tolerance, const std::string& witness = "");

// Alternating-sum and homogeneity identities of psi on seeded random
// tuples over O_F, plus the factor identity Omega(x sigma, M) = Omega(x, sigma M).
Report check_cocycle_relations(const RunConfig& config);

// Q(x) = N_{K/F}(xi) and |Q(x)|^2 = N_{K/Q}(xi) on every coset point with
// sup-norm at most radius.
Report check_norm_form(const FieldInstance& inst, double radius, int precision);

// xi = sum x_i m_i maps the Eisenstein enumeration injectively into
// fb^-1 + r and back, exactly.
Report check_coset_bijection(const FieldInstance& inst, double radius, int precision);

// Both sides of the parametrisation identity on the (s, R, B) grid.  A
// record per s carries every relative difference; the check passes when
// the difference at the largest grid point is at most rel_tolerance and
// the sequence is strictly decreasing.
struct ParametrizationResult {
  Report report;
  // [s][R] values: cocycle side divided by det M ((l-1)!)^n [U:V], its tail
  // in the same normalisation, and the L side.
  std::vector<std::vector<Complex>> cocycle_L;
  std::vector<std::vector<double>> cocycle_tail;
  std::vector<std::vector<LValue>> direct_L;
};
ParametrizationResult check_parametrization(const FieldInstance& inst, const RunConfig& config,
                                            double rel_tolerance = 1e-6);

// The cocycle-side L-value with an alternative generator set for V_f and
// the matching index.
struct CocycleLValues {
  std::vector<std::vector<Complex>> value;  // [s][R]
  std::vector<std::vector<double>> tail;
};
CocycleLValues cocycle_side_L(const FieldInstance& inst, const std::vector<KElem>& generators, long unit_index,
                              const RunConfig& config);

// Shell decay of Psi_s(E)(1, u, M) with k = 0 at the given s.
Report check_convergence_domain(const FieldInstance& inst, const Complex& s, double radius, bool expect_convergent,
                                int precision);

// Every suite on every configured instance.  No instances gives an empty
// report with status "nothing-run".
Report run_all(const RunConfig& config);

// Matched norm bound for a sup-norm radius.
double matched_norm_bound(double radius, int n);

}  // namespace eisc
