#include "eiscocycle/hecke_l.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "eiscocycle/eisenstein_sum.hpp"
#include "eiscocycle/parallel.hpp"
#include "lattice_enum.hpp"

namespace eisc {

Complex lambda_char(const KElem& a, int k, int l, int precision) {
  if (a.is_zero()) throw DivisionByZero("lambda of zero");
  PrecisionScope scope(precision);
  Complex nu = rel_norm(a).to_complex();
  Complex out = pow(inverse(nu), l);
  if (k != 0) out *= pow(conj(nu), k);
  return out;
}

namespace {

// Solves the (n-1) x (n-1) system sum_j c_j L[i][j] = rhs[i] at the working
// precision.
std::vector<Real> solve_log_system(const std::vector<std::vector<Real>>& L, const std::vector<Real>& rhs) {
  const std::size_t r = rhs.size();
  CMatrix a(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) a(i, j) = Complex(L[i][j]);
  CMatrix inv = inverse(a);
  std::vector<Real> c(r, Real(0));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) c[j] += inv(j, i).re * rhs[i];
  return c;
}

std::vector<std::vector<Real>> unit_log_rows(const std::vector<KElem>& units, int n, int precision) {
  // rows[i][j] = 2 log|rho_i(eps_j)|
  std::vector<std::vector<Real>> rows(static_cast<std::size_t>(n), std::vector<Real>(units.size()));
  for (std::size_t j = 0; j < units.size(); ++j) {
    auto v = log_vector(units[j], precision);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) rows[i][j] = v[i];
  }
  return rows;
}

std::vector<Real> log_coordinates_from(const std::vector<Real>& ell, const std::vector<std::vector<Real>>& rows) {
  const std::size_t n = ell.size();
  Real mean(0);
  for (const auto& v : ell) mean += v;
  mean /= Real(static_cast<long>(n));
  std::vector<Real> rhs;
  for (std::size_t i = 0; i + 1 < n; ++i) rhs.push_back(ell[i] - mean);
  return solve_log_system(rows, rhs);
}

// Integer nearest to c when c lies within 2^(16-p) of it.
std::optional<long> snapped_integer(const Real& c, int precision) {
  Real r(round_to_integer(c));
  if (abs(c - r) <= Real::pow2(16 - precision)) return static_cast<long>(r.to_double());
  return std::nullopt;
}

bool in_unit_interval(const Real& c, int precision) {
  if (auto k = snapped_integer(c, precision)) return *k == 0;
  return c.sign() > 0 && c < Real(1);
}

void check_units(const std::vector<KElem>& units, int n) {
  if (static_cast<int>(units.size()) != n - 1) throw Error("need n - 1 unit generators");
}

}  // namespace

std::vector<Real> log_coordinates(const KElem& xi, const std::vector<KElem>& units, int precision) {
  if (xi.is_zero()) throw DivisionByZero("log coordinates of zero");
  const int n = xi.degree();
  check_units(units, n);
  PrecisionScope scope(precision);
  return log_coordinates_from(log_vector(xi, precision), unit_log_rows(units, n, precision));
}

KElem reduce_mod_units(const KElem& xi, const std::vector<KElem>& units, int precision) {
  auto c = log_coordinates(xi, units, precision);
  KElem out = xi;
  for (std::size_t j = 0; j < c.size(); ++j) {
    long e;
    if (auto k = snapped_integer(c[j], precision))
      e = *k;
    else
      e = static_cast<long>(floor(c[j]).to_double());
    if (e != 0) out *= pow(units[j], -e);
  }
  return out;
}

namespace {

struct LRecord {
  std::vector<long> z;
  mpq_class norm;  // |N_{K/Q}(xi)|
  FElem nu;        // N_{K/F}(xi)
};

}  // namespace

std::vector<std::vector<LValue>> partial_L_batch(const FieldInstance& inst, const LBatchRequest& request) {
  if (request.s_values.empty() || request.norm_bounds.empty()) throw Error("partial_L: empty s or norm-bound grid");
  if (request.k < 0) throw Error("partial_L: k must be nonnegative");
  if (request.l < 1) throw Error("partial_L: l must be positive");
  for (double b : request.norm_bounds)
    if (!(b > 0.0) || !std::isfinite(b)) throw Error("partial_L: norm bounds must be positive");
  if (inst.unit_index < 1) throw InvalidInstance("unit index must be positive");
  const int n = inst.n();
  check_units(inst.units, n);
  const int p = request.precision;
  PrecisionScope scope(p);
  const auto un = static_cast<std::size_t>(n);

  // Log geometry of V_f, in MPFR for the borderline decisions and in double
  // for the bulk filter.
  auto rows = unit_log_rows(inst.units, n, p);
  std::vector<std::vector<double>> rows_d(un, std::vector<double>(un - 1));
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j + 1 < un; ++j) rows_d[i][j] = rows[i][j].to_double();
  std::vector<std::vector<double>> inv_d(un - 1, std::vector<double>(un - 1));
  {
    std::vector<std::vector<Real>> top(rows.begin(), rows.end() - 1);
    for (std::size_t e = 0; e + 1 < un; ++e) {
      std::vector<Real> rhs(un - 1, Real(0));
      rhs[e] = Real(1);
      auto col = solve_log_system(top, rhs);
      for (std::size_t j = 0; j + 1 < un; ++j) inv_d[j][e] = col[j].to_double();
    }
  }

  std::vector<double> bounds_sorted = request.norm_bounds;
  std::sort(bounds_sorted.begin(), bounds_sorted.end());
  const double bmax = bounds_sorted.back();
  const mpq_class bmax_q(bmax);

  // A V_f-reduced xi with norm <= B and log coordinates c has 2 log|rho_i(xi)|
  // = log N / n + sum_j c_j L_ij.  The cube of c is cut into m^(n-1) cells,
  // each enumerated inside its own box, so that the boxes hug the domain
  // when the unit logs are large.  A point is kept only by the cell that
  // holds its computed c, hence exactly once.
  double max_log = 0.0;
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = 0; j + 1 < un; ++j) max_log = std::max(max_log, std::abs(rows_d[i][j]));
  const long cells_per_axis = std::clamp(static_cast<long>(std::ceil(max_log)), 1L, n == 2 ? 16L : 6L);
  long cell_count = 1;
  for (std::size_t j = 0; j + 1 < un; ++j) cell_count *= cells_per_axis;

  CMatrix M = build_M(inst, p);
  LatticeCoset coset = LatticeCoset::of(inst);
  detail::AffineCosetMap dmap(inst.lattices, inst.u, M);

  const double tol = 1e-7;
  const double log_bmax = std::log(bmax);
  std::vector<LRecord> records;
  std::uint64_t candidates = 0;
  std::vector<detail::cd> w(un);
  std::vector<double> ell(un);
  std::vector<double> cd_coords(un - 1);
  std::vector<long> cell(un - 1);

  for (long flat = 0; flat < cell_count; ++flat) {
    long rest = flat;
    for (std::size_t j = 0; j + 1 < un; ++j) {
      cell[j] = rest % cells_per_axis;
      rest /= cells_per_axis;
    }
    std::vector<double> box(un);
    for (std::size_t i = 0; i < un; ++i) {
      double e = log_bmax / n;
      for (std::size_t j = 0; j + 1 < un; ++j) {
        const double lo = static_cast<double>(cell[j]) / cells_per_axis - tol;
        const double hi = static_cast<double>(cell[j] + 1) / cells_per_axis + tol;
        e += std::max(lo * rows_d[i][j], hi * rows_d[i][j]);
      }
      box[i] = std::exp(0.5 * e) * (1.0 + 1e-9);
    }
    std::vector<std::vector<double>> G;
    std::vector<double> c0;
    dmap.real_form(box, G, c0);

    detail::visit_short_vectors(G, c0, static_cast<double>(n) * (1.0 + 1e-9), [&](const long* z) {
      if (++candidates > request.max_candidates)
        throw BoxIncomplete("norm bound needs more than " + std::to_string(request.max_candidates) + " candidates");
      dmap.image(z, w.data());
      double log_norm = 0.0;
      for (std::size_t i = 0; i < un; ++i) {
        double a = std::norm(w[i]);
        if (a == 0.0) {
          log_norm = -HUGE_VAL;
          break;
        }
        ell[i] = std::log(a);
        log_norm += ell[i];
      }
      if (log_norm == -HUGE_VAL) {
        // Only xi = 0 has a vanishing embedding, and it is dropped below.
        return;
      }
      if (log_norm > log_bmax + tol * (1.0 + std::abs(log_bmax))) return;
      for (std::size_t j = 0; j + 1 < un; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i + 1 < un; ++i) v += inv_d[j][i] * (ell[i] - log_norm / n);
        cd_coords[j] = v;
      }
      bool borderline = false;
      for (std::size_t j = 0; j + 1 < un; ++j) {
        const double v = cd_coords[j];
        if (v < -tol || v > 1.0 + tol) return;
        if (std::abs(v) <= tol || std::abs(v - 1.0) <= tol) borderline = true;
        const double clamped = std::clamp(v, 0.0, 1.0);
        const long owner = std::min(static_cast<long>(std::floor(clamped * cells_per_axis)), cells_per_axis - 1);
        if (owner != cell[j]) return;
      }

      std::vector<long> zv(z, z + 2 * un);
      ExactVector x = coset.point(zv);
      KElem xi = inst.element(x);
      if (xi.is_zero()) return;
      if (borderline) {
        auto c = log_coordinates_from(log_vector(xi, p), rows);
        for (const auto& v : c)
          if (!in_unit_interval(v, p)) return;
      }
      FElem nu = rel_norm(xi);
      mpq_class nrm = norm(nu);
      if (nrm > bmax_q) return;
      if (!prime_to_conductor(inst, xi)) return;
      records.push_back(LRecord{std::move(zv), std::move(nrm), std::move(nu)});
    });
  }

  std::sort(records.begin(), records.end(), [](const LRecord& a, const LRecord& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.z < b.z;
  });

  // Segment = first bound (ascending) containing the norm; shell = index of
  // N^(1/2n) in steps of the shell width.  Both are monotone in the sorted
  // order, so each (segment, shell) group is a contiguous run.
  const double rho_min = std::pow(bounds_sorted.front(), 0.5 / n);
  const double width = request.shell_width > 0.0 ? request.shell_width : rho_min / 8.0;
  std::vector<mpq_class> bounds_q;
  for (double b : bounds_sorted) bounds_q.emplace_back(b);

  struct Group {
    std::size_t segment;
    int shell;
    std::size_t begin, end;
  };
  std::vector<Group> groups;
  {
    std::size_t seg = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      while (records[i].norm > bounds_q[seg]) ++seg;
      double rho = std::pow(records[i].norm.get_d(), 0.5 / n);
      int shell = std::max(0, static_cast<int>(std::ceil(rho / width)) - 1);
      if (groups.empty() || groups.back().segment != seg || groups.back().shell != shell)
        groups.push_back({seg, shell, i, i});
      groups.back().end = i + 1;
    }
  }

  constexpr std::size_t kChunk = 1024;
  struct Chunk {
    std::size_t group, begin, end;
  };
  std::vector<Chunk> chunks;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t b = groups[g].begin; b < groups[g].end; b += kChunk)
      chunks.push_back({g, b, std::min(groups[g].end, b + kChunk)});

  const std::size_t ns = request.s_values.size();
  std::vector<std::vector<Complex>> chunk_sum(chunks.size());
  parallel_for_chunks(chunks.size(), request.workers ? request.workers : default_workers(), [&](std::size_t ci) {
    std::vector<Complex> sum(ns, Complex(0));
    for (std::size_t r = chunks[ci].begin; r < chunks[ci].end; ++r) {
      const LRecord& rec = records[r];
      FElem lam = pow(inverse(rec.nu), request.l);
      if (request.k != 0) lam *= pow(conj(rec.nu), request.k);
      Complex lc = lam.to_complex();
      Real ln = log(Real(rec.norm));
      for (std::size_t si = 0; si < ns; ++si) {
        const Complex& s = request.s_values[si];
        sum[si] += lc * exp(Complex(-(s.re * ln), -(s.im * ln)));
      }
    }
    chunk_sum[ci] = std::move(sum);
  });

  std::vector<std::vector<Complex>> group_sum(groups.size(), std::vector<Complex>(ns));
  for (std::size_t si = 0; si < ns; ++si) {
    std::size_t c = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::vector<Complex> parts;
      while (c < chunks.size() && chunks[c].group == g) parts.push_back(chunk_sum[c++][si]);
      group_sum[g][si] = tree_sum(parts, 0, parts.size(), Complex(0));
    }
  }

  const Real index_inv = Real(1) / Real(inst.unit_index);
  std::vector<std::vector<LValue>> out(ns);
  for (std::size_t si = 0; si < ns; ++si) {
    const Complex& s = request.s_values[si];
    for (double b : request.norm_bounds) {
      const std::size_t rank =
          static_cast<std::size_t>(std::lower_bound(bounds_sorted.begin(), bounds_sorted.end(), b) - bounds_sorted.begin());
      const int shells = std::max(1, static_cast<int>(std::ceil(std::pow(b, 0.5 / n) / width - 1e-9)));
      LValue v;
      v.norm_bound = b;
      v.shell_width = width;
      v.value = Complex(0);
      v.shell_sums.assign(static_cast<std::size_t>(shells), Complex(0));
      for (std::size_t g = 0; g < groups.size() && groups[g].segment <= rank; ++g) {
        v.value += group_sum[g][si];
        v.terms += groups[g].end - groups[g].begin;
        const auto sh = static_cast<std::size_t>(std::min(groups[g].shell, shells - 1));
        v.shell_sums[sh] += group_sum[g][si];
      }
      v.value *= index_inv;
      for (auto& x : v.shell_sums) x *= index_inv;
      v.tail_estimate = shell_tail_estimate(v.shell_sums);
      if (s.re.to_double() <= 1.0 + (request.k - request.l) / 2.0)
        v.warnings.push_back("Re(s) <= 1 + (k - l)/2: outside the half-plane of absolute convergence");
      out[si].push_back(std::move(v));
    }
  }
  return out;
}

LValue partial_L(const FieldInstance& inst, const Complex& s, int k, int l, double norm_bound, int precision) {
  LBatchRequest req;
  req.s_values = {s};
  req.k = k;
  req.l = l;
  req.norm_bounds = {norm_bound};
  req.precision = precision;
  return partial_L_batch(inst, req)[0][0];
}

LValue full_L(const std::vector<FieldInstance>& entries, const HeckeCharData& chr, const Complex& s, double norm_bound,
              int precision) {
  PrecisionScope scope(precision);
  LValue out;
  out.norm_bound = norm_bound;
  out.value = Complex(0);
  out.tail_estimate = Real(0);
  for (const auto& inst : entries) {
    LValue part = partial_L(inst, s, chr.k, chr.l, norm_bound, precision);
    const ClassData& cd = inst.class_data;
    Real ln = log(Real(cd.norm_b));
    Complex factor = cd.chi_b * exp(Complex(-(s.re * ln), -(s.im * ln))) * Complex::root_of_unity(cd.phi_turns);
    out.value += factor * part.value;
    out.terms += part.terms;
    out.tail_estimate += abs(factor) * part.tail_estimate;
    for (auto& w : part.warnings) out.warnings.push_back(inst.name + ": " + w);
  }
  return out;
}

Complex eval_Ekl(const Complex& u, const Complex& w1, const Complex& w2, int k, int l, const Complex& s, double radius,
                 int precision) {
  if (l < 1) throw Error("eval_Ekl: l must be positive");
  if (k < 0) throw Error("eval_Ekl: k must be nonnegative");
  PrecisionScope scope(precision);
  const Complex uu = with_precision(u, precision);
  const Complex a = with_precision(w1, precision);
  const Complex b = with_precision(w2, precision);
  std::vector<std::vector<double>> G = {{a.re.to_double(), b.re.to_double()}, {a.im.to_double(), b.im.to_double()}};
  std::vector<double> c = {uu.re.to_double(), uu.im.to_double()};
  auto cand = detail::short_vectors(G, c, radius * radius * (1.0 + 1e-9) + 1e-9);

  const Real r2 = Real(radius) * Real(radius);
  const Real scale = max(Real(1), max(norm(a), norm(b)));
  const Real zero_tol = Real::pow2(8 - 2 * precision) * scale;
  std::vector<Complex> terms;
  for (std::size_t i = 0; i + 1 < cand.size(); i += 2) {
    Complex w = uu + a * cand[i] + b * cand[i + 1];
    Real m2 = norm(w);
    if (m2 <= zero_tol * (Real(1) + Real(std::abs(cand[i])) + Real(std::abs(cand[i + 1])))) continue;
    if (m2 > r2) continue;
    Real lm = log(m2);
    Complex t = exp(Complex(-(s.re * lm), -(s.im * lm))) * pow(inverse(w), l);
    if (k != 0) t *= pow(conj(w), k);
    terms.push_back(std::move(t));
  }
  return tree_sum(terms, 0, terms.size(), Complex(0));
}

}  // namespace eisc
