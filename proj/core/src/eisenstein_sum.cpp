#include "eiscocycle/eisenstein_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eiscocycle/parallel.hpp"
#include "lattice_enum.hpp"

namespace eisc {

LatticeCoset LatticeCoset::of(const FieldInstance& inst) { return LatticeCoset{inst.lattices, inst.u}; }

ExactVector LatticeCoset::point(const std::vector<long>& z) const {
  const std::size_t n = lattices.size();
  if (z.size() != 2 * n || u.size() != n) throw Error("LatticeCoset::point: coordinate count mismatch");
  ExactVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = u[i];
    if (z[2 * i] != 0) x[i] += FElem(z[2 * i]) * lattices[i].w1;
    if (z[2 * i + 1] != 0) x[i] += FElem(z[2 * i + 1]) * lattices[i].w2;
  }
  return x;
}

namespace {

using detail::cd;

// Maps integer coordinates z to w = xM in double (for enumeration) and at
// the working precision (for the terms themselves).
struct Geometry {
  int n = 0;
  int m = 0;
  detail::AffineCosetMap dmap;
  std::vector<Complex> gen;
  std::vector<Complex> uc;
  const CMatrix* M = nullptr;

  Geometry(const LatticeCoset& coset, const CMatrix& mat)
      : n(coset.n()), m(2 * coset.n()), dmap(coset.lattices, coset.u, mat), M(&mat) {
    for (const auto& lat : coset.lattices) {
      gen.push_back(lat.w1.to_complex());
      gen.push_back(lat.w2.to_complex());
    }
    for (const auto& v : coset.u) uc.push_back(v.to_complex());
  }

  std::vector<Complex> xc(const long* z) const {
    std::vector<Complex> x;
    x.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      Complex v = uc[static_cast<std::size_t>(j)];
      for (int b = 0; b < 2; ++b) {
        long c = z[2 * j + b];
        if (c != 0) v += gen[static_cast<std::size_t>(2 * j + b)] * c;
      }
      x.push_back(std::move(v));
    }
    return x;
  }

  std::vector<Complex> w(const std::vector<Complex>& x) const { return row_times(x, *M); }

  double sup_d(const long* z) const {
    std::vector<cd> w(static_cast<std::size_t>(n));
    dmap.image(z, w.data());
    double best = 0.0;
    for (const auto& v : w) best = std::max(best, std::abs(v));
    return best;
  }

  Real sup2(const long* z) const {
    auto ww = w(xc(z));
    Real best(0);
    for (const auto& v : ww) best = max(best, norm(v));
    return best;
  }
};

// Points sorted by (shell, z), integer coordinates stored flat.
struct CompactPoints {
  int m = 0;
  std::vector<long> z;
  std::vector<int> shell;
  std::size_t size() const { return shell.size(); }
  const long* at(std::size_t i) const { return z.data() + i * static_cast<std::size_t>(m); }
};

CompactPoints enumerate_compact(const Geometry& g, double radius, double width) {
  if (!(radius > 0.0) || !(width > 0.0)) throw Error("enumeration needs a positive radius and shell width");
  // The sup-norm ball lies inside the Euclidean ball of radius sqrt(n) R.
  std::vector<std::vector<double>> G;
  std::vector<double> c;
  g.dmap.real_form({}, G, c);
  std::vector<long> cand = detail::short_vectors(G, c, g.n * radius * radius * (1.0 + 1e-9) + 1e-9);
  const auto um = static_cast<std::size_t>(g.m);
  const std::size_t count = cand.size() / um;

  const Real R(radius);
  const Real Wr(width);
  const double tol = 1e-9;
  std::vector<std::size_t> keep;
  std::vector<int> shells;
  for (std::size_t p = 0; p < count; ++p) {
    const long* z = cand.data() + p * um;
    double s = g.sup_d(z);
    if (s > radius * (1.0 + tol) + tol) continue;
    double t = s / width;
    int shell = s == 0.0 ? 0 : static_cast<int>(std::ceil(t)) - 1;
    bool near_boundary = std::abs(t - std::round(t)) < tol * (1.0 + t) || std::abs(s - radius) < tol * (1.0 + radius);
    if (near_boundary) {
      // Settle the ambiguous cases at the working precision.
      Real s2 = g.sup2(z);
      if (s2 > R * R) continue;
      if (s2.is_zero()) {
        shell = 0;
      } else {
        long j = std::max(0L, std::lround(t));
        Real edge = Wr * Real(j);
        shell = s2 <= edge * edge ? static_cast<int>(j) - 1 : static_cast<int>(j);
        shell = std::max(shell, 0);
      }
    }
    keep.push_back(p);
    shells.push_back(std::max(shell, 0));
  }

  std::vector<std::size_t> order(keep.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (shells[a] != shells[b]) return shells[a] < shells[b];
    const long* za = cand.data() + keep[a] * um;
    const long* zb = cand.data() + keep[b] * um;
    return std::lexicographical_compare(za, za + um, zb, zb + um);
  });

  CompactPoints out;
  out.m = g.m;
  out.z.reserve(order.size() * um);
  out.shell.reserve(order.size());
  for (std::size_t idx : order) {
    const long* z = cand.data() + keep[idx] * um;
    out.z.insert(out.z.end(), z, z + um);
    out.shell.push_back(shells[idx]);
  }
  return out;
}

bool all_zero(const ExactVector& x) {
  return std::all_of(x.begin(), x.end(), [](const FElem& v) { return v.is_zero(); });
}

}  // namespace

std::vector<CosetPoint> enumerate_coset(const LatticeCoset& coset, const CMatrix& m, double radius, double shell_width) {
  Geometry g(coset, m);
  CompactPoints pts = enumerate_compact(g, radius, shell_width > 0.0 ? shell_width : radius / 16.0);
  std::vector<CosetPoint> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CosetPoint p;
    p.z.assign(pts.at(i), pts.at(i) + pts.m);
    p.x = coset.point(p.z);
    p.shell = pts.shell[i];
    out.push_back(std::move(p));
  }
  return out;
}

Complex omega_from_w(const std::vector<Complex>& w, const Complex& s, int k) {
  Complex q(1);
  Real mod2(1);
  for (const auto& v : w) {
    Real a = norm(v);
    if (a.is_zero()) throw DivisionByZero("omega: a coordinate of xM vanishes");
    mod2 *= a;
    q *= v;
  }
  // exp(-s log|Q|^2) on the positive real branch of the logarithm.
  Real lq = log(mod2);
  Complex damp = exp(Complex(-(s.re * lq), -(s.im * lq)));
  if (k == 0) return damp;
  return pow(conj(q), k) * damp;
}

Complex omega(const ExactVector& x, const CMatrix& m, const Complex& s, int k) {
  return omega_from_w(row_times(to_complex(x), m), s, k);
}

Real shell_tail_estimate(const std::vector<Complex>& shell_sums) {
  const std::size_t K = shell_sums.size();
  if (K == 0) return Real(0);
  if (K == 1) return abs(shell_sums[0]);
  const std::size_t w = std::max<std::size_t>(1, K / 4);
  const std::size_t wl = std::min(w, K / 2);
  Real last(0), prev(0);
  for (std::size_t j = K - wl; j < K; ++j) last += abs(shell_sums[j]);
  for (std::size_t j = K - 2 * wl; j < K - wl; ++j) prev += abs(shell_sums[j]);
  last /= Real(static_cast<long>(wl));
  prev /= Real(static_cast<long>(wl));
  if (last.is_zero()) return Real(0);
  Real inf;
  mpfr_set_inf(inf.get(), 1);
  if (prev.is_zero()) return inf;
  // Per-shell ratio over the window, then a geometric tail.
  Real q = pow(last / prev, Real(1) / Real(static_cast<long>(wl)));
  if (q >= Real(1)) return inf;
  return last * q / (Real(1) - q);
}

double shell_decay_exponent(const std::vector<Real>& shell_abs_sums) {
  const std::size_t K = shell_abs_sums.size();
  std::vector<double> xs, ys;
  for (std::size_t j = K / 2; j < K; ++j) {
    double a = shell_abs_sums[j].to_double();
    if (a > 0.0 && std::isfinite(a)) {
      xs.push_back(std::log(static_cast<double>(j) + 0.5));
      ys.push_back(std::log(a));
    }
  }
  if (xs.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::vector<PsiValue>> eval_Psi_batch(const std::vector<WeightedTuple>& chain, const LatticeCoset& coset,
                                                  const CMatrix& m, const PsiBatchRequest& request) {
  if (request.s_values.empty() || request.radii.empty()) throw Error("eval_Psi_batch: empty s or radius grid");
  for (const auto& c : chain)
    if (!c.psi) throw Error("eval_Psi_batch: chain term without evaluator");
  PrecisionScope scope(request.precision);

  const double rmax = *std::max_element(request.radii.begin(), request.radii.end());
  const double rmin = *std::min_element(request.radii.begin(), request.radii.end());
  if (!(rmin > 0.0)) throw Error("eval_Psi_batch: radii must be positive");
  const double width = request.shell_width > 0.0 ? request.shell_width : rmin / 8.0;
  std::vector<int> shells_for_radius;
  for (double r : request.radii) {
    double q = r / width;
    if (std::abs(q - std::round(q)) > 1e-9 * q) throw Error("eval_Psi_batch: every radius must be a multiple of the shell width");
    shells_for_radius.push_back(static_cast<int>(std::lround(q)));
  }
  const int total_shells = *std::max_element(shells_for_radius.begin(), shells_for_radius.end());

  Geometry g(coset, m);
  CompactPoints pts = enumerate_compact(g, rmax, width);

  // Chunks never straddle a shell, so shell sums are chunk-tree sums.
  constexpr std::size_t kChunk = 1024;
  struct Chunk {
    int shell;
    std::size_t begin, end;
  };
  std::vector<Chunk> chunks;
  std::vector<std::size_t> shell_first_chunk(static_cast<std::size_t>(total_shells) + 1, 0);
  {
    std::size_t i = 0;
    for (int sh = 0; sh < total_shells; ++sh) {
      shell_first_chunk[static_cast<std::size_t>(sh)] = chunks.size();
      std::size_t start = i;
      while (i < pts.size() && pts.shell[i] == sh) ++i;
      for (std::size_t b = start; b < i; b += kChunk) chunks.push_back({sh, b, std::min(i, b + kChunk)});
    }
    shell_first_chunk[static_cast<std::size_t>(total_shells)] = chunks.size();
  }

  const std::size_t ns = request.s_values.size();
  std::vector<std::vector<Complex>> chunk_sum(chunks.size(), std::vector<Complex>(ns));
  std::vector<std::vector<Real>> chunk_abs(chunks.size(), std::vector<Real>(ns));
  std::vector<std::uint64_t> chunk_terms(chunks.size(), 0);

  parallel_for_chunks(chunks.size(), request.workers ? request.workers : default_workers(), [&](std::size_t ci) {
    const Chunk& ch = chunks[ci];
    std::vector<Complex> sum(ns, Complex(0));
    std::vector<Real> asum(ns, Real(0));
    std::uint64_t terms = 0;
    std::vector<long> zv(static_cast<std::size_t>(pts.m));
    for (std::size_t p = ch.begin; p < ch.end; ++p) {
      const long* z = pts.at(p);
      zv.assign(z, z + pts.m);
      ExactVector x = coset.point(zv);
      if (all_zero(x)) continue;
      ++terms;
      std::vector<Complex> xc = g.xc(z);
      Complex psi(0);
      for (const auto& c : chain) {
        Complex v = (*c.psi)(x, xc);
        if (!v.is_zero()) psi += v * c.coefficient;
      }
      if (psi.is_zero()) continue;
      std::vector<Complex> w = g.w(xc);
      Complex q(1);
      Real mod2(1);
      for (const auto& v : w) {
        Real a = norm(v);
        if (a.is_zero()) throw DivisionByZero("omega: a coordinate of xM vanishes at a nonzero coset point");
        mod2 *= a;
        q *= v;
      }
      Real lq = log(mod2);
      Complex base = request.k == 0 ? psi : psi * pow(conj(q), request.k);
      for (std::size_t si = 0; si < ns; ++si) {
        const Complex& s = request.s_values[si];
        Complex term = base * exp(Complex(-(s.re * lq), -(s.im * lq)));
        asum[si] += abs(term);
        sum[si] += term;
      }
    }
    chunk_sum[ci] = std::move(sum);
    chunk_abs[ci] = std::move(asum);
    chunk_terms[ci] = terms;
  });

  // Shell sums by a pairwise tree over the shell's chunks.
  std::vector<std::vector<Complex>> shell_sum(ns, std::vector<Complex>(static_cast<std::size_t>(total_shells)));
  std::vector<std::vector<Real>> shell_abs(ns, std::vector<Real>(static_cast<std::size_t>(total_shells)));
  std::vector<std::uint64_t> shell_terms(static_cast<std::size_t>(total_shells), 0);
  for (int sh = 0; sh < total_shells; ++sh) {
    const std::size_t lo = shell_first_chunk[static_cast<std::size_t>(sh)];
    const std::size_t hi = shell_first_chunk[static_cast<std::size_t>(sh) + 1];
    for (std::size_t c = lo; c < hi; ++c) shell_terms[static_cast<std::size_t>(sh)] += chunk_terms[c];
    for (std::size_t si = 0; si < ns; ++si) {
      std::vector<Complex> cs;
      std::vector<Real> ca;
      for (std::size_t c = lo; c < hi; ++c) {
        cs.push_back(chunk_sum[c][si]);
        ca.push_back(chunk_abs[c][si]);
      }
      shell_sum[si][static_cast<std::size_t>(sh)] = tree_sum(cs, 0, cs.size(), Complex(0));
      shell_abs[si][static_cast<std::size_t>(sh)] = tree_sum(ca, 0, ca.size(), Real(0));
    }
  }

  std::vector<std::vector<PsiValue>> out(ns);
  for (std::size_t si = 0; si < ns; ++si) {
    const Complex& s = request.s_values[si];
    for (std::size_t ri = 0; ri < request.radii.size(); ++ri) {
      const int K = shells_for_radius[ri];
      PsiValue v;
      v.radius = request.radii[ri];
      v.shell_width = width;
      v.precision = request.precision;
      v.value = Complex(0);
      for (int sh = 0; sh < K; ++sh) {
        v.value += shell_sum[si][static_cast<std::size_t>(sh)];
        v.terms_summed += shell_terms[static_cast<std::size_t>(sh)];
      }
      v.shell_sums.assign(shell_sum[si].begin(), shell_sum[si].begin() + K);
      v.shell_abs_sums.assign(shell_abs[si].begin(), shell_abs[si].begin() + K);
      v.tail_estimate = shell_tail_estimate(v.shell_sums);
      v.decay_exponent = shell_decay_exponent(v.shell_abs_sums);
      v.nonconvergent = std::isfinite(v.decay_exponent) && v.decay_exponent >= -1.0;
      if (s.re.to_double() <= 1.0 + request.k / 2.0)
        v.warnings.push_back("Re(s) <= 1 + k/2: outside the half-plane of absolute convergence");
      if (v.nonconvergent) v.warnings.push_back("shell contributions do not decay fast enough for absolute convergence");
      out[si].push_back(std::move(v));
    }
  }
  return out;
}

PsiValue eval_Psi(const Tuple& t, const HomogPoly& p, const LatticeCoset& coset, const CMatrix& m, const Complex& s,
                  int k, const TruncationParams& params) {
  PrecisionScope scope(params.precision);
  PsiEvaluator psi(t, p);
  PsiBatchRequest req;
  req.s_values = {s};
  req.k = k;
  req.radii = {params.radius};
  req.shell_width = params.shell_width > 0.0 ? params.shell_width : params.radius / 16.0;
  req.precision = params.precision;
  req.workers = params.workers;
  return eval_Psi_batch({WeightedTuple{1, &psi}}, coset, m, req)[0][0];
}

}  // namespace eisc
