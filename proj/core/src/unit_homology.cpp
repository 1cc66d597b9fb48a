#include "eiscocycle/unit_homology.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace eisc {

FMatrix varrho(const KElem& eta, const FieldInstance& inst) {
  const auto n = static_cast<std::size_t>(inst.n());
  FMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto c = coordinates_in_basis(eta * inst.basis[j], inst.basis);
    for (std::size_t i = 0; i < n; ++i) a(j, i) = c[i];
  }
  return a;
}

Real varrho_residual(const KElem& eta, const FieldInstance& inst, int precision) {
  PrecisionScope scope(precision);
  const auto n = static_cast<std::size_t>(inst.n());
  CMatrix m = build_M(inst, precision);
  auto emb = inst.field->embeddings(precision);
  CMatrix delta(n, n);
  for (std::size_t i = 0; i < n; ++i) delta(i, i) = emb->embed(eta, static_cast<int>(i));
  CMatrix numeric = m * delta * inverse(m);
  return max_entry_difference(numeric, to_complex(varrho(eta, inst)));
}

std::vector<Real> log_vector(const KElem& x, int precision) {
  PrecisionScope scope(precision);
  auto emb = x.field()->embeddings(precision);
  std::vector<Real> v;
  for (int i = 0; i < emb->size(); ++i) v.push_back(Real(2) * log(abs(emb->embed(x, i))));
  return v;
}

RegulatorData regulator(const FieldInstance& inst, const std::vector<KElem>& units, int precision) {
  const int n = inst.n();
  if (n < 2) throw Error("regulator: degree must be at least 2");
  if (static_cast<int>(units.size()) != n - 1) throw Error("regulator: need n - 1 unit generators");
  PrecisionScope scope(precision);
  const auto r = static_cast<std::size_t>(n - 1);
  RegulatorData out;
  out.log_matrix.assign(r, std::vector<Real>(r));
  CMatrix lm(r, r);
  Real scale(1);
  for (std::size_t j = 0; j < r; ++j) {
    auto v = log_vector(units[j], precision);
    Real col(0);
    for (std::size_t i = 0; i < r; ++i) {
      out.log_matrix[i][j] = v[i];
      lm(i, j) = Complex(v[i]);
      col += abs(v[i]);
    }
    scale *= max(col, Real(1));
  }
  out.regulator = determinant(lm).re;
  if (abs(out.regulator) <= Real::pow2(16 - precision) * scale)
    throw DegenerateRegulator("regulator vanishes: the units are not independent");
  const int parity = (n - 1) % 2 == 0 ? 1 : -1;
  out.rho = parity * out.regulator.sign();
  return out;
}

std::vector<std::pair<std::vector<int>, int>> signed_permutations(int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::pair<std::vector<int>, int>> out;
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b) inversions += p[a] > p[b];
    out.emplace_back(p, inversions % 2 == 0 ? 1 : -1);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

BarChain build_cycle(const FieldInstance& inst, const std::vector<KElem>& generators, int precision) {
  const int n = inst.n();
  for (const auto& g : generators)
    if (rel_norm(g) != FElem(1)) throw InvalidInstance("cycle generator " + g.to_string() + " has relative norm != 1");
  RegulatorData reg = regulator(inst, generators, precision);

  std::vector<FMatrix> a;
  for (const auto& g : generators) a.push_back(varrho(g, inst));
  const auto un = static_cast<std::size_t>(n);

  BarChain chain;
  for (const auto& [perm, sign] : signed_permutations(n - 1)) {
    BarChain::Term term;
    term.coefficient = reg.rho * sign;
    FMatrix acc = FMatrix::identity(un);
    term.tuple.push_back(acc);
    for (int idx : perm) {
      acc = acc * a[static_cast<std::size_t>(idx)];
      term.tuple.push_back(acc);
    }
    chain.terms.push_back(std::move(term));
  }
  return chain;
}

Real simplex_orientation(const FieldInstance& inst, const std::vector<KElem>& generators,
                         const std::vector<int>& permutation, int precision) {
  PrecisionScope scope(precision);
  const auto n = static_cast<std::size_t>(inst.n());
  CMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, 0) = Complex(1);
  std::vector<Real> acc(n, Real(0));
  for (std::size_t c = 0; c + 1 < n; ++c) {
    auto v = log_vector(generators[static_cast<std::size_t>(permutation[c])], precision);
    for (std::size_t i = 0; i < n; ++i) {
      acc[i] += v[i];
      d(i, c + 1) = Complex(acc[i]);
    }
  }
  return determinant(d).re;
}

Complex pair(const BarChain& chain, const std::function<Complex(const Tuple&)>& evaluator) {
  Complex sum(0);
  for (const auto& t : chain.terms) {
    Complex v = evaluator(t.tuple);
    if (!v.is_zero()) sum += v * t.coefficient;
  }
  return sum;
}

std::string chain_to_json(const BarChain& chain) {
  using nlohmann::json;
  json out = json::array();
  for (const auto& t : chain.terms) {
    json mats = json::array();
    for (const auto& a : t.tuple) {
      json grid = json::array();
      for (std::size_t i = 0; i < a.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.cols(); ++j)
          row.push_back(json::array({a(i, j).a().get_str(), a(i, j).b().get_str()}));
        grid.push_back(row);
      }
      mats.push_back(grid);
    }
    out.push_back({{"coeff", t.coefficient}, {"matrices", mats}});
  }
  return out.dump();
}

Complex unit_orbit_partial_sum(const FieldInstance& inst, const HomogPoly& p, const ExactVector& x, int J,
                               int precision) {
  if (inst.n() != 2 || inst.units.size() != 1) throw Error("unit_orbit_partial_sum: needs n = 2 and one unit");
  PrecisionScope scope(precision);
  RegulatorData reg = regulator(inst, precision);
  FMatrix a = varrho(inst.units[0], inst);
  FMatrix ainv = inverse(a);
  FMatrix lo = FMatrix::identity(2);
  for (int j = 0; j < J; ++j) lo = lo * ainv;  // A^-J
  Complex sum(0);
  FMatrix cur = lo;
  for (int j = -J; j <= J; ++j) {
    FMatrix next = cur * a;
    sum += eval_psi(Tuple{cur, next}, p, x);
    cur = std::move(next);
  }
  return sum * static_cast<long>(reg.rho);
}

}  // namespace eisc
