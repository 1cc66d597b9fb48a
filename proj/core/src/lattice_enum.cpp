#include "lattice_enum.hpp"

#include <algorithm>
#include <cmath>

namespace eisc::detail {

AffineCosetMap::AffineCosetMap(const std::vector<Lattice2>& lattices, const std::vector<FElem>& offset,
                               const CMatrix& mat)
    : n(static_cast<int>(lattices.size())), m(2 * static_cast<int>(lattices.size())) {
  if (static_cast<int>(mat.rows()) != n || !mat.square() || offset.size() != lattices.size())
    throw Error("coset data and M have different dimensions");
  for (const auto& lat : lattices) {
    if (!lat.independent()) throw InvalidInstance("lattice basis is degenerate");
    gen.push_back(to_cd(lat.w1.to_complex()));
    gen.push_back(to_cd(lat.w2.to_complex()));
  }
  for (const auto& v : offset) u.push_back(to_cd(v.to_complex()));
  M.assign(static_cast<std::size_t>(n), std::vector<cd>(static_cast<std::size_t>(n)));
  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j)
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) M[j][i] = to_cd(mat(j, i));
}

void AffineCosetMap::image(const long* z, cd* w) const {
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < un; ++i) w[i] = 0.0;
  for (std::size_t j = 0; j < un; ++j) {
    cd x = u[j] + static_cast<double>(z[2 * j]) * gen[2 * j] + static_cast<double>(z[2 * j + 1]) * gen[2 * j + 1];
    for (std::size_t i = 0; i < un; ++i) w[i] += x * M[j][i];
  }
}

void AffineCosetMap::real_form(const std::vector<double>& scale, std::vector<std::vector<double>>& G,
                               std::vector<double>& c) const {
  const auto un = static_cast<std::size_t>(n);
  const auto um = static_cast<std::size_t>(m);
  G.assign(um, std::vector<double>(um, 0.0));
  c.assign(um, 0.0);
  for (std::size_t i = 0; i < un; ++i) {
    const double s = scale.empty() ? 1.0 : scale[i];
    cd off = 0.0;
    for (std::size_t j = 0; j < un; ++j) {
      off += u[j] * M[j][i];
      for (std::size_t b = 0; b < 2; ++b) {
        cd col = gen[2 * j + b] * M[j][i];
        G[2 * i][2 * j + b] = col.real() / s;
        G[2 * i + 1][2 * j + b] = col.imag() / s;
      }
    }
    c[2 * i] = off.real() / s;
    c[2 * i + 1] = off.imag() / s;
  }
}

void visit_short_vectors(const std::vector<std::vector<double>>& G, const std::vector<double>& c, double bound,
                         const std::function<void(const long*)>& visit) {
  const std::size_t um = G.size();
  if (um == 0 || c.size() != um) throw Error("short_vectors: bad dimensions");

  // Center z0 = -G^{-1} c.
  std::vector<std::vector<double>> a = G;
  std::vector<double> rhs(um);
  for (std::size_t i = 0; i < um; ++i) rhs[i] = -c[i];
  for (std::size_t k = 0; k < um; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < um; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) throw SingularMatrix("lattice image of the coset is degenerate");
    std::swap(a[piv], a[k]);
    std::swap(rhs[piv], rhs[k]);
    for (std::size_t i = k + 1; i < um; ++i) {
      double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < um; ++j) a[i][j] -= f * a[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  std::vector<double> z0(um);
  for (std::size_t i = um; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < um; ++j) s -= a[i][j] * z0[j];
    z0[i] = s / a[i][i];
  }

  // Q = G^T G written as sum_i q_ii (y_i + sum_{j>i} q_ij y_j)^2, y = z - z0.
  std::vector<std::vector<double>> q(um, std::vector<double>(um, 0.0));
  for (std::size_t i = 0; i < um; ++i)
    for (std::size_t j = 0; j < um; ++j)
      for (std::size_t k = 0; k < um; ++k) q[i][j] += G[k][i] * G[k][j];
  for (std::size_t i = 0; i < um; ++i) {
    for (std::size_t j = i + 1; j < um; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < um; ++k)
      for (std::size_t l = k; l < um; ++l) q[k][l] -= q[k][i] * q[i][l];
  }

  const double margin = 1e-9 * (1.0 + bound);
  std::vector<long> z(um, 0);
  auto rec = [&](auto&& self, std::size_t i, double budget) -> void {
    double center = z0[i];
    for (std::size_t j = i + 1; j < um; ++j) center -= q[i][j] * (static_cast<double>(z[j]) - z0[j]);
    double r = std::sqrt(std::max(budget + margin, 0.0) / q[i][i]);
    long lo = static_cast<long>(std::ceil(center - r - 1e-9));
    long hi = static_cast<long>(std::floor(center + r + 1e-9));
    for (long v = lo; v <= hi; ++v) {
      double d = static_cast<double>(v) - center;
      double rest = budget - q[i][i] * d * d;
      if (rest < -margin) continue;
      z[i] = v;
      if (i == 0)
        visit(z.data());
      else
        self(self, i - 1, rest);
    }
    z[i] = 0;
  };
  rec(rec, um - 1, bound);
}

std::vector<long> short_vectors(const std::vector<std::vector<double>>& G, const std::vector<double>& c, double bound) {
  std::vector<long> out;
  const std::size_t um = G.size();
  visit_short_vectors(G, c, bound, [&](const long* z) { out.insert(out.end(), z, z + um); });
  return out;
}

}  // namespace eisc::detail
