#include "eiscocycle/poly_ops.hpp"

#include <numeric>

namespace eisc {

HomogPoly::HomogPoly(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  if (nvars < 1 || degree < 0) throw Error("HomogPoly: need nvars >= 1 and degree >= 0");
}

HomogPoly HomogPoly::constant(int nvars, const Complex& c) {
  HomogPoly p(nvars, 0);
  p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

HomogPoly HomogPoly::monomial(const Exponent& e, const Complex& c) {
  HomogPoly p(static_cast<int>(e.size()), std::accumulate(e.begin(), e.end(), 0));
  p.add_term(e, c);
  return p;
}

HomogPoly HomogPoly::linear_form(const std::vector<Complex>& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  HomogPoly p(n, 1);
  for (int i = 0; i < n; ++i) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, coeffs[static_cast<std::size_t>(i)]);
  }
  return p;
}

void HomogPoly::add_term(const Exponent& e, const Complex& c) {
  if (static_cast<int>(e.size()) != nvars_ || std::accumulate(e.begin(), e.end(), 0) != degree_)
    throw Error("HomogPoly: exponent does not match the polynomial's shape");
  auto it = terms_.find(e);
  if (it == terms_.end())
    terms_.emplace(e, c);
  else
    it->second += c;
}

void HomogPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero())
      it = terms_.erase(it);
    else
      ++it;
  }
}

Complex HomogPoly::operator()(const std::vector<Complex>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error("HomogPoly: evaluation point has the wrong size");
  Complex sum(0);
  for (const auto& [e, c] : terms_) {
    Complex t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) t *= pow(x[i], e[i]);
    sum += t;
  }
  return sum;
}

HomogPoly& HomogPoly::operator+=(const HomogPoly& o) {
  if (terms_.empty() && nvars_ == 0) {
    *this = o;
    return *this;
  }
  if (o.nvars_ != nvars_ || o.degree_ != degree_) throw Error("HomogPoly: adding polynomials of different shape");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

HomogPoly& HomogPoly::operator*=(const Complex& c) {
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

HomogPoly operator+(HomogPoly a, const HomogPoly& b) {
  a += b;
  return a;
}

HomogPoly operator*(const HomogPoly& a, const HomogPoly& b) {
  if (a.nvars() != b.nvars()) throw Error("HomogPoly: multiplying polynomials in different variables");
  HomogPoly p(a.nvars(), a.degree() + b.degree());
  Exponent e(static_cast<std::size_t>(a.nvars()));
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      p.add_term(e, ca * cb);
    }
  return p;
}

HomogPoly operator*(HomogPoly a, const Complex& c) {
  a *= c;
  return a;
}

HomogPoly pow(const HomogPoly& p, int e) {
  if (e < 0) throw Error("HomogPoly: negative power");
  HomogPoly result = HomogPoly::constant(p.nvars(), Complex(1));
  HomogPoly base = p;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const HomogPoly& p) {
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    os << (first ? "" : " + ") << c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) os << "*x" << (i + 1) << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
    first = false;
  }
  if (first) os << "0";
  return os;
}

Real max_coefficient_difference(const HomogPoly& a, const HomogPoly& b) {
  Real worst(0);
  for (const auto& [e, c] : a.terms()) {
    auto it = b.terms().find(e);
    worst = max(worst, max_abs_component(it == b.terms().end() ? c : c - it->second));
  }
  for (const auto& [e, c] : b.terms())
    if (!a.terms().count(e)) worst = max(worst, max_abs_component(c));
  return worst;
}

HomogPoly act(const CMatrix& a, const HomogPoly& p) {
  const int n = p.nvars();
  if (static_cast<int>(a.rows()) != n || !a.square()) throw Error("act: matrix dimension does not match polynomial");

  // Powers of the substituted linear forms, built on demand.
  std::vector<std::vector<HomogPoly>> powers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    powers[static_cast<std::size_t>(i)].push_back(HomogPoly::constant(n, Complex(1)));
    powers[static_cast<std::size_t>(i)].push_back(HomogPoly::linear_form(a.col(static_cast<std::size_t>(i))));
  }
  auto power = [&](int i, int e) -> const HomogPoly& {
    auto& v = powers[static_cast<std::size_t>(i)];
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * v[1]);
    return v[static_cast<std::size_t>(e)];
  };

  HomogPoly out(n, p.degree());
  for (const auto& [e, c] : p.terms()) {
    HomogPoly t = HomogPoly::constant(n, c);
    for (int i = 0; i < n; ++i)
      if (e[static_cast<std::size_t>(i)] > 0) t = t * power(i, e[static_cast<std::size_t>(i)]);
    out += t;
  }
  return out;
}

PartitionExpansion expand_Pr(const HomogPoly& p, const CMatrix& sigma) {
  HomogPoly q = act(sigma.transpose(), p);
  q.prune();
  return q.terms();
}

HomogPoly norm_form_poly(const CMatrix& m, NormForm variant, int e) {
  if (!m.square()) throw SingularMatrix("norm_form_poly: M must be square");
  const CMatrix cols = variant == NormForm::Q ? m : inverse(m).transpose();
  const int n = static_cast<int>(m.rows());
  HomogPoly prod = HomogPoly::constant(n, Complex(1));
  for (int i = 0; i < n; ++i) prod = prod * HomogPoly::linear_form(cols.col(static_cast<std::size_t>(i)));
  return pow(prod, e);
}

std::vector<Exponent> exponents_of_degree(int n, int g) {
  std::vector<Exponent> out;
  Exponent e(static_cast<std::size_t>(n), 0);
  // Recursive fill in lexicographic order.
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      e[static_cast<std::size_t>(i)] = left;
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, g);
  return out;
}

}  // namespace eisc
