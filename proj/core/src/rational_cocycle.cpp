#include "eiscocycle/rational_cocycle.hpp"

namespace eisc {

FElem pairing(const ExactVector& x, const FMatrix& a, std::size_t j) {
  FElem s(0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero() && !a(i, j).is_zero()) s += x[i] * a(i, j);
  return s;
}

std::vector<Complex> to_complex(const ExactVector& x) {
  std::vector<Complex> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(v.to_complex());
  return out;
}

namespace {

// Inverse pairings 1/<x, sigma_j>, refusing numerically vanishing ones.
std::vector<Complex> inverse_pairings(const CMatrix& sigma, const std::vector<Complex>& x) {
  const std::size_t n = sigma.rows();
  if (x.size() != n) throw Error("eval_f: point and matrix dimensions differ");
  std::vector<Complex> inv;
  inv.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex s(0);
    Real scale(0);
    for (std::size_t i = 0; i < n; ++i) {
      Complex t = x[i] * sigma(i, j);
      scale += max_abs_component(t);
      s += t;
    }
    if (s.is_zero() || max_abs_component(s) <= Real::pow2(8 - working_precision()) * scale)
      throw DivisionByZero("pairing <x, sigma_" + std::to_string(j + 1) + "> vanishes");
    inv.push_back(inverse(s));
  }
  return inv;
}

const Real& factorial(int k) {
  thread_local std::map<std::pair<int, int>, Real> table;
  auto key = std::make_pair(working_precision(), k);
  auto it = table.find(key);
  if (it == table.end()) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    it = table.emplace(key, Real(f)).first;
  }
  return it->second;
}

}  // namespace

Complex eval_f(const CMatrix& sigma, const Complex& det_sigma, const PartitionExpansion& pr,
               const std::vector<Complex>& x) {
  const std::vector<Complex> inv = inverse_pairings(sigma, x);
  const std::size_t n = inv.size();
  // powers[j][e] = inv_j^e, extended lazily to the largest exponent needed.
  std::vector<std::vector<Complex>> powers(n);
  for (std::size_t j = 0; j < n; ++j) powers[j] = {Complex(1), inv[j]};
  auto power = [&](std::size_t j, int e) -> const Complex& {
    auto& v = powers[j];
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * inv[j]);
    return v[static_cast<std::size_t>(e)];
  };

  Complex sum(0);
  for (const auto& [r, coeff] : pr) {
    if (coeff.is_zero()) continue;
    Complex t = coeff;
    for (std::size_t j = 0; j < n; ++j) {
      t *= power(j, 1 + r[j]);
      if (r[j] > 1) t *= factorial(r[j]);
    }
    sum += t;
  }
  return sum * det_sigma;
}

Complex eval_f(const CMatrix& sigma, const HomogPoly& p, const std::vector<Complex>& x) {
  return eval_f(sigma, determinant(sigma), expand_Pr(p, sigma), x);
}

Complex eval_f_or_zero(const CMatrix& sigma, const HomogPoly& p, const std::vector<Complex>& x) {
  try {
    return eval_f(sigma, p, x);
  } catch (const DivisionByZero&) {
    return Complex(0);
  }
}

std::vector<int> decompose_X(const Tuple& t, const ExactVector& x) {
  bool zero = true;
  for (const auto& v : x) zero = zero && v.is_zero();
  if (zero) throw Error("decompose_X: x = 0 lies in no X(d)");
  std::vector<int> d;
  d.reserve(t.size());
  for (const auto& a : t) {
    if (a.rows() != x.size()) throw Error("decompose_X: dimension mismatch");
    int chosen = -1;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!pairing(x, a, j).is_zero()) {
        chosen = static_cast<int>(j);
        break;
      }
    if (chosen < 0) throw SingularMatrix("decompose_X: every pairing with a tuple matrix vanishes");
    d.push_back(chosen);
  }
  return d;
}

ColumnSelection select_columns(const Tuple& t, const ExactVector& x) {
  ColumnSelection sel;
  sel.d = decompose_X(t, x);
  const std::size_t n = x.size();
  FMatrix exact(n, t.size());
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) exact(i, k) = t[k](i, static_cast<std::size_t>(sel.d[k]));
  sel.sigma = to_complex(exact);
  if (exact.square()) sel.det = determinant(exact);
  return sel;
}

Complex eval_psi(const Tuple& t, const HomogPoly& p, const ExactVector& x) {
  bool zero = true;
  for (const auto& v : x) zero = zero && v.is_zero();
  if (zero) return Complex(0);
  ColumnSelection sel = select_columns(t, x);
  // Singularity is decided exactly; a rounded determinant need not vanish.
  if (sel.det.is_zero()) return Complex(0);
  return eval_f(sel.sigma, sel.det.to_complex(), expand_Pr(p, sel.sigma), to_complex(x));
}

PsiEvaluator::PsiEvaluator(Tuple t, HomogPoly p) : tuple_(std::move(t)), poly_(std::move(p)) {
  if (tuple_.empty()) throw Error("PsiEvaluator: empty tuple");
  for (const auto& a : tuple_)
    if (!a.square() || static_cast<int>(a.rows()) != poly_.nvars() || a.rows() != tuple_.size())
      throw Error("PsiEvaluator: tuple and polynomial dimensions disagree");
}

const PsiEvaluator::Selected& PsiEvaluator::selected(const std::vector<int>& d) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(working_precision(), d);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;
  const std::size_t n = tuple_.size();
  auto sel = std::make_unique<Selected>();
  FMatrix exact(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) exact(i, k) = tuple_[k](i, static_cast<std::size_t>(d[k]));
  sel->sigma = to_complex(exact);
  const FElem det = determinant(exact);
  sel->det = det.is_zero() ? Complex(0) : det.to_complex();
  sel->pr = expand_Pr(poly_, sel->sigma);
  return *cache_.emplace(key, std::move(sel)).first->second;
}

Complex PsiEvaluator::operator()(const ExactVector& x) const { return (*this)(x, to_complex(x)); }

Complex PsiEvaluator::operator()(const ExactVector& x, const std::vector<Complex>& xc) const {
  bool zero = true;
  for (const auto& v : x) zero = zero && v.is_zero();
  if (zero) return Complex(0);
  const Selected& s = selected(decompose_X(tuple_, x));
  // A tuple with a repeated column gives det(sigma) = 0 and a zero term.
  if (s.det.is_zero()) return Complex(0);
  return eval_f(s.sigma, s.det, s.pr, xc);
}

}  // namespace eisc
