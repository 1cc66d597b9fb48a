#include <benchmark/benchmark.h>

#include <memory>

#include "eiscocycle/eisenstein_sum.hpp"
#include "eiscocycle/hecke_l.hpp"
#include "eiscocycle/instance_io.hpp"
#include "eiscocycle/rational_cocycle.hpp"
#include "eiscocycle/unit_homology.hpp"

using namespace eisc;

namespace {

FieldInstance worked() { return load_instance(std::string(EISC_DATA_DIR) + "/q_i_sqrt2.json"); }

void BM_eval_psi(benchmark::State& state) {
  PrecisionScope scope(128);
  auto inst = worked();
  BarChain chain = build_cycle(inst, 128);
  CMatrix m = build_M(inst, 128);
  HomogPoly p = norm_form_poly(m, NormForm::P, static_cast<int>(state.range(0)));
  const Tuple& t = chain.terms.at(0).tuple;
  ExactVector x = {FElem(mpq_class(3, 7), mpq_class(1, 5), 1), FElem(mpq_class(-2, 3), mpq_class(4, 9), 1)};
  for (auto _ : state) benchmark::DoNotOptimize(eval_psi(t, p, x));
}
BENCHMARK(BM_eval_psi)->Arg(0)->Arg(1)->Arg(3);

void BM_psi_evaluator(benchmark::State& state) {
  PrecisionScope scope(128);
  auto inst = worked();
  BarChain chain = build_cycle(inst, 128);
  CMatrix m = build_M(inst, 128);
  PsiEvaluator ev(chain.terms.at(0).tuple, norm_form_poly(m, NormForm::P, 1));
  ExactVector x = {FElem(mpq_class(3, 7), mpq_class(1, 5), 1), FElem(mpq_class(-2, 3), mpq_class(4, 9), 1)};
  for (auto _ : state) benchmark::DoNotOptimize(ev(x));
}
BENCHMARK(BM_psi_evaluator);

void BM_omega(benchmark::State& state) {
  PrecisionScope scope(128);
  CMatrix m = build_M(worked(), 128);
  ExactVector x = {FElem(mpq_class(5), mpq_class(2), 1), FElem(mpq_class(-1), mpq_class(3), 1)};
  const Complex s(Real(3), Real(1));
  for (auto _ : state) benchmark::DoNotOptimize(omega(x, m, s, 2));
}
BENCHMARK(BM_omega);

void BM_eval_Psi(benchmark::State& state) {
  PrecisionScope scope(128);
  auto inst = worked();
  BarChain chain = build_cycle(inst, 128);
  CMatrix m = build_M(inst, 128);
  HomogPoly p = norm_form_poly(m, NormForm::P, inst.l - 1);
  std::vector<std::unique_ptr<PsiEvaluator>> evs;
  std::vector<WeightedTuple> weighted;
  for (const auto& term : chain.terms) {
    evs.push_back(std::make_unique<PsiEvaluator>(term.tuple, p));
    weighted.push_back(WeightedTuple{term.coefficient, evs.back().get()});
  }
  PsiBatchRequest req;
  req.s_values = {Complex(3)};
  req.radii = {static_cast<double>(state.range(0))};
  req.precision = 128;
  req.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(eval_Psi_batch(weighted, LatticeCoset::of(inst), m, req));
}
BENCHMARK(BM_eval_Psi)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_partial_L(benchmark::State& state) {
  auto inst = worked();
  for (auto _ : state)
    benchmark::DoNotOptimize(partial_L(inst, Complex(3), inst.k, inst.l, static_cast<double>(state.range(0)), 128));
}
BENCHMARK(BM_partial_L)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
