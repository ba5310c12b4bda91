#include <benchmark/benchmark.h>

#include "holfp_suite.hpp"
#include "phfl/eval.hpp"
#include "phfl/holfp.hpp"
#include "phfl/macros.hpp"
#include "phfl/reduction.hpp"

using namespace phfl;
using namespace phfl::testing;

namespace {

// a -ring over n states with p on state 0
Lts ring(int n) {
  Lts l(n, {"a", "b"}, {"p"});
  for (int s = 0; s < n; ++s) {
    l.add_transition(s, 0, (s + 1) % n);
    if (s % 3 == 0) l.add_transition(s, 1, (s + 2) % n);
  }
  l.add_label(0, 0);
  return l;
}

void BM_bisim_partition(benchmark::State& st) {
  Lts l = ring(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(bisim_partition(l));
}
BENCHMARK(BM_bisim_partition)->Arg(16)->Arg(256)->Arg(1024);

void BM_phi_bisim(benchmark::State& st) {
  Lts l = ring(static_cast<int>(st.range(0)));
  Formula f = phi_bisim(l);
  for (auto _ : st) benchmark::DoNotOptimize(eval(l, 2, f));
}
BENCHMARK(BM_phi_bisim)->Arg(8)->Arg(32)->Arg(64);

void BM_phi_fte(benchmark::State& st) {
  Lts l = ring(static_cast<int>(st.range(0)));
  Formula f = phi_fte(l);
  for (auto _ : st) benchmark::DoNotOptimize(eval(l, 2, f));
}
BENCHMARK(BM_phi_fte)->Arg(4)->Arg(8)->Arg(16);

void BM_product(benchmark::State& st) {
  Lts l = ring(static_cast<int>(st.range(0)));
  Formula f = phi_bisim(l);
  for (auto _ : st) benchmark::DoNotOptimize(eval_via_product(l, 2, f));
}
BENCHMARK(BM_product)->Arg(8)->Arg(32);

void BM_exists_set(benchmark::State& st) {
  Lts l = quotient(ring(static_cast<int>(st.range(0)))).lts;
  QuantifierConfig c = QuantifierConfig::make(1, 1, l.actions());
  std::vector<StateId> anchor{0};
  TupleSet e = good_set(l, c, anchor);
  Sym x = intern("x");
  Formula q = exists_set(c, x, land(lamvar(x), prop("p", 1)));
  for (auto _ : st) {
    Evaluator ev(l, c.d);
    benchmark::DoNotOptimize(ev.eval_ground(q, {{goodness_var(), e}}));
  }
}
BENCHMARK(BM_exists_set)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_capture_reach(benchmark::State& st) {
  Lts l = quotient(ring(3)).lts;
  auto f = holfp::parse_holfp(capture_suite()[7].text);
  auto cap = holfp::capture_pipeline(f, holfp::Signature::of(l));
  for (auto _ : st) benchmark::DoNotOptimize(holfp::capture_query(l, cap, {0}));
}
BENCHMARK(BM_capture_reach)->Unit(benchmark::kMillisecond);

void BM_eval_holfp_family(benchmark::State& st) {
  Lts l = quotient(ring(3)).lts;
  auto f = holfp::parse_holfp(capture_suite()[15].text);
  holfp::Assignment a{{"X", holfp::HValue::ind(0)}};
  for (auto _ : st) benchmark::DoNotOptimize(holfp::eval_holfp(l, a, f));
}
BENCHMARK(BM_eval_holfp_family)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
