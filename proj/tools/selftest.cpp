#include "selftest.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <string>

#include "gen.hpp"
#include "holfp_suite.hpp"
#include "json.hpp"
#include "phfl/error.hpp"
#include "phfl/eval.hpp"
#include "phfl/holfp.hpp"
#include "phfl/macros.hpp"
#include "phfl/reduction.hpp"
#include "phfl/rewrite.hpp"
#include "phfl/syntax.hpp"
#include "phfl/typeck.hpp"

namespace phfl::cli {

using namespace phfl::testing;

namespace {

struct Counts {
  long passed = 0;
  long failed = 0;
  std::string first;
  void check(bool ok, const std::string& what) {
    if (ok)
      ++passed;
    else if (failed++ == 0)
      first = what;
  }
};

using Suite = std::function<void(Rng&, int, Counts&)>;

void lts_suite(Rng& rng, int rounds, Counts& c) {
  for (int i = 0; i < rounds; ++i) {
    Lts l = random_lts(rng, 6, 2, 2);
    Partition p = bisim_partition(l);
    auto brute = brute_bisim(l);
    Quotient q = quotient(l);
    c.check(bisim_partition(q.lts).size() == q.lts.num_states(), "quotient is not minimal");
    for (StateId s = 0; s < l.num_states(); ++s)
      for (StateId t = 0; t < l.num_states(); ++t) {
        c.check(p.same_block(s, t) == brute[s][t], "partition vs refinement at " + write_lts(l));
        c.check(same_traces(l, s, t) == trace_equivalent(l, s, t), "trace oracles at " + write_lts(l));
      }
  }
}

void eval_suite(Rng& rng, int rounds, Counts& c) {
  FormulaGen gen{rng, 2, {"p"}, {"a"}};
  EvalOptions full;
  full.strategy = Strategy::Full;
  for (int i = 0; i < rounds; ++i) {
    Lts l = random_lts(rng, 3, 2, 1, 0.35);
    gen.props = l.props();
    gen.actions = l.actions();
    Formula f = gen.well_typed(uniform(rng, 1, 5));
    std::string what = print_formula(f);
    Evaluator ev(l, 2);
    TupleSet v = ev.eval_ground(f);
    c.check(ev.eval_ground(neg(neg(f))) == v, "double negation: " + what);
    c.check(ev.eval_ground(beta_reduce(f)) == v, "beta: " + what);
    try {
      c.check(eval(l, 2, f, {}, full).ground() == v, "full vs demand: " + what);
    } catch (const LatticeTooLarge&) {
    }
    TupleSet sim = ev.eval_ground(phi_bisim(l));
    TupleSet fte = ev.eval_ground(phi_fte(l));
    Partition p = bisim_partition(l);
    for (std::size_t x = 0; x < ev.space().size(); ++x) {
      StateId s = ev.space().component(x, 1), t = ev.space().component(x, 2);
      c.check(sim.test(x) == p.same_block(s, t), "phi_bisim at " + write_lts(l));
      c.check(fte.test(x) == same_traces(l, s, t), "phi_fte at " + write_lts(l));
    }
  }
}

void typeck_suite(Rng& rng, int rounds, Counts& c) {
  FormulaGen gen{rng, 2, {"p"}, {"a", "b"}};
  for (int i = 0; i < rounds; ++i) {
    Formula f = gen.well_typed(uniform(rng, 1, 6));
    std::string what = print_formula(f);
    c.check(type_of({}, neg(f)) == ground_type(), "negation: " + what);
    c.check(type_of({}, parse_formula(what, 2)) == ground_type(), "print/parse: " + what);
  }
}

void reduction_suite(Rng& rng, int rounds, Counts& c) {
  FormulaGen gen{rng, 2, {"p"}, {"a"}};
  for (int i = 0; i < rounds; ++i) {
    int d = uniform(rng, 1, 2);
    gen.d = d;
    Lts l = random_lts(rng, 3, 2, 2, 0.35);
    gen.props = l.props();
    gen.actions = l.actions();
    gen.max_order = uniform(rng, 0, 1);
    Formula f = gen.well_typed(uniform(rng, 1, 5));
    c.check(eval_via_product(l, d, f) == eval(l, d, f).ground(), print_formula(f));
  }
}

void macros_suite(Rng& rng, int rounds, Counts& c) {
  for (int i = 0; i < rounds; ++i) {
    Lts l = quotient(random_rooted_lts(rng, 3, 2, 1)).lts;
    QuantifierConfig cfg = QuantifierConfig::make(1, 1, l.actions());
    TupleSpace sp(l.num_states(), cfg.d);
    Formula body = diamond(l.actions()[0], 1, tt());
    Evaluator ev(l, cfg.d);
    TupleSet direct = ev.eval_ground(body);
    TupleSet q = ev.eval_ground(exists_index(cfg, 1, body));
    for (std::size_t x = 0; x < sp.size(); ++x) {
      std::vector<StateId> anchor{sp.component(x, cfg.first_anchor())};
      if (!anchors_reach_all(l, anchor)) continue;
      bool any = false;
      for (int s = 0; s < l.num_states(); ++s) any = any || direct.test(sp.replace(x, 1, s));
      c.check(q.test(x) == any, "exists_index at " + write_lts(l));
    }
  }
}

void holfp_suite(Rng& rng, int rounds, Counts& c) {
  auto lts = small_quotients(rng(), std::max(2, rounds / 8), 2);
  for (const auto& hc : homogenize_suite()) {
    auto f = holfp::parse_holfp(hc.text);
    auto info = holfp::typecheck_holfp(f);
    auto h = holfp::homogenize(f);
    for (const Lts& l : lts)
      for (const auto& a : holfp::all_assignments(l, info))
        c.check(holfp::eval_holfp(l, a, f) == holfp::eval_holfp(l, a, h.formula), std::string("homogenize ") + hc.name);
  }
  for (const auto& qc : capture_suite()) {
    if (qc.order > 2 || std::string(qc.name) == "pair set") continue;
    auto f = holfp::parse_holfp(qc.text);
    auto info = holfp::typecheck_holfp(f);
    for (const Lts& l : lts) {
      auto cap = holfp::capture_pipeline(f, holfp::Signature::of(l));
      for (const auto& a : holfp::all_assignments(l, info)) {
        std::vector<StateId> st;
        for (const auto& x : cap.free_individuals) st.push_back(a.at(x).state);
        if (!anchors_reach_all(l, st)) continue;
        c.check(holfp::capture_query(l, cap, st) == holfp::eval_holfp(l, a, f), std::string("capture ") + qc.name);
      }
    }
  }
}

}  // namespace

bool run_selftest(std::uint64_t seed, int rounds, bool as_json) {
  const std::vector<std::pair<const char*, Suite>> suites = {
      {"lts", lts_suite},     {"phfl-eval", eval_suite}, {"phfl-typeck", typeck_suite},
      {"reduction", reduction_suite}, {"macros", macros_suite},  {"holfp", holfp_suite},
  };
  bool all = true;
  nlohmann::json report = nlohmann::json::array();
  for (std::size_t i = 0; i < suites.size(); ++i) {
    Rng rng(seed + i);
    Counts c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      run_with_stack(std::size_t{1} << 30, [&] { suites[i].second(rng, rounds, c); });
    } catch (const std::exception& e) {
      c.check(false, std::string("error: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = c.failed == 0;
    all = all && ok;
    if (as_json) {
      report.push_back({{"suite", suites[i].first}, {"passed", c.passed}, {"failed", c.failed}, {"seconds", dt}});
      if (!ok) report.back()["first_failure"] = c.first;
    } else {
      std::cout << (ok ? "ok   " : "FAIL ") << suites[i].first << ": " << c.passed << " passed, " << c.failed
                << " failed (" << dt << " s)";
      if (!ok) std::cout << "; first: " << c.first;
      std::cout << "\n";
    }
  }
  if (as_json) std::cout << nlohmann::json{{"seed", seed}, {"suites", report}, {"ok", all}}.dump(2) << "\n";
  return all;
}

}  // namespace phfl::cli
