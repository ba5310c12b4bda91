// Acceptance run: one PASS/FAIL line per criterion, with wall time.
// Usage: phfl_acceptance [criterion...]   (default: all)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "formulas.hpp"
#include "gen.hpp"
#include "holfp_suite.hpp"
#include "phfl/error.hpp"
#include "phfl/eval.hpp"
#include "phfl/holfp.hpp"
#include "phfl/macros.hpp"
#include "phfl/reduction.hpp"
#include "phfl/rewrite.hpp"
#include "phfl/syntax.hpp"
#include "phfl/typeck.hpp"

using namespace phfl;
using namespace phfl::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// counts checks and keeps the first mismatch
struct Tally {
  long checked = 0;
  long failed = 0;
  std::string first;

  void check(bool cond, const std::string& what) {
    ++checked;
    if (!cond && failed++ == 0) first = what;
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o;
    o.ok = failed == 0;
    o.detail = summary + ", " + std::to_string(checked - failed) + "/" + std::to_string(checked) + " checks agree";
    if (failed) o.detail += "; first mismatch: " + first;
    return o;
  }
};

std::string tuple_str(std::span<const StateId> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

// ------------------------------------------------------------------ 1

Outcome typing_golden() {
  Tally t;
  Formula sim = parse_formula(kPhiSim, 2);
  t.check(type_of({}, sim) == ground_type() && order_of_formula(sim) == 0, "phi_bisim at Prop, order 0");
  Formula fte = parse_formula(phi_fte_for({"a"}), 2);
  t.check(type_of({}, fte) == ground_type() && order_of_formula(fte) == 1 &&
              fte->a->a->type == parse_type("(0Prop) -> (0Prop) -> Prop"),
          "phi_fte at Prop, order 1");
  auto rejected = [](const char* text, int d) {
    try {
      type_of({}, parse_formula(text, d));
    } catch (const TypeError& e) {
      return std::string(e.rule());
    }
    return std::string();
  };
  t.check(rejected("mu (X:Prop). ~X", 1) == "fixvar", "mu X. ~X rejected by variance");
  t.check(rejected("p@1 p@2", 2) == "app", "(p@1 p@2) rejected at application");
  return t.outcome("4 golden judgements");
}

// ------------------------------------------------------------------ 2

Outcome bisim_differential() {
  Rng rng(2001);
  Tally t;
  for (int i = 0; i < 200; ++i) {
    Lts l = random_lts(rng, 6, 2, 2, 0.3);
    Partition part = bisim_partition(l);
    auto brute = brute_bisim(l);
    TupleSet v = eval(l, 2, phi_bisim(l)).ground();
    TupleSpace sp(l.num_states(), 2);
    for (StateId s = 0; s < l.num_states(); ++s)
      for (StateId u = 0; u < l.num_states(); ++u) {
        std::vector<StateId> st{s, u};
        bool in = v.test(sp.index(st));
        t.check(in == part.same_block(s, u) && in == brute[s][u], "lts " + std::to_string(i) + " " + tuple_str(st));
      }
  }
  return t.outcome("200 LTS");
}

// ------------------------------------------------------------------ 3

Outcome trace_differential() {
  Rng rng(3001);
  Tally t;
  for (int i = 0; i < 100; ++i) {
    Lts l = random_lts(rng, 4, 2, 1, 0.3);
    TupleSet v = eval(l, 2, phi_fte(l)).ground();
    TupleSpace sp(l.num_states(), 2);
    for (StateId s = 0; s < l.num_states(); ++s)
      for (StateId u = 0; u < l.num_states(); ++u) {
        std::vector<StateId> st{s, u};
        t.check(v.test(sp.index(st)) == trace_equivalent(l, s, u), "lts " + std::to_string(i) + " " + tuple_str(st));
      }
  }
  Lts t3 = make_t3();
  std::vector<StateId> st{0, 4};
  t.check(check_tuple(t3, st, phi_fte(t3)), "T3: phi_fte true at (s0,t0)");
  t.check(!check_tuple(t3, st, phi_bisim(t3)), "T3: phi_bisim false at (s0,t0)");
  t.check(trace_equivalent(t3, 0, 4), "T3: oracle trace equivalent");
  return t.outcome("100 LTS + T3");
}

// ------------------------------------------------------------------ 4

Outcome product_differential() {
  Rng rng(4001);
  FormulaGen gen{rng, 2, {"p"}, {"a"}};
  Tally t;
  for (int i = 0; i < 300; ++i) {
    int d = uniform(rng, 1, 2);
    gen.d = d;
    Lts l = random_lts(rng, 3, 2, 2, 0.35);
    gen.props = l.props();
    gen.actions = l.actions();
    gen.max_order = uniform(rng, 0, 1);
    Formula f = gen.well_typed(uniform(rng, 1, 5));
    t.check(eval_via_product(l, d, f) == eval(l, d, f).ground(), print_formula(f));
  }
  return t.outcome("300 formulas");
}

// ------------------------------------------------------------------ 5

Outcome semantics_laws() {
  Tally t;
  int unfold = 0, beta = 0, dneg = 0, dual = 0, full = 0;
  {
    Rng rng(5001);
    FormulaGen gen{rng, 2, {"p"}, {"a", "b"}};
    EvalOptions fo;
    fo.strategy = Strategy::Full;
    for (int i = 0; i < 400 && (beta < 100 || dneg < 100 || full < 100); ++i) {
      Lts l = random_lts(rng, 3, 2, 1, 0.35);
      gen.props = l.props();
      gen.actions = l.actions();
      Formula f = gen.well_typed(uniform(rng, 1, 5));
      Evaluator ev(l, 2);
      TupleSet v = ev.eval_ground(f);
      t.check(ev.eval_ground(neg(neg(f))) == v, "double negation: " + print_formula(f));
      ++dneg;
      t.check(ev.eval_ground(beta_reduce(f)) == v, "beta: " + print_formula(f));
      ++beta;
      try {
        t.check(eval(l, 2, f, {}, fo).ground() == v, "full vs demand: " + print_formula(f));
        ++full;
      } catch (const LatticeTooLarge&) {
      }
    }
  }
  {
    Rng rng(5002);
    FormulaGen gen{rng, 2, {"p"}, {"a"}};
    Sym z = intern("Z");
    for (int i = 0; i < 200; ++i) {
      Lts l = random_lts(rng, 3, 1, 1, 0.4);
      gen.props = l.props();
      gen.actions = l.actions();
      Formula f = gen.well_typed(uniform(rng, 2, 5));
      Formula m = mu(z, ground_type(), lor(f, diamond("a", 1, fixvar(z))));
      Formula n = nu(z, ground_type(), land(f, box("a", 2, fixvar(z))));
      Evaluator ev(l, 2);
      for (const Formula& g : {m, n}) {
        t.check(ev.eval_ground(unfold_fixpoint(g)) == ev.eval_ground(g), "unfolding: " + print_formula(g));
        ++unfold;
      }
      Formula expanded = neg(mu(z, ground_type(), neg(substitute(n->a, z, neg(fixvar(z))))));
      t.check(ev.eval_ground(expanded) == ev.eval_ground(n), "nu duality: " + print_formula(n));
      ++dual;
    }
    // unfolding at a higher-order fixpoint
    Lts t2 = make_t2();
    Formula h = parse_formula("mu (F:(+Prop) -> Prop). \\(x:+Prop). x \\/ F (<a@1>x \\/ <b@1>x)", 1);
    Evaluator ev(t2, 1);
    for (const char* arg : {"p@1", "tt", "ff", "[a@1]ff"}) {
      Formula a = parse_formula(arg, 1);
      t.check(ev.eval_ground(app(unfold_fixpoint(h), a)) == ev.eval_ground(app(h, a)),
              std::string("higher-order unfolding at ") + arg);
    }
  }
  bool enough = std::min({unfold, beta, dneg, dual, full}) >= 100;
  Outcome o = t.outcome("instances: unfolding " + std::to_string(unfold) + ", beta " + std::to_string(beta) +
                        ", double negation " + std::to_string(dneg) + ", nu duality " + std::to_string(dual) +
                        ", full vs demand " + std::to_string(full));
  if (!enough) {
    o.ok = false;
    o.detail += "; fewer than 100 instances of some law";
  }
  return o;
}

// ------------------------------------------------------------------ 6

Outcome quotient_invariance() {
  Rng rng(6001);
  FormulaGen gen{rng, 2, {"p"}, {"a"}};
  Tally t;
  for (int i = 0; i < 100; ++i) {
    Lts l = random_lts(rng, 5, 2, 1, 0.3);
    Quotient q = quotient(l);
    gen.props = l.props();
    gen.actions = l.actions();
    gen.max_order = uniform(rng, 0, 1);
    Formula f = gen.well_typed(uniform(rng, 1, 5));
    TupleSet v = eval(l, 2, f).ground();
    TupleSet vq = eval(q.lts, 2, f).ground();
    TupleSpace sp(l.num_states(), 2), spq(q.lts.num_states(), 2);
    bool ok = true;
    for (std::size_t x = 0; x < sp.size(); ++x) {
      auto tup = sp.decode(x);
      std::vector<StateId> img;
      for (StateId s : tup) img.push_back(q.partition.class_of[s]);
      ok = ok && v.test(x) == vq.test(spq.index(img));
      // every componentwise-bisimilar tuple
      for (std::size_t y = 0; y < sp.size(); ++y) {
        auto u = sp.decode(y);
        if (q.partition.same_block(tup[0], u[0]) && q.partition.same_block(tup[1], u[1]))
          ok = ok && v.test(x) == v.test(y);
      }
    }
    t.check(ok, print_formula(f));
  }
  return t.outcome("100 formulas");
}

// ------------------------------------------------------------------ 7

TupleSet cylinder(const TupleSpace& sp, int mask, const TupleSet& e) {
  TupleSet out = sp.empty_set();
  e.for_each([&](std::size_t x) {
    if (mask >> sp.component(x, 1) & 1) out.set(x);
  });
  return out;
}

Outcome set_quantifier() {
  Tally t;
  Sym x = intern("x");
  Context ctx{{goodness_var(), Variance::Zero, ground_type(), false}};
  auto lts = small_quotients(7001, 16, 3);
  int instances = 0;
  for (const Lts& l : lts) {
    QuantifierConfig c = QuantifierConfig::make(1, 1, l.actions());
    TupleSpace sp(l.num_states(), c.d);
    Formula px = lamvar(x);
    std::vector<Formula> bodies{px, neg(px), land(px, prop("p", 1)),
                                exists_index(c, 2, land(px, diamond("a", 2, prop("p", 1)))),
                                forall_index(c, 2, lor(px, neg(prop("p", 2)))),
                                land(neg(px), exists_index(c, 1, land(px, prop("p", 1))))};
    for (StateId anchor = 0; anchor < l.num_states(); ++anchor) {
      std::vector<StateId> an{anchor};
      if (!anchors_reach_all(l, an)) continue;
      TupleSet e = good_set(l, c, an);
      for (const Formula& phi : bodies) {
        Formula q = exists_set(c, x, phi);
        if (type_of(ctx, q) != ground_type()) t.check(false, "quantifier does not type at Prop");
        Evaluator ev(l, c.d);
        TupleSet got = ev.eval_ground(q, {{goodness_var(), e}});
        TupleSet want = sp.empty_set();
        for (int mask = 0; mask < (1 << l.num_states()); ++mask)
          want |= ev.eval_ground(phi, {{goodness_var(), e}, {x, cylinder(sp, mask, e)}});
        got &= e;
        want &= e;
        t.check(got == want, print_formula(phi) + " with anchor " + std::to_string(anchor));
        ++instances;
      }
    }
  }
  return t.outcome(std::to_string(lts.size()) + " quotients, " + std::to_string(instances) + " instances");
}

// ------------------------------------------------------------------ 8

using Template = std::function<Formula(const std::vector<Formula>&)>;

Outcome higher_order_quantifier() {
  Tally t;
  Sym x = intern("x"), z = intern("z");
  Type g = ground_type();
  std::vector<std::pair<std::string, Formula>> args = {
      {"tt", lambda(z, Variance::Zero, g, tt())},
      {"ff", lambda(z, Variance::Zero, g, ff())},
      {"id", lambda(z, Variance::Zero, g, lamvar(z))},
      {"not", lambda(z, Variance::Zero, g, neg(lamvar(z)))},
      {"p3", lambda(z, Variance::Zero, g, prop("p", 3))},
      {"z&p3", lambda(z, Variance::Zero, g, land(lamvar(z), prop("p", 3)))},
      {"p1", lambda(z, Variance::Zero, g, prop("p", 1))},
      {"z|p2", lambda(z, Variance::Zero, g, lor(lamvar(z), prop("p", 2)))},
  };
  std::vector<std::pair<std::string, Template>> templates = {
      {"A", [](auto& a) { return a[0]; }},
      {"A&~B", [](auto& a) { return land(a[0], neg(a[1])); }},
      {"A<=>B", [](auto& a) { return iff(a[0], a[1]); }},
      {"(A&p3)|(~A&~p3)", [](auto& a) { return lor(land(a[0], prop("p", 3)), land(neg(a[0]), neg(prop("p", 3)))); }},
  };
  struct Run {
    Lts l;
    std::vector<int> templates;
    std::vector<int> args;
  };
  std::vector<Run> runs;
  for (int variant = 0; variant < 4; ++variant) {
    Lts l(1, {"a"}, {"p"});
    if (variant & 1) l.add_transition(0, 0, 0);
    if (variant & 2) l.add_label(0, 0);
    runs.push_back({l, {0, 1, 2, 3}, {0, 1, 2, 3, 4, 5, 6, 7}});
  }
  {
    Lts l(2, {"a"}, {"p"});
    l.add_transition(0, 0, 1);
    l.add_label(0, 0);
    runs.push_back({l, {0}, {2, 3, 0}});
  }
  int instances = 0;
  for (const Run& run : runs) {
    const Lts& l = run.l;
    QuantifierConfig c = QuantifierConfig::make(1, 1, l.actions());
    std::vector<StateId> anchor{0};
    TupleSet e = good_set(l, c, anchor);
    // pointwise arguments: the value on the empty and on the full set decides
    auto same = [&](int i, int j) {
      Evaluator q(l, c.d);
      for (Formula s : {ff(), tt()})
        if (q.eval_ground(app(args[i].second, s)) != q.eval_ground(app(args[j].second, s))) return false;
      return true;
    };
    for (int ti : run.templates) {
      const auto& [tn, tm] = templates[ti];
      int m = tn.find('B') != std::string::npos ? 2 : 1;
      for (int i : run.args)
        for (int j : m == 2 ? run.args : std::vector<int>{0}) {
          if (m == 2 && i == j) continue;
          std::vector<Formula> atoms{app(lamvar(x), args[i].second)};
          if (m == 2) atoms.push_back(app(lamvar(x), args[j].second));
          Evaluator ev(l, c.d);
          TupleSet got = ev.eval_ground(exists_ho(c, 2, x, tm(atoms)), {{goodness_var(), e}});
          // every uniform x gives each atom the value empty or full
          TupleSet want = ev.space().empty_set();
          for (int b = 0; b < (1 << m); ++b) {
            if (m == 2 && same(i, j) && (b & 1) != ((b >> 1) & 1)) continue;
            std::vector<Formula> vals;
            for (int k = 0; k < m; ++k) vals.push_back(b >> k & 1 ? tt() : ff());
            Evaluator ev2(l, c.d);
            want |= ev2.eval_ground(tm(vals));
          }
          got &= e;
          want &= e;
          t.check(got == want, "n=" + std::to_string(l.num_states()) + " " + tn + " A=" + args[i].first +
                                   (m == 2 ? " B=" + args[j].first : ""));
          ++instances;
        }
    }
  }
  return t.outcome(std::to_string(instances) + " instances on 5 quotients");
}

// ------------------------------------------------------------------ 9

Outcome capture_end_to_end() {
  Tally t;
  auto lts = small_quotients(9001, 40, 3);
  int low = 0, high = 0;
  long skipped = 0;
  for (const auto& c : capture_suite()) {
    holfp::HFormula f = holfp::parse_holfp(c.text);
    holfp::HolfpInfo info = holfp::typecheck_holfp(f);
    int w = holfp::homogenize(f).w;
    if (info.order <= 2 && w <= 2) ++low;
    if (info.order == 3 && w == 1) ++high;
    for (const Lts& l : lts) {
      holfp::Capture cap = holfp::capture_pipeline(f, holfp::Signature::of(l));
      t.check(type_of({}, cap.psi) == ground_type() && cap.psi->free.empty(), std::string(c.name) + ": psi closed");
      t.check(cap.phfl_order <= std::max(info.order - 1, 0), std::string(c.name) + ": order");
      for (const auto& a : holfp::all_assignments(l, info)) {
        std::vector<StateId> st;
        for (const auto& xi : cap.free_individuals) st.push_back(a.at(xi).state);
        if (!anchors_reach_all(l, st)) {
          ++skipped;
          continue;
        }
        t.check(holfp::capture_query(l, cap, st) == holfp::eval_holfp(l, a, f),
                std::string(c.name) + " at " + tuple_str(st) + " on " + write_lts(l));
      }
    }
  }
  Outcome o = t.outcome(std::to_string(low) + " order<=2 and " + std::to_string(high) + " order-3 formulas on " +
                        std::to_string(lts.size()) + " quotients (" + std::to_string(skipped) +
                        " non-covering assignments skipped)");
  if (low < 10 || high < 3) {
    o.ok = false;
    o.detail += "; suite too small";
  }
  return o;
}

// ------------------------------------------------------------------ 10

Outcome orbit_count() {
  Tally t;
  Lts l(2, {"a"}, {"p"});
  l.add_transition(0, 0, 1);
  l.add_label(0, 0);
  if (quotient(l).lts.num_states() != 2) return {false, "LTS is not a 2-class quotient"};
  QuantifierConfig c = QuantifierConfig::make(1, 1, l.actions());
  std::vector<StateId> anchor{0};
  TupleSet e = good_set(l, c, anchor);
  // classes of e by the first w positions
  std::set<std::vector<StateId>> classes;
  TupleSpace sp(2, c.d);
  e.for_each([&](std::size_t x) { classes.insert({sp.component(x, 1)}); });
  std::size_t expected = std::size_t{1} << classes.size();

  Sym v = intern("v");
  Formula step = next_set(c, lamvar(v));
  Evaluator ev(l, c.d);
  std::vector<TupleSet> orbit;
  TupleSet cur = sp.empty_set();
  while (std::find(orbit.begin(), orbit.end(), cur) == orbit.end() && orbit.size() < 4 * expected) {
    orbit.push_back(cur);
    cur = ev.eval_ground(step, {{goodness_var(), e}, {v, cur}});
    cur &= e;
  }
  t.check(orbit.size() == expected, "orbit has " + std::to_string(orbit.size()) + " elements");
  t.check(cur == orbit.front(), "orbit returns to bottom");
  return t.outcome("|Pi_e| = " + std::to_string(classes.size()) + ", orbit size " + std::to_string(orbit.size()) +
                   ", expected " + std::to_string(expected));
}

// ------------------------------------------------------------------ 11

Outcome homogenization() {
  Tally t;
  int count = 0;
  for (const auto& c : homogenize_suite()) {
    holfp::HFormula f = holfp::parse_holfp(c.text);
    holfp::HolfpInfo info = holfp::typecheck_holfp(f);
    holfp::Homogenized h = holfp::homogenize(f);
    t.check(!holfp::is_homogeneous(f, h.w) && holfp::is_homogeneous(h.formula, h.w),
            std::string(c.name) + ": homogeneity");
    ++count;
    for (const Lts& l : small_quotients(11001, 10, std::min(c.max_states, 3)))
      for (const auto& a : holfp::all_assignments(l, info))
        t.check(holfp::eval_holfp(l, a, f) == holfp::eval_holfp(l, a, h.formula), c.name);
  }
  return t.outcome(std::to_string(count) + " non-homogeneous formulas");
}

struct Criterion {
  int id;
  const char* name;
  double limit;  // seconds
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all = {
      {1, "typing golden suite", 1, typing_golden},
      {2, "bisimilarity differential", 60, bisim_differential},
      {3, "trace-equivalence differential", 120, trace_differential},
      {4, "product reduction differential", 120, product_differential},
      {5, "semantics laws", 120, semantics_laws},
      {6, "quotient invariance", 60, quotient_invariance},
      {7, "set quantifier exhaustive", 300, set_quantifier},
      {8, "higher-order quantifier exhaustive", 300, higher_order_quantifier},
      {9, "HO(LFP) capture end-to-end", 600, capture_end_to_end},
      {10, "successor orbit count", 10, orbit_count},
      {11, "homogenization invariance", 60, homogenization},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      run_with_stack(std::size_t{1} << 30, [&] { o = c.run(); });
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = o.ok && dt < c.limit;
    if (o.ok && !ok) o.detail += "; over the time limit";
    if (!ok) ++failed;
    std::printf("%s %2d %s: %s [%.2f s, limit %.0f s]\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt,
                c.limit);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
