#include <doctest.h>

#include "formulas.hpp"
#include "gen.hpp"
#include "phfl/error.hpp"
#include "phfl/eval.hpp"
#include "phfl/rewrite.hpp"
#include "phfl/syntax.hpp"
#include "phfl/typeck.hpp"

using namespace phfl;
using namespace phfl::testing;

namespace {

TupleSet ground_eval(const Lts& l, int d, const std::string& text, Strategy s = Strategy::Demand) {
  EvalOptions o;
  o.strategy = s;
  return eval(l, d, parse_formula(text, d), {}, o).ground();
}

std::vector<std::vector<StateId>> tuples(const Lts& l, int d, const TupleSet& s) {
  return tuples_of(TupleSpace(l.num_states(), d), s);
}

}  // namespace

TEST_CASE("semantic equations on the fixed examples") {
  Lts t1 = make_t1();
  CHECK(ground_eval(t1, 2, "p@1").count() == 4);
  CHECK(ground_eval(t1, 2, "mu (X:Prop). X").empty());
  CHECK(ground_eval(t1, 2, "~mu (X:Prop). X").full());
  CHECK(ground_eval(t1, 2, "<a@1>p@2").count() == 4);

  Lts t2(3, {"a", "b"}, {"q"});
  t2.add_transition(0, 0, 1);
  t2.add_transition(1, 1, 2);
  t2.add_label(2, 0);
  CHECK(ground_eval(t2, 1, "mu (X:Prop). q@1 \\/ <a@1>X \\/ <b@1>X").full());
  CHECK(tuples(t2, 1, ground_eval(t2, 1, "<a@1> tt")) == std::vector<std::vector<StateId>>{{0}});
  CHECK(tuples(t2, 2, ground_eval(t2, 2, "{1->2} q@1")) ==
        std::vector<std::vector<StateId>>{{0, 2}, {1, 2}, {2, 2}});
}

TEST_CASE("check_tuple on the bisimilarity formula") {
  Formula sim = parse_formula(kPhiSim, 2);
  std::vector<StateId> pair{0, 1};
  CHECK(check_tuple(make_t1(), pair, sim));
  Formula sim2 = parse_formula(phi_sim_for({"a", "b"}, {"p"}), 2);
  CHECK_FALSE(check_tuple(make_t2(), pair, sim2));
  CHECK(check_tuple(make_t2(), pair, tt()));
}

TEST_CASE("bisimilarity and trace formulas agree with oracles") {
  Rng rng(8);
  for (int i = 0; i < 40; ++i) {
    Lts l = random_lts(rng, 4, 2, 1, 0.3);
    auto r = brute_bisim(l);
    auto sim = ground_eval(l, 2, phi_sim_for(l.actions(), l.props()));
    auto fte = ground_eval(l, 2, phi_fte_for(l.actions()));
    TupleSpace sp(l.num_states(), 2);
    for (int s = 0; s < l.num_states(); ++s)
      for (int t = 0; t < l.num_states(); ++t) {
        std::vector<StateId> st{s, t};
        CHECK(sim.test(sp.index(st)) == r[s][t]);
        CHECK(fte.test(sp.index(st)) == trace_equivalent(l, s, t));
      }
  }
  Lts t3 = make_t3();
  TupleSpace sp(9, 2);
  std::vector<StateId> st{0, 4};
  CHECK(ground_eval(t3, 2, phi_fte_for(t3.actions())).test(sp.index(st)));
  CHECK_FALSE(ground_eval(t3, 2, phi_sim_for(t3.actions(), t3.props())).test(sp.index(st)));
}

TEST_CASE("lattice order") {
  Lts l(2, {"a"}, {});
  Evaluator ev(l, 2);
  TupleSet e = ev.space().empty_set(), a = e, b = e;
  std::vector<StateId> t00{0, 0}, t01{0, 1};
  a.set(ev.space().index(t00));
  b.set(ev.space().index(t01));
  CHECK(lattice_leq(ev, e, a, ground_type()));
  CHECK_FALSE(lattice_leq(ev, a, b, ground_type()));
  Type ft = parse_type("(+Prop) -> Prop");
  Value lo = ev.eval(parse_formula("\\(x:+Prop). ff", 2));
  Value hi = ev.eval(parse_formula("\\(x:+Prop). tt", 2));
  CHECK(lattice_leq(ev, lo, hi, ft));
  CHECK_FALSE(lattice_leq(ev, hi, lo, ft));
}

TEST_CASE("lfp_solve on simple functionals") {
  Lts l = make_t2();
  Evaluator ev(l, 1);
  auto id = [](const Value& v) { return v; };
  CHECK(lfp_solve(ev, id, ground_type(), false).ground().empty());
  CHECK(lfp_solve(ev, id, ground_type(), true).ground().full());
  TupleSet k = ev.space().empty_set();
  k.set(1);
  auto konst = [&](const Value&) { return Value(k); };
  CHECK(lfp_solve(ev, konst, ground_type(), false).ground() == k);
  CHECK(lfp_solve(ev, konst, ground_type(), true).ground() == k);
}

TEST_CASE("full strategy refuses large lattices") {
  Lts l(4, {"a"}, {});
  Formula f = parse_formula("(mu (F:(+Prop) -> Prop). \\(x:+Prop). x \\/ F (<a@1>x)) tt", 2);
  EvalOptions o;
  o.strategy = Strategy::Full;
  CHECK_THROWS_AS(eval(l, 2, f, {}, o), LatticeTooLarge);
  CHECK(eval(l, 2, f).ground().full());
}

TEST_CASE("laws on generated formulas") {
  Rng rng(4242);
  FormulaGen gen{rng, 2, {"p"}, {"a", "b"}};
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    Lts l = random_lts(rng, 3, 2, 1, 0.35);
    gen.props = l.props();
    gen.actions = l.actions();
    Formula f = gen.well_typed(uniform(rng, 1, 5));
    INFO(print_formula(f));
    Evaluator ev(l, 2);
    TupleSet v = ev.eval_ground(f);
    CHECK(ev.eval_ground(neg(neg(f))) == v);
    CHECK(ev.eval_ground(beta_reduce(f)) == v);
    EvalOptions full;
    full.strategy = Strategy::Full;
    TupleSet w;
    try {
      w = eval(l, 2, f, {}, full).ground();
    } catch (const LatticeTooLarge&) {
      continue;
    }
    CHECK(w == v);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("fixpoint unfolding and nu duality on generated bodies") {
  Rng rng(99);
  FormulaGen gen{rng, 2, {"p"}, {"a"}};
  for (int i = 0; i < 150; ++i) {
    Lts l = random_lts(rng, 3, 1, 1, 0.4);
    gen.props = l.props();
    gen.actions = l.actions();
    Formula f = gen.well_typed(uniform(rng, 2, 5));
    Formula m = coin(rng) ? mu(intern("Z"), ground_type(), lor(f, diamond("a", 1, fixvar(intern("Z")))))
                          : nu(intern("Z"), ground_type(), land(f, box("a", 2, fixvar(intern("Z")))));
    INFO(print_formula(m));
    Evaluator ev(l, 2);
    TupleSet v = ev.eval_ground(m);
    CHECK(ev.eval_ground(unfold_fixpoint(m)) == v);
    if (m->kind == Kind::Nu) {
      Sym z = m->name;
      Formula dual = neg(mu(z, ground_type(), neg(substitute(m->a, z, neg(fixvar(z))))));
      CHECK(ev.eval_ground(dual) == v);
    }
  }
}
