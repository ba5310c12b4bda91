#include <doctest.h>

#include <chrono>

#include "gen.hpp"
#include "phfl/error.hpp"
#include "phfl/eval.hpp"
#include "phfl/macros.hpp"
#include "phfl/syntax.hpp"
#include "phfl/typeck.hpp"

using namespace phfl;
using namespace phfl::testing;

namespace {

TupleSet cylinder(const TupleSpace& sp, int w, const std::vector<std::vector<StateId>>& m, const TupleSet& e) {
  TupleSet out = sp.empty_set();
  e.for_each([&](std::size_t x) {
    std::vector<StateId> p(w);
    for (int i = 0; i < w; ++i) p[i] = sp.component(x, i + 1);
    if (std::find(m.begin(), m.end(), p) != m.end()) out.set(x);
  });
  return out;
}

Context quantifier_context(std::initializer_list<Sym> extra = {}) {
  Context ctx{{goodness_var(), Variance::Zero, ground_type(), false}};
  for (Sym s : extra) ctx.add({s, Variance::Zero, ground_type(), false});
  return ctx;
}

}  // namespace

TEST_CASE("index maps") {
  CHECK(sigma_assign(3, 1, 3).map == std::vector<int>{3, 2, 3});
  QuantifierConfig c{3, 2, 10, {"a"}};
  CHECK(sigma_cmp(c, 2).map == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 2, 5});
  CHECK(sigma_shift(6, 2).map == std::vector<int>{3, 4, 3, 4, 5, 6});
  CHECK(sigma_swap(2, 1, 2).map == std::vector<int>{2, 1});
  CHECK_THROWS_AS(sigma_assign(3, 4, 1), ValidationError);
  CHECK_THROWS_AS(QuantifierConfig::make(0, 1, {}), ValidationError);
}

TEST_CASE("equivalence formulas") {
  std::vector<StateId> p01{0, 1}, p02{0, 2}, p00{0, 0};
  CHECK(check_tuple(make_t1(), p01, phi_bisim(make_t1())));
  CHECK_FALSE(check_tuple(make_t2(), p02, phi_bisim(make_t2())));
  CHECK(check_tuple(make_t2(), p00, phi_bisim(make_t2())));
  CHECK_FALSE(check_tuple(make_t2(), p01, phi_fte(make_t2())));
  CHECK(check_tuple(make_t2(), p00, phi_fte(make_t2())));
  Lts t3 = make_t3();
  std::vector<StateId> st{0, 4};
  CHECK(check_tuple(t3, st, phi_fte(t3)));
  CHECK_FALSE(check_tuple(t3, st, phi_bisim(t3)));
  CHECK(order_of_formula(phi_bisim(t3)) == 0);
  CHECK(order_of_formula(phi_fte(t3)) == 1);
}

TEST_CASE("order atom") {
  Lts one = quotient(make_t1()).lts;
  CHECK(eval(one, 3, lt_atom()).ground().empty());
  Lts two(2, {"a"}, {"p"});
  two.add_label(0, 0);
  TupleSet lt = eval(two, 2, lt_atom()).ground();
  TupleSpace sp(2, 2);
  std::vector<StateId> t01{0, 1}, t10{1, 0};
  CHECK(lt.test(sp.index(t01)) != lt.test(sp.index(t10)));
  CHECK(lt.count() == 1);
}

TEST_CASE("goodness") {
  Lts t2 = quotient(make_t2()).lts;
  QuantifierConfig c = QuantifierConfig::make(1, 1, t2.actions());
  std::vector<StateId> a0{0}, a2{2};
  CHECK(goodness_check(t2, c.d, c.r, good_set(t2, c, a0)));
  CHECK_FALSE(goodness_check(t2, c.d, c.r, good_set(t2, c, a2)));
  CHECK_FALSE(goodness_check(t2, c.d, c.r, TupleSpace(3, c.d).empty_set()));
  CHECK(goodness_check(t2, c.d, c.r, good_set(t2, c, a0, {{1, 1}, {2, 0}})));
  TupleSet broken = good_set(t2, c, a0);
  broken.reset(broken.words().empty() ? 0 : 5);
  CHECK_FALSE(goodness_check(t2, c.d, c.r, broken));
}

TEST_CASE("first-order quantifier matches replacement of a position") {
  Rng rng(3);
  for (int round = 0; round < 6; ++round) {
    Lts l = quotient(random_rooted_lts(rng, 3, 2, 1)).lts;
    QuantifierConfig c = QuantifierConfig::make(1, 1, l.actions());
    TupleSpace sp(l.num_states(), c.d);
    Formula body = l.props().empty() ? diamond(l.actions()[0], 1, tt()) : land(prop(l.props()[0], 1), prop(l.props()[0], 2));
    Evaluator ev(l, c.d);
    TupleSet direct = ev.eval_ground(body);
    TupleSet q = ev.eval_ground(exists_index(c, 1, body));
    for (std::size_t x = 0; x < sp.size(); ++x) {
      std::vector<StateId> anchor{sp.component(x, c.first_anchor())};
      bool good = std::ranges::all_of(reachable(l, anchor), [](bool b) { return b; });
      if (!good) continue;
      bool any = false;
      for (int s = 0; s < l.num_states(); ++s) any = any || direct.test(sp.replace(x, 1, s));
      CHECK(q.test(x) == any);
    }
  }
}

TEST_CASE("set quantifier agrees with enumeration of subsets") {
  Rng rng(17);
  Sym x = intern("x");
  for (int round = 0; round < 4; ++round) {
    Lts l = quotient(random_rooted_lts(rng, 2, 1, 1)).lts;
    QuantifierConfig c = QuantifierConfig::make(1, 1, l.actions());
    TupleSpace sp(l.num_states(), c.d);
    std::vector<StateId> anchor{0};
    TupleSet e = good_set(l, c, anchor);
    std::vector<Formula> bodies{lamvar(x), neg(lamvar(x))};
    if (!l.props().empty()) bodies.push_back(land(lamvar(x), prop(l.props()[0], 1)));
    for (const Formula& phi : bodies) {
      Formula q = exists_set(c, x, phi);
      CHECK(type_of(quantifier_context(), q) == ground_type());
      Evaluator ev(l, c.d);
      TupleSet got = ev.eval_ground(q, {{goodness_var(), e}});
      TupleSet want = sp.empty_set();
      int n = l.num_states();
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<std::vector<StateId>> m;
        for (int s = 0; s < n; ++s)
          if (mask >> s & 1) m.push_back({s});
        want |= ev.eval_ground(phi, {{goodness_var(), e}, {x, cylinder(sp, 1, m, e)}});
      }
      INFO(print_formula(phi));
      CHECK(got == want);
    }
  }
}
