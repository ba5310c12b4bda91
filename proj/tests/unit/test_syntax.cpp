#include <doctest.h>

#include "formulas.hpp"
#include "gen.hpp"
#include "phfl/error.hpp"
#include "phfl/rewrite.hpp"
#include "phfl/syntax.hpp"

using namespace phfl;
using namespace phfl::testing;

TEST_CASE("parse basic shapes") {
  Formula f = parse_formula("mu (X:Prop). p@1 \\/ <a@1> X", 1);
  REQUIRE(f->kind == Kind::Mu);
  CHECK(f->a->kind == Kind::Or);
  CHECK(f->a->a->kind == Kind::Prop);
  CHECK(f->a->b->kind == Kind::Diamond);
  CHECK(f->a->b->a->kind == Kind::FixVar);

  Formula s = parse_formula("{1->2,2->1} X", 2, {.free_vars = {"X"}});
  REQUIRE(s->kind == Kind::Subst);
  CHECK(s->map.map == std::vector<int>{2, 1});

  Formula id = parse_formula("{} p@2", 2);
  CHECK(id->map.is_identity());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(parse_formula("<a@3> p@1", 2), doctest::Contains("index out of range"), Error);
  CHECK_THROWS_AS(parse_formula("p@1 \\/", 1), ParseError);
  CHECK_THROWS_AS(parse_formula("x", 1), Error);
  CHECK_THROWS_AS(parse_type("+Prop"), ParseError);
}

TEST_CASE("types") {
  CHECK(to_string(parse_type("Prop")) == "Prop");
  Type t = parse_type("(+Prop) -> (0Prop) -> Prop");
  CHECK(type_arity(t) == 2);
  CHECK(order_of_type(t) == 1);
  CHECK(order_of_type(parse_type("(+((+Prop) -> Prop)) -> Prop")) == 2);
  CHECK(parse_type(to_string(t)) == t);
}

TEST_CASE("printing") {
  CHECK(print_formula(prop("p", 1)) == "p@1");
  for (const std::string& text : {kPhiSim, phi_fte_for({"a", "b"}),
                                  std::string("(\\(f:(+Prop) -> Prop). f p@1) (\\(x:+Prop). <a@1>x)")}) {
    Formula f = parse_formula(text, 2);
    CHECK(alpha_equal(parse_formula(print_formula(f), 2), f));
  }
}

TEST_CASE("round trip on generated formulas") {
  Rng rng(314);
  FormulaGen gen{rng, 2, {"p", "q"}, {"a", "b"}};
  gen.allow_lt = true;
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.closed_ground(uniform(rng, 0, 6));
    std::string text = print_formula(f);
    Formula g = parse_formula(text, 2);
    INFO(text);
    REQUIRE(alpha_equal(f, g));
  }
}

TEST_CASE("substitution and unfolding") {
  Formula x = fixvar(intern("X"));
  Formula p1 = prop("p", 1);
  CHECK(alpha_equal(substitute(x, intern("X"), p1), p1));
  CHECK(alpha_equal(substitute(p1, intern("X"), x), p1));

  // Or(X, mu Y. X) with psi mentioning Y: binder must be renamed.
  Sym X = intern("X"), Y = intern("Y");
  Formula phi = lor(fixvar(X), mu(Y, ground_type(), fixvar(X)));
  Formula psi = lor(fixvar(Y), p1);
  Formula r = substitute(phi, X, psi);
  CHECK(r->free == std::vector<Sym>{Y});
  CHECK(r->b->kind == Kind::Mu);
  CHECK(r->b->name != Y);

  Formula m = parse_formula("mu (X:Prop). X", 1);
  CHECK(alpha_equal(unfold_fixpoint(m), m));
  Formula reach = parse_formula("mu (X:Prop). p@1 \\/ <a@1> X", 1);
  CHECK(alpha_equal(unfold_fixpoint(reach), lor(p1, diamond("a", 1, reach))));
  CHECK_THROWS_AS(unfold_fixpoint(p1), Error);
}

TEST_CASE("beta reduction") {
  Formula p1 = prop("p", 1);
  CHECK(alpha_equal(beta_reduce(parse_formula("(\\(x:+Prop). x) p@1", 1)), p1));
  CHECK(alpha_equal(beta_reduce(parse_formula("(\\(x:+Prop). x \\/ x) p@1", 1)), lor(p1, p1)));
  CHECK(alpha_equal(beta_reduce(parse_formula("(\\(f:(+Prop) -> Prop). f p@1) (\\(x:+Prop). <a@1>x)", 1)),
                    diamond("a", 1, p1)));
}
