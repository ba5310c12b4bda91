#include <doctest.h>

#include "formulas.hpp"
#include "gen.hpp"
#include "phfl/error.hpp"
#include "phfl/syntax.hpp"
#include "phfl/typeck.hpp"

using namespace phfl;
using namespace phfl::testing;

namespace {

std::string rule_of(const std::string& text, int d) {
  try {
    type_of({}, parse_formula(text, d));
  } catch (const TypeError& e) {
    return e.rule();
  }
  return "";
}

}  // namespace

TEST_CASE("dual context") {
  Sym X = intern("X"), y = intern("y");
  Context empty;
  CHECK(dual_context(empty) == empty);
  Context c{{X, Variance::Plus, ground_type(), true}, {y, Variance::Zero, ground_type(), false}};
  Context dc = dual_context(c);
  CHECK(dc.find(X)->variance == Variance::Minus);
  CHECK(dc.find(y)->variance == Variance::Zero);
  CHECK(dual_context(dc) == c);
}

TEST_CASE("golden typing examples") {
  Formula sim = parse_formula(kPhiSim, 2);
  CHECK(type_of({}, sim) == ground_type());
  CHECK(order_of_formula(sim) == 0);

  Formula fte = parse_formula(phi_fte_for({"a"}), 2);
  CHECK(type_of({}, fte) == ground_type());
  CHECK(order_of_formula(fte) == 1);
  // The fixpoint variable F carries (0Prop) -> (0Prop) -> Prop.
  CHECK(fte->a->a->type == parse_type("(0Prop) -> (0Prop) -> Prop"));

  CHECK(rule_of("mu (X:Prop). ~X", 1) == "fixvar");
  CHECK_THROWS_WITH(type_of({}, parse_formula("mu (X:Prop). ~X", 1)), doctest::Contains("variance violation"));
  CHECK(rule_of("p@1 p@2", 2) == "app");
  CHECK_THROWS_WITH(type_of({}, parse_formula("p@1 p@2", 2)), doctest::Contains("ill-typed application"));
  CHECK(order_of_formula(prop("p", 1)) == 0);
}

TEST_CASE("variance rules") {
  CHECK(rule_of("(\\(x:-Prop). ~x) p@1", 1).empty());
  CHECK(rule_of("(\\(x:+Prop). ~x) p@1", 1) == "var");
  CHECK(rule_of("\\(x:0Prop). x \\/ ~x", 1).empty());
  CHECK(rule_of("mu (F:(+Prop) -> Prop). \\(x:+Prop). x \\/ F (<a@1> x)", 1).empty());
  // Passing a fixpoint variable into a 0 argument is not allowed.
  CHECK_FALSE(rule_of("mu (X:Prop). (\\(x:0Prop). x) X", 1).empty());
  CHECK(rule_of("mu (X:Prop). (\\(x:-Prop). ~x) (~X)", 1).empty());
  CHECK(rule_of("(\\(x:+Prop). x) (\\(y:+Prop). y)", 1) == "app");
}

TEST_CASE("generated formulas: negation and duality invariants") {
  Rng rng(77);
  FormulaGen gen{rng, 2, {"p"}, {"a", "b"}};
  int accepted = 0;
  for (int i = 0; i < 400; ++i) {
    Formula f = gen.closed_ground(uniform(rng, 1, 6));
    Type t;
    try {
      t = type_of({}, f);
    } catch (const TypeError&) {
      continue;
    }
    ++accepted;
    CHECK(type_of({}, neg(neg(f))) == t);
    CHECK(order_of_formula(f) <= 1);
  }
  CHECK(accepted > 200);
}
