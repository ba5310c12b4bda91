#pragma once

#include <optional>
#include <vector>

#include "phfl/formula.hpp"

namespace phfl {

struct Hypothesis {
  Sym name;
  Variance variance;
  Type type;
  bool fixpoint = false;  // fixpoint variable (only + is usable) or lambda variable
};

/// Ordered hypotheses, at most one per variable. Adding a variable that is
/// already present replaces the old hypothesis.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<Hypothesis> hs);

  void add(Hypothesis h);
  const Hypothesis* find(Sym name) const;
  const std::vector<Hypothesis>& hypotheses() const { return hyps_; }
  friend bool operator==(const Context& a, const Context& b);

 private:
  std::vector<Hypothesis> hyps_;
};

Context dual_context(const Context& ctx);

/// The type derivable for phi under ctx; throws TypeError naming the
/// failing rule and the smallest failing subterm.
Type type_of(const Context& ctx, const Formula& phi);

/// Largest type order of any subformula; phi must be well-typed under ctx.
int order_of_formula(const Formula& phi, const Context& ctx = {});

}  // namespace phfl
