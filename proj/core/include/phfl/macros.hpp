#pragma once

#include <span>
#include <string>
#include <vector>

#include "phfl/formula.hpp"
#include "phfl/lts.hpp"
#include "phfl/tuple_set.hpp"

namespace phfl {

/// Equivalence formulas over the given signature (arity 2).
Formula phi_bisim(const std::vector<std::string>& actions, const std::vector<std::string>& props);
Formula phi_fte(const std::vector<std::string>& actions);
inline Formula phi_bisim(const Lts& l) { return phi_bisim(l.actions(), l.props()); }
inline Formula phi_fte(const Lts& l) { return phi_fte(l.actions()); }

/// Layout of quantifier emulation: positions 1..w hold the current tuple,
/// w+1..2w a second tuple for comparisons, d-r-1..d-2 the reachability
/// anchors and d-1, d the order comparison.
struct QuantifierConfig {
  int w = 1;
  int r = 1;
  int d = 5;
  std::vector<std::string> actions;

  static QuantifierConfig make(int w, int r, std::vector<std::string> actions);
  /// Throws ValidationError unless w >= 1, r >= 1 and d >= 2w+r+2.
  void validate() const;
  int first_anchor() const { return d - r - 1; }
  int last_free() const { return d - r - 2; }
};

/// The reserved lambda variable holding the goodness set.
Sym goodness_var();

IndexMap sigma_assign(int d, int i, int j);  // i <- j
IndexMap sigma_swap(int d, int i, int j);
IndexMap sigma_cmp(const QuantifierConfig& c, int i);          // d-1 -> i, d -> i+w
IndexMap sigma_cmp_reversed(const QuantifierConfig& c, int i);  // d-1 -> i+w, d -> i
IndexMap sigma_shift(int d, int w);                            // i -> w+i for i <= w
/// w+i -> i for i <= w: under {sigma} this copies positions 1..w into
/// w+1..2w, which is the effect the shift is used for.
IndexMap sigma_copy(int d, int w);

/// First-order quantifiers over position i (i <= d-r-2), by reachability
/// from the anchors.
Formula exists_index(const QuantifierConfig& c, int i, const Formula& phi);
Formula forall_index(const QuantifierConfig& c, int i, const Formula& phi);

/// Lexicographic comparison of positions 1..w against w+1..2w (strictly
/// smaller); `reversed` compares w+1..2w against 1..w instead.
Formula phi_lt_w(const QuantifierConfig& c, bool reversed = false);
/// Order on emulated sets: x < y iff the greatest tuple on which they
/// differ belongs to y.
Formula phi_lt_setpair(const QuantifierConfig& c, const Formula& x, const Formula& y);
/// Lexicographic successor of the emulated set x (x may be any formula).
Formula next_set(const QuantifierConfig& c, const Formula& x);
Formula exists_set(const QuantifierConfig& c, Sym x, const Formula& phi);
Formula forall_set(const QuantifierConfig& c, Sym x, const Formula& phi);

/// Higher-order emulation at tau(w,k). k = 0 is the set level.
Formula phi_lt_fn(const QuantifierConfig& c, int k, const Formula& x, const Formula& y);
Formula phi_lt_tuple(const QuantifierConfig& c, int k, const std::vector<Formula>& xs, const std::vector<Formula>& ys);
Formula ff_ho(const QuantifierConfig& c, int k);
Formula next_ho(const QuantifierConfig& c, int k, const Formula& x);
Formula exists_ho(const QuantifierConfig& c, int k, Sym x, const Formula& phi);
Formula forall_ho(const QuantifierConfig& c, int k, Sym x, const Formula& phi);
Formula exists_ho(const QuantifierConfig& c, int k, const std::vector<Sym>& xs, const Formula& phi);
Formula forall_ho(const QuantifierConfig& c, int k, const std::vector<Sym>& xs, const Formula& phi);

/// Good goodness set: prefixes M (over positions 1..d-r-2; all when empty)
/// times the anchors times S^2.
TupleSet good_set(const Lts& l, const QuantifierConfig& c, std::span<const StateId> anchors,
                  const std::vector<std::vector<StateId>>& prefixes = {});
bool goodness_check(const Lts& l, int d, int r, const TupleSet& e);

}  // namespace phfl
