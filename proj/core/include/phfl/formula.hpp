#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "phfl/types.hpp"

namespace phfl {

/// Interned identifier. Names of variables, propositions and actions are
/// all symbols.
using Sym = int;
Sym intern(std::string_view name);
const std::string& name_of(Sym s);
/// A symbol `<prefix><n>` not interned before.
Sym fresh_sym(std::string_view prefix);

/// Total map [d] -> [d], stored 1-based: map[i-1] = sigma(i).
struct IndexMap {
  std::vector<int> map;

  int arity() const { return static_cast<int>(map.size()); }
  int operator()(int i) const { return map[i - 1]; }
  bool is_identity() const;

  static IndexMap identity(int d);
  /// Listed pairs (i, j) mean i -> j; unlisted indices are fixed.
  static IndexMap from_pairs(int d, const std::vector<std::pair<int, int>>& pairs);
  friend bool operator==(const IndexMap&, const IndexMap&) = default;
};

enum class Kind { Prop, Or, Neg, Diamond, Subst, Lambda, LamVar, App, Mu, Nu, FixVar, Lt };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  Sym name = -1;      // proposition, action or variable
  int index = 0;      // position for Prop / Diamond
  Variance variance = Variance::Plus;
  Type type;          // binder annotation for Lambda / Mu / Nu
  IndexMap map;       // Subst
  Formula a, b;       // children: unary nodes use a; Or/App use a and b
  std::uint64_t id = 0;
  std::vector<Sym> free;  // sorted free variables, both kinds
  std::size_t size = 1;

  bool binds() const { return kind == Kind::Lambda || kind == Kind::Mu || kind == Kind::Nu; }
  bool has_free(Sym s) const;
};

// Core constructors.
Formula prop(std::string_view p, int i);
Formula prop(Sym p, int i);
Formula lor(Formula a, Formula b);
Formula neg(Formula a);
Formula diamond(std::string_view action, int i, Formula a);
Formula diamond(Sym action, int i, Formula a);
Formula subst(IndexMap sigma, Formula a);
Formula lambda(Sym x, Variance v, Type t, Formula body);
Formula lamvar(Sym x);
Formula app(Formula f, Formula arg);
Formula mu(Sym x, Type t, Formula body);
Formula nu(Sym x, Type t, Formula body);
Formula fixvar(Sym x);
/// Built-in order atom comparing positions d-1 and d.
Formula lt_atom();

// Derived forms, stored expanded.
Formula ff();
Formula tt();
Formula land(Formula a, Formula b);
Formula box(Sym action, int i, Formula a);
Formula box(std::string_view action, int i, Formula a);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula apps(Formula f, std::initializer_list<Formula> args);
Formula apps(Formula f, const std::vector<Formula>& args);
Formula big_or(const std::vector<Formula>& fs);   // empty -> ff
Formula big_and(const std::vector<Formula>& fs);  // empty -> tt

// Pattern recognizers for the derived forms.
bool is_ff(const Formula& f);
bool is_tt(const Formula& f);
bool match_and(const Formula& f, Formula& l, Formula& r);
bool match_box(const Formula& f, Sym& action, int& i, Formula& body);
bool match_implies(const Formula& f, Formula& l, Formula& r);
bool match_iff(const Formula& f, Formula& l, Formula& r);

/// Largest index mentioned by Prop, Diamond or Subst nodes (0 if none);
/// `lt` counts as 2.
int max_index(const Formula& f);
/// Checks every index against arity d; Subst maps must have arity d.
void validate_indices(const Formula& f, int d);

bool alpha_equal(const Formula& a, const Formula& b);
bool uses_lt(const Formula& f);

}  // namespace phfl
