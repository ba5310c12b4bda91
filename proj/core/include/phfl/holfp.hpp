#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "phfl/eval.hpp"
#include "phfl/formula.hpp"
#include "phfl/lts.hpp"
#include "phfl/macros.hpp"

namespace phfl::holfp {

// ---------------------------------------------------------------- types

struct HType;
using HTypePtr = std::shared_ptr<const HType>;

/// Individual (no components) or relation over its components.
struct HType {
  bool individual = true;
  std::vector<HTypePtr> comps;
  int order = 1;
};

HTypePtr individual();
HTypePtr relation(std::vector<HTypePtr> comps);
/// tau'(w,1) = ind, tau'(w,k+1) = (tau'(w,k), ..., tau'(w,k)).
HTypePtr homogeneous_type(int w, int k);
bool same_type(const HTypePtr& a, const HTypePtr& b);
bool is_homogeneous_type(const HTypePtr& t, int w);
/// Largest relation width occurring in t (0 for ind).
int max_width(const HTypePtr& t);
std::string to_string(const HTypePtr& t);

// -------------------------------------------------------------- formulas

enum class HKind { Prop, Edge, RelApp, Neg, Or, Exists, Lfp };

struct HNode;
using HFormula = std::shared_ptr<const HNode>;

struct HNode {
  HKind kind;
  std::string name;                 // proposition, action, applied or bound variable
  std::vector<std::string> args;    // Prop {X}, Edge {X,Y}, RelApp Y1..Yn, Lfp Z1..Zn
  std::vector<std::string> params;  // Lfp Y1..Yn
  HTypePtr type;                    // Exists: bound type; Lfp: type of the fixpoint variable
  HFormula a, b;
};

HFormula h_prop(std::string p, std::string x);
HFormula h_edge(std::string a, std::string x, std::string y);
HFormula h_app(std::string x, std::vector<std::string> ys);
HFormula h_neg(HFormula a);
HFormula h_or(HFormula a, HFormula b);
HFormula h_and(HFormula a, HFormula b);
HFormula h_implies(HFormula a, HFormula b);
HFormula h_exists(std::string x, HTypePtr t, HFormula body);
HFormula h_forall(std::string x, HTypePtr t, HFormula body);
/// (lfp (X, Y1..Yn). body)(Z1..Zn); `t` is the type of X.
HFormula h_lfp(std::string x, std::vector<std::string> ys, HTypePtr t, HFormula body, std::vector<std::string> zs);
/// Stored as ~lfp(X,Y).~body[~X/X].
HFormula h_gfp(std::string x, std::vector<std::string> ys, HTypePtr t, HFormula body, std::vector<std::string> zs);

std::string to_string(const HFormula& f);

using TypeEnv = std::map<std::string, HTypePtr>;

struct HolfpInfo {
  int order = 1;
  int width = 0;  // largest constructor width
  /// Free first-order variables in order of first occurrence.
  std::vector<std::string> free_individuals;
  TypeEnv free_types;  // every free variable
};

/// Parses and elaborates surface syntax: names applied like relations
/// resolve to bound (or `free`-declared) variables first, otherwise to
/// propositions (one argument) and actions (two arguments).
HFormula parse_holfp(std::string_view text, const TypeEnv& free = {});

/// Single binding, typed occurrences, positivity. Throws TypeError.
HolfpInfo typecheck_holfp(const HFormula& f, const TypeEnv& free = {});

// ------------------------------------------------------------- semantics

/// Individual or relation. Relations are bitsets over the product of the
/// component domains, first component least significant.
struct HValue {
  StateId state = -1;
  std::vector<std::uint64_t> bits;

  static HValue ind(StateId s);
  static HValue empty_rel(std::size_t product);
  bool test(std::size_t i) const { return (bits[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
  friend bool operator==(const HValue&, const HValue&) = default;
};

using Assignment = std::map<std::string, HValue>;

struct HolfpLimits {
  std::uint64_t max_domain = std::uint64_t{1} << 16;   // enumerated types
  std::uint64_t max_product = std::uint64_t{1} << 20;  // fixpoint relations
};

struct HolfpStats {
  std::size_t max_lfp_rounds = 0;
  std::uint64_t max_lfp_product = 0;
};

/// |[[t]]|; throws LatticeTooLarge ("domain too large") above the limit.
std::uint64_t domain_size(const Lts& l, const HTypePtr& t, std::uint64_t limit = std::uint64_t{1} << 16);
std::vector<HValue> enumerate_domain(const Lts& l, const HTypePtr& t, const HolfpLimits& lim = {});
/// Relation value from explicit tuples of component elements.
HValue make_relation(const Lts& l, const HTypePtr& t, const std::vector<std::vector<HValue>>& tuples,
                     const HolfpLimits& lim = {});
bool holds(const Lts& l, const HTypePtr& t, const HValue& rel, const std::vector<HValue>& tuple,
           const HolfpLimits& lim = {});

/// `free` gives the types of free relation variables; unlisted free
/// variables are individuals.
bool eval_holfp(const Lts& l, const Assignment& alpha, const HFormula& f, const TypeEnv& free = {},
                HolfpStats* stats = nullptr, const HolfpLimits& lim = {});
/// Every assignment of the free variables in `info` over l.
std::vector<Assignment> all_assignments(const Lts& l, const HolfpInfo& info, const HolfpLimits& lim = {});

// --------------------------------------------------------- translations

struct Homogenized {
  HFormula formula;
  int w = 2;
};

/// Rewrites f so that every type lies in one family tau'(w,k). Already
/// homogeneous formulas come back unchanged.
Homogenized homogenize(const HFormula& f, const TypeEnv& free = {});
bool is_homogeneous(const HFormula& f, int w, const TypeEnv& free = {});

/// The PHFL value standing for M : tau'(w,k) at arity d, k >= 2.
Value tptr(Evaluator& ev, const HTypePtr& t, const HValue& m, int w);

/// Signature the translation quantifies over (all LTS actions and props).
struct Signature {
  std::vector<std::string> actions;
  std::vector<std::string> props;
  static Signature of(const Lts& l) { return {l.actions(), l.props()}; }
};

struct TransResult {
  Formula formula;
  QuantifierConfig config;
  std::vector<std::string> free_individuals;  // X1..Xr, at positions 1..r
};

/// The PHFL symbol used for an HO(LFP) relation variable.
Sym phfl_var(const std::string& name);

/// f must be homogeneous for w. r >= |free individuals|; d = 2w+r+2.
TransResult trans(const HFormula& f, int w, const Signature& sig, int r = 0, const TypeEnv& free = {});

struct Capture {
  Formula psi;
  Formula phi_prime;
  HFormula homogeneous;
  QuantifierConfig config;
  std::vector<std::string> free_individuals;
  int holfp_order = 1;
  int phfl_order = 0;
};

/// homogenize, trans, then close off the goodness variable.
Capture capture_pipeline(const HFormula& f, const Signature& sig);

/// Membership of (s1..sr, padding with copies of sr) in psi.
bool capture_query(const Lts& l, const Capture& c, const std::vector<StateId>& states,
                   const EvalOptions& opts = {});

}  // namespace phfl::holfp
