#pragma once

// Shared internals of the evaluator; not installed.

#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "phfl/error.hpp"
#include "phfl/eval.hpp"

namespace phfl {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& k) const {
    std::uint64_t h = 0xcbf29ce484222325ull ^ k.size();
    for (auto w : k) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

using Key = std::vector<std::uint64_t>;
template <class V>
using KeyMap = std::unordered_map<Key, V, KeyHash>;

struct TupleSetHash {
  std::size_t operator()(const TupleSet& s) const { return s.hash(); }
};

/// Run state of one fixpoint solver. Function values list the solvers
/// they depend on, so volatility is a flat scan.
struct SolveFlag {
  bool running = false;
  bool tainted = false;  // built while an enclosing solver was running
};
using Deps = std::vector<const SolveFlag*>;

/// Function value that tracks the solvers it depends on.
class Tracked : public FunctionValue {
 public:
  bool is_volatile() const override {
    for (const SolveFlag* f : deps_)
      if (f->running || f->tainted) return true;
    return false;
  }
  const Deps& deps() const { return deps_; }

 protected:
  Deps deps_;
};

/// Adds the solvers v depends on to into (kept sorted, no duplicates).
void merge_deps(Deps& into, const Value& v);
void merge_deps(Deps& into, const Deps& more);

/// Appends an identity key for v: set contents for ground values, the
/// object id for functions.
void append_id(Key& k, const Value& v);
bool is_volatile(const Value& v);
bool env_volatile(const Env& env);

/// Env restricted to the free variables of phi.
Env capture(const Formula& phi, const Env& env);
/// Identity key of (phi, values of its free variables in env).
Key capture_key(const Formula& phi, const Env& captured);

struct Universe {
  Type type;
  std::vector<Value> snapshot;
  std::unordered_set<TupleSet, TupleSetHash> known_ground;
  std::vector<Value> pending;
  std::unordered_map<std::uint64_t, Value> candidates;
  bool used = false;
};

struct Evaluator::Impl {
  std::uint64_t epoch = 0;
  std::map<std::pair<Sym, int>, TupleSet> props;
  std::optional<TupleSet> lt;
  std::map<std::vector<int>, std::vector<std::uint32_t>> subst_tables;

  // Lambda closures and fixpoint values. Functions are held weakly so
  // that solvers nobody refers to any more can be freed.
  KeyMap<TupleSet> ground_memo;
  KeyMap<std::weak_ptr<FunctionValue>> fn_memo;

  std::optional<Value> memo_find(const Key& k);
  void memo_put(Key k, const Value& v);
  std::unordered_map<int, Universe> universes;  // by argument type id
  KeyMap<Value> canon;

  Universe& universe(const Type& t) {
    auto& u = universes[t->id];
    u.type = t;
    return u;
  }
};

/// Extensional key of f over the current argument universe.
const Key& ext_key(Evaluator& ev, const FnPtr& f);
/// Representative of v's extensional class at declared type t.
Value canonical(Evaluator& ev, const Value& v, const Type& t);
void register_arg(Evaluator& ev, const Type& t, const Value& arg);
/// Called after a pass; true if the universe grew in a way that matters.
bool finish_pass(Evaluator& ev);

/// Fixpoint at arrow type (both strategies).
Value eval_fix_arrow(Evaluator& ev, const Formula& phi, const Env& captured);

class Closure : public Tracked {
 public:
  Closure(Formula lam, Env captured) : lam_(std::move(lam)), env_(std::move(captured)) {
    for (const EnvNode* n = env_.get(); n; n = n->next.get()) merge_deps(deps_, n->value);
  }
  Type arg_type() const override { return lam_->type; }
  Value apply(Evaluator& ev, const Value& arg) override;
  const Formula& lambda_node() const { return lam_; }
  const KeyMap<Value>& memo() const { return memo_; }

 private:
  Formula lam_;
  Env env_;
  std::uint64_t memo_epoch_ = 0;
  KeyMap<Value> memo_;
};

}  // namespace phfl
