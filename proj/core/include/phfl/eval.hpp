#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "phfl/lts.hpp"
#include "phfl/value.hpp"

namespace phfl {

enum class Strategy { Full, Demand };

struct EvalOptions {
  Strategy strategy = Strategy::Demand;
  /// Largest |S|^d for which the full strategy enumerates lattices.
  std::size_t full_threshold = 9;
  /// Largest number of table cells one full-strategy fixpoint may use.
  std::size_t full_table_cap = std::size_t{1} << 16;
  /// Cap on fixpoint-body evaluations per solver (demand) or Kleene
  /// rounds (full).
  std::size_t iteration_cap = 50'000'000;
  /// Cap on re-evaluation passes caused by newly seen function arguments.
  int max_passes = 256;
  /// Stack size of the evaluation thread.
  std::size_t stack_bytes = std::size_t{1} << 30;
};

struct Stats {
  std::size_t passes = 0;
  std::size_t fixpoint_evals = 0;
  std::size_t solvers = 0;
  std::size_t memo_hits = 0;
};

using ValueEnv = std::vector<std::pair<Sym, Value>>;

/// One evaluation session over a fixed LTS and arity. Function values it
/// returns stay valid as long as the Evaluator lives.
class Evaluator {
 public:
  Evaluator(const Lts& lts, int d, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  const Lts& lts() const { return lts_; }
  int arity() const { return d_; }
  const TupleSpace& space() const { return space_; }
  const EvalOptions& options() const { return opts_; }
  const Stats& stats() const { return stats_; }

  /// Evaluates phi under env; runs on a large-stack thread.
  Value eval(const Formula& phi, const ValueEnv& env = {});
  TupleSet eval_ground(const Formula& phi, const ValueEnv& env = {});
  /// Applies a function value (also usable from host code).
  Value apply(const Value& f, const Value& arg);
  Value apply(const Value& f, std::span<const Value> args);

  TupleSet prop_set(Sym prop, int i);
  TupleSet lt_set();
  TupleSet diamond_set(Sym action, int i, const TupleSet& x);
  TupleSet subst_set(const IndexMap& sigma, const TupleSet& x);

  // Internals shared with the fixpoint machinery.
  struct Impl;
  Impl& impl() { return *impl_; }
  Value eval_in(const Formula& phi, const Env& env);
  std::uint64_t epoch() const;
  Stats& mutable_stats() { return stats_; }

 private:
  const Lts& lts_;
  int d_;
  TupleSpace space_;
  EvalOptions opts_;
  Stats stats_;
  std::unique_ptr<Impl> impl_;
};

/// Runs fn on a thread with the given stack size and rethrows its exception.
void run_with_stack(std::size_t stack_bytes, const std::function<void()>& fn);

Value eval(const Lts& lts, int d, const Formula& phi, const ValueEnv& env = {}, const EvalOptions& opts = {});
bool check_tuple(const Lts& lts, std::span<const StateId> tuple, const Formula& phi, const ValueEnv& env = {},
                 const EvalOptions& opts = {});

/// All elements of the lattice of type t; refused above `limit` elements.
/// Supported for the ground type and for order-1 types.
std::vector<Value> enumerate_lattice(Evaluator& ev, const Type& t, std::size_t limit = std::size_t{1} << 16);

/// Lattice order; arrow types are compared on all enumerated arguments.
bool lattice_leq(Evaluator& ev, const Value& x, const Value& y, const Type& t);
bool lattice_eq(Evaluator& ev, const Value& x, const Value& y, const Type& t);

/// Least (or greatest) fixpoint of a host-supplied monotone functional by
/// Kleene iteration. Ground type: iteration on sets. Arrow types: on
/// extensional tables over enumerate_lattice (full strategy only).
Value lfp_solve(Evaluator& ev, const std::function<Value(const Value&)>& functional, const Type& t, bool greatest);

/// Emulation types: tau(w,0) = Prop, tau(w,k+1) = tau(w,k)^0 -> ... -> Prop.
Type tau_type(int w, int k);

/// Elements of the uniform restriction of tau(w,k), enumerated; refused
/// when a level exceeds `limit` elements.
class UniformDomain {
 public:
  UniformDomain(Evaluator& ev, int w, int k, std::size_t limit = std::size_t{1} << 16);
  const std::vector<Value>& elements(int level) const { return levels_.at(level); }
  /// Position of f (an element of level k) found by extensional comparison.
  int index_of(const Value& f, int level);

 private:
  std::vector<std::uint64_t> signature(const Value& f, int level);
  Evaluator& ev_;
  int w_;
  std::vector<std::vector<Value>> levels_;
  std::vector<std::vector<std::vector<Value>>> arg_tuples_;  // per level >= 1
  std::vector<std::unordered_map<std::string, int>> index_;
};

/// True iff f(f1..fw) is empty or full for all uniform arguments.
bool is_uniform(Evaluator& ev, const Value& f, int w, int k, std::size_t limit = std::size_t{1} << 16);

/// JSON rendering: ground sets as sorted tuple lists (0-based states),
/// functions as tables of the applications demanded so far.
std::string value_to_json(Evaluator& ev, const Value& v);
std::vector<std::vector<StateId>> tuples_of(const TupleSpace& space, const TupleSet& s);

}  // namespace phfl
