#include <deque>
#include <set>

#include "internal.hpp"

namespace phfl {

namespace {

class Solver;

/// The value of mu F. body at an arrow type, possibly partially applied.
class FixFn : public Tracked {
 public:
  FixFn(std::shared_ptr<Solver> solver, std::vector<Value> args);
  Type arg_type() const override;
  Value apply(Evaluator& ev, const Value& arg) override;
  const std::shared_ptr<Solver>& solver() const { return solver_; }
  const std::vector<Value>& args() const { return args_; }

 private:
  std::shared_ptr<Solver> solver_;
  std::vector<Value> args_;
};

/// Local demand-driven solver: a table over the argument tuples that were
/// asked for, solved by chaotic iteration with dependency tracking.
class Solver : public std::enable_shared_from_this<Solver> {
 public:
  Solver(Evaluator& ev, Formula node, Env captured)
      : ev_(ev), node_(std::move(node)), env_(std::move(captured)), greatest_(node_->kind == Kind::Nu) {
    Type t = node_->type;
    while (!t->ground()) {
      arg_types_.push_back(t->arg);
      t = t->result;
    }
    flag_.tainted = env_volatile(env_);
    for (const EnvNode* n = env_.get(); n; n = n->next.get()) merge_deps(deps_, n->value);
    merge_deps(deps_, Deps{&flag_});
    epoch_ = ev.epoch();
    ++ev.mutable_stats().solvers;
  }

  int arity() const { return static_cast<int>(arg_types_.size()); }
  const Type& arg_type(int i) const { return arg_types_[i]; }
  const Type& type() const { return node_->type; }
  /// Solvers a value of this fixpoint depends on, itself included.
  const Deps& deps() const { return deps_; }

  TupleSet query(const std::vector<Value>& raw_args) {
    if (epoch_ != ev_.epoch()) {
      entries_.clear();
      index_.clear();
      work_.clear();
      epoch_ = ev_.epoch();
    }
    Key k;
    std::vector<Value> args;
    args.reserve(raw_args.size());
    for (int i = 0; i < arity(); ++i) {
      args.push_back(canonical(ev_, raw_args[i], arg_types_[i]));
      append_id(k, args.back());
    }
    auto it = index_.find(k);
    int idx;
    if (it != index_.end()) {
      idx = it->second;
      if (!flag_.running) return entries_[idx].value;
    } else {
      idx = static_cast<int>(entries_.size());
      const TupleSpace& sp = ev_.space();
      entries_.push_back({std::move(args), greatest_ ? sp.full_set() : sp.empty_set(), {}, false});
      index_.emplace(std::move(k), idx);
      enqueue(idx);
      if (!flag_.running) {
        run();
        return entries_[idx].value;
      }
    }
    if (current_ >= 0) {
      auto& deps = entries_[idx].dependents;
      if (deps.empty() || deps.back() != current_) deps.push_back(current_);
    }
    return entries_[idx].value;
  }

  struct Entry {
    std::vector<Value> args;
    TupleSet value;
    std::vector<int> dependents;
    bool queued;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  void enqueue(int idx) {
    if (entries_[idx].queued) return;
    entries_[idx].queued = true;
    work_.push_back(idx);
  }

  void run() {
    struct Guard {
      Solver* s;
      ~Guard() {
        s->flag_.running = false;
        s->current_ = -1;
      }
    } guard{this};
    flag_.running = true;
    std::size_t evals = 0;
    while (!work_.empty()) {
      int e = work_.front();
      work_.pop_front();
      entries_[e].queued = false;
      if (++evals > ev_.options().iteration_cap) throw ResourceLimit("fixpoint solver exceeded its iteration cap");
      ++ev_.mutable_stats().fixpoint_evals;
      int saved = current_;
      current_ = e;
      FnPtr self = std::make_shared<FixFn>(shared_from_this(), std::vector<Value>{});
      Value body = ev_.eval_in(node_->a, extend_env(env_, node_->name, Value(self)));
      std::vector<Value> args = entries_[e].args;
      Value r = ev_.apply(body, args);
      current_ = saved;
      if (!r.is_ground()) throw Error("runtime type error: fixpoint body is not saturated");
      TupleSet nv = r.ground();
      if (greatest_)
        nv &= entries_[e].value;
      else
        nv |= entries_[e].value;
      if (nv == entries_[e].value) continue;
      entries_[e].value = std::move(nv);
      for (int dep : entries_[e].dependents) enqueue(dep);
    }
  }

  Evaluator& ev_;
  Formula node_;
  Env env_;
  bool greatest_;
  std::vector<Type> arg_types_;
  SolveFlag flag_;
  Deps deps_;
  int current_ = -1;
  std::uint64_t epoch_;
  std::vector<Entry> entries_;
  KeyMap<int> index_;
  std::deque<int> work_;
};

Type FixFn::arg_type() const { return type_after(solver_->type(), static_cast<int>(args_.size()))->arg; }

Value FixFn::apply(Evaluator&, const Value& arg) {
  std::vector<Value> args = args_;
  args.push_back(arg);
  if (static_cast<int>(args.size()) < solver_->arity()) return FnPtr(std::make_shared<FixFn>(solver_, std::move(args)));
  return solver_->query(args);
}

FixFn::FixFn(std::shared_ptr<Solver> solver, std::vector<Value> args)
    : solver_(std::move(solver)), args_(std::move(args)) {
  deps_ = solver_->deps();
  for (const auto& a : args_) merge_deps(deps_, a);
}

/// Extensional table over all ground arguments (full strategy).
class TableFn : public FunctionValue {
 public:
  TableFn(Type type, std::shared_ptr<const std::vector<TupleSet>> table, std::size_t radix, std::size_t offset = 0)
      : type_(std::move(type)), table_(std::move(table)), radix_(radix), offset_(offset) {}
  Type arg_type() const override { return type_->arg; }
  Value apply(Evaluator&, const Value& arg) override {
    const auto& w = arg.ground().words();
    std::size_t digit = w.empty() ? 0 : static_cast<std::size_t>(w[0]);
    std::size_t off = offset_ * radix_ + digit;
    if (type_->result->ground()) return (*table_)[off];
    return FnPtr(std::make_shared<TableFn>(type_->result, table_, radix_, off));
  }

 private:
  Type type_;
  std::shared_ptr<const std::vector<TupleSet>> table_;
  std::size_t radix_;
  std::size_t offset_;
};

Value eval_fix_full(Evaluator& ev, const Formula& phi, const Env& captured) {
  const TupleSpace& sp = ev.space();
  const EvalOptions& opts = ev.options();
  int arity = 0;
  for (Type t = phi->type; !t->ground(); t = t->result) {
    if (!t->arg->ground())
      throw LatticeTooLarge("full strategy enumerates only fixpoints over first-order function types; got " +
                            to_string(phi->type));
    ++arity;
  }
  if (sp.size() > opts.full_threshold)
    throw LatticeTooLarge("lattice too large: |S|^d = " + std::to_string(sp.size()) + " exceeds threshold " +
                          std::to_string(opts.full_threshold));
  std::size_t radix = std::size_t{1} << sp.size();
  std::size_t cells = 1;
  for (int i = 0; i < arity; ++i) {
    if (cells > opts.full_table_cap / radix)
      throw LatticeTooLarge("lattice too large: fixpoint table for " + to_string(phi->type) + " exceeds " +
                            std::to_string(opts.full_table_cap) + " cells");
    cells *= radix;
  }
  bool greatest = phi->kind == Kind::Nu;
  auto table = std::make_shared<std::vector<TupleSet>>(cells, greatest ? sp.full_set() : sp.empty_set());
  std::size_t rounds = 0;
  while (true) {
    if (++rounds > opts.iteration_cap) throw ResourceLimit("fixpoint iteration cap exceeded");
    auto f = std::make_shared<TableFn>(phi->type, table, radix);
    Value body = ev.eval_in(phi->a, extend_env(captured, phi->name, Value(FnPtr(f))));
    auto next = std::make_shared<std::vector<TupleSet>>(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      ++ev.mutable_stats().fixpoint_evals;
      std::vector<Value> args(arity);
      std::size_t rest = c;
      for (int i = arity - 1; i >= 0; --i) {
        TupleSet s = sp.empty_set();
        std::size_t bits = rest % radix;
        rest /= radix;
        for (std::size_t b = 0; b < sp.size(); ++b)
          if ((bits >> b) & 1u) s.set(b);
        args[i] = s;
      }
      Value r = ev.apply(body, args);
      (*next)[c] = r.ground();
    }
    if (*next == *table) break;
    table = next;
  }
  return FnPtr(std::make_shared<TableFn>(phi->type, table, radix));
}

}  // namespace

Value eval_fix_arrow(Evaluator& ev, const Formula& phi, const Env& captured) {
  if (ev.options().strategy == Strategy::Full) return eval_fix_full(ev, phi, captured);
  auto solver = std::make_shared<Solver>(ev, phi, captured);
  return FnPtr(std::make_shared<FixFn>(solver, std::vector<Value>{}));
}

const Key& ext_key(Evaluator& ev, const FnPtr& f) {
  if (f->key_epoch == ev.epoch()) return f->key;
  if (f->is_volatile())
    throw Error("a function-valued fixpoint argument depends on a fixpoint that is still being solved");
  auto& impl = ev.impl();
  Type t = f->arg_type();
  std::vector<Value> points;
  {
    auto& u = impl.universe(t);
    u.used = true;
    points = u.snapshot;
  }
  Key k;
  for (const auto& p : points) {
    Value r = f->apply(ev, p);
    if (r.is_ground()) {
      const auto& w = r.ground().words();
      k.insert(k.end(), w.begin(), w.end());
    } else {
      const Key& sub = ext_key(ev, r.fn());
      k.push_back(sub.size());
      k.insert(k.end(), sub.begin(), sub.end());
    }
  }
  f->key = std::move(k);
  f->key_epoch = ev.epoch();
  return f->key;
}

Value canonical(Evaluator& ev, const Value& v, const Type& t) {
  if (v.is_ground()) return v;
  Key k{static_cast<std::uint64_t>(t->id)};
  const Key& ext = ext_key(ev, v.fn());
  k.insert(k.end(), ext.begin(), ext.end());
  auto& canon = ev.impl().canon;
  auto it = canon.find(k);
  if (it != canon.end()) return it->second;
  canon.emplace(std::move(k), v);
  return v;
}

void register_arg(Evaluator& ev, const Type& t, const Value& arg) {
  auto& u = ev.impl().universe(t);
  if (arg.is_ground()) {
    if (u.known_ground.insert(arg.ground()).second) u.pending.push_back(arg);
  } else {
    u.candidates.emplace(arg.fn()->uid, arg);
  }
}

bool finish_pass(Evaluator& ev) {
  auto& impl = ev.impl();
  bool grew = false;
  std::map<int, std::set<Key>> seen;
  std::map<int, std::set<std::uint64_t>> checked;
  while (true) {
    bool progress = false;
    std::vector<int> ids;
    for (auto& [id, u] : impl.universes) ids.push_back(id);
    for (int id : ids) {
      if (!impl.universes[id].used) continue;
      if (impl.universes[id].type->ground()) {
        if (!impl.universes[id].pending.empty()) grew = true;
        continue;
      }
      if (!seen.count(id)) {
        auto snapshot = impl.universes[id].snapshot;
        auto& keys = seen[id];
        for (const auto& s : snapshot) keys.insert(ext_key(ev, s.fn()));
      }
      std::vector<Value> cands;
      for (auto& [uid, v] : impl.universes[id].candidates)
        if (checked[id].insert(uid).second) cands.push_back(v);
      for (const auto& c : cands) {
        progress = true;
        Key k = ext_key(ev, c.fn());
        if (seen[id].insert(k).second) {
          impl.universes[id].pending.push_back(c);
          grew = true;
        }
      }
    }
    if (!progress) break;
  }
  if (!grew) return false;
  for (auto& [id, u] : impl.universes) {
    u.snapshot.insert(u.snapshot.end(), u.pending.begin(), u.pending.end());
    u.pending.clear();
  }
  return true;
}

}  // namespace phfl
