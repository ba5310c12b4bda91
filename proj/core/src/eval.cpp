#include <pthread.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <iterator>

#include "internal.hpp"

namespace phfl {

namespace {
std::atomic<std::uint64_t> next_uid{1};
thread_local bool on_big_stack = false;
}  // namespace

FunctionValue::FunctionValue() : uid(next_uid.fetch_add(1, std::memory_order_relaxed)) {}

Env extend_env(Env env, Sym name, Value v) {
  return std::make_shared<const EnvNode>(EnvNode{name, std::move(v), std::move(env)});
}

const Value* lookup(const Env& env, Sym name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

void append_id(Key& k, const Value& v) {
  if (v.is_ground()) {
    const auto& w = v.ground().words();
    k.push_back(w.size());
    k.insert(k.end(), w.begin(), w.end());
  } else {
    k.push_back(~std::uint64_t{0});
    k.push_back(v.fn()->uid);
  }
}

void merge_deps(Deps& into, const Deps& more) {
  if (more.empty()) return;
  Deps out;
  out.reserve(into.size() + more.size());
  std::set_union(into.begin(), into.end(), more.begin(), more.end(), std::back_inserter(out));
  into = std::move(out);
}

void merge_deps(Deps& into, const Value& v) {
  if (v.is_ground()) return;
  if (auto* t = dynamic_cast<const Tracked*>(v.fn().get())) merge_deps(into, t->deps());
}

bool is_volatile(const Value& v) { return !v.is_ground() && v.fn()->is_volatile(); }

bool env_volatile(const Env& env) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (is_volatile(n->value)) return true;
  return false;
}

Env capture(const Formula& phi, const Env& env) {
  Env out;
  for (Sym s : phi->free) {
    const Value* v = lookup(env, s);
    if (!v) throw Error("unbound variable " + name_of(s) + " during evaluation");
    out = extend_env(out, s, *v);
  }
  return out;
}

Key capture_key(const Formula& phi, const Env& captured) {
  Key k{phi->id};
  for (const EnvNode* n = captured.get(); n; n = n->next.get()) append_id(k, n->value);
  return k;
}

Value Closure::apply(Evaluator& ev, const Value& raw) {
  // Stable function arguments are replaced by their class representative,
  // so memo keys below see one object per extension.
  Value arg = raw.is_ground() || phfl::is_volatile(raw) ? raw : canonical(ev, raw, lam_->type);
  bool memo = !is_volatile();
  Key k;
  if (memo) {
    if (memo_epoch_ != ev.epoch()) {
      memo_.clear();
      memo_epoch_ = ev.epoch();
    }
    append_id(k, arg);
    auto it = memo_.find(k);
    if (it != memo_.end()) {
      ++ev.mutable_stats().memo_hits;
      return it->second;
    }
  }
  Value r = ev.eval_in(lam_->a, extend_env(env_, lam_->name, arg));
  if (memo && !phfl::is_volatile(r)) memo_.emplace(std::move(k), r);
  return r;
}

void run_with_stack(std::size_t stack_bytes, const std::function<void()>& fn) {
  if (on_big_stack) {
    fn();
    return;
  }
  struct Job {
    const std::function<void()>* fn;
    std::exception_ptr error;
  } job{&fn, nullptr};
  auto entry = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    on_big_stack = true;
    try {
      (*j->fn)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, stack_bytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, entry, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();  // fall back to the current stack
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

std::optional<Value> Evaluator::Impl::memo_find(const Key& k) {
  if (auto it = ground_memo.find(k); it != ground_memo.end()) return Value(it->second);
  if (auto it = fn_memo.find(k); it != fn_memo.end()) {
    if (FnPtr f = it->second.lock()) return Value(std::move(f));
    fn_memo.erase(it);
  }
  return std::nullopt;
}

void Evaluator::Impl::memo_put(Key k, const Value& v) {
  if (v.is_ground())
    ground_memo.emplace(std::move(k), v.ground());
  else
    fn_memo.insert_or_assign(std::move(k), std::weak_ptr<FunctionValue>(v.fn()));
}

Evaluator::Evaluator(const Lts& lts, int d, EvalOptions opts)
    : lts_(lts), d_(d), space_(lts.num_states(), d), opts_(opts), impl_(std::make_unique<Impl>()) {}

Evaluator::~Evaluator() = default;

std::uint64_t Evaluator::epoch() const { return impl_->epoch; }

TupleSet Evaluator::prop_set(Sym prop, int i) {
  auto key = std::make_pair(prop, i);
  auto it = impl_->props.find(key);
  if (it != impl_->props.end()) return it->second;
  TupleSet s = space_.empty_set();
  int p = lts_.prop_index(name_of(prop));
  if (p >= 0)
    for (std::size_t idx = 0; idx < space_.size(); ++idx)
      if (lts_.has_label(space_.component(idx, i), p)) s.set(idx);
  impl_->props.emplace(key, s);
  return s;
}

TupleSet Evaluator::lt_set() {
  if (impl_->lt) return *impl_->lt;
  if (d_ < 2) throw ValidationError("lt needs arity at least 2");
  CanonicalOrder order(lts_);
  TupleSet s = space_.empty_set();
  for (std::size_t idx = 0; idx < space_.size(); ++idx)
    if (order.less(space_.component(idx, d_ - 1), space_.component(idx, d_))) s.set(idx);
  impl_->lt = s;
  return s;
}

TupleSet Evaluator::diamond_set(Sym action, int i, const TupleSet& x) {
  TupleSet out = space_.empty_set();
  int a = lts_.action_index(name_of(action));
  if (a < 0) return out;
  x.for_each([&](std::size_t idx) {
    StateId t = space_.component(idx, i);
    for (StateId s : lts_.predecessors(a, t)) out.set(space_.replace(idx, i, s));
  });
  return out;
}

TupleSet Evaluator::subst_set(const IndexMap& sigma, const TupleSet& x) {
  auto it = impl_->subst_tables.find(sigma.map);
  if (it == impl_->subst_tables.end()) {
    std::vector<std::uint32_t> table(space_.size());
    for (std::size_t idx = 0; idx < space_.size(); ++idx) {
      std::size_t target = 0;
      for (int j = 1; j <= d_; ++j) target += space_.stride(j) * space_.component(idx, sigma(j));
      table[idx] = static_cast<std::uint32_t>(target);
    }
    it = impl_->subst_tables.emplace(sigma.map, std::move(table)).first;
  }
  const auto& table = it->second;
  TupleSet out = space_.empty_set();
  for (std::size_t idx = 0; idx < space_.size(); ++idx)
    if (x.test(table[idx])) out.set(idx);
  return out;
}

namespace {

const TupleSet& as_ground(const Value& v, const char* where) {
  if (!v.is_ground()) throw Error(std::string("runtime type error: expected a set in ") + where);
  return v.ground();
}

}  // namespace

Value Evaluator::eval_in(const Formula& phi, const Env& env) {
  switch (phi->kind) {
    case Kind::Prop:
      if (phi->index < 1 || phi->index > d_) throw ValidationError("index out of range");
      return prop_set(phi->name, phi->index);
    case Kind::Lt:
      return lt_set();
    case Kind::Or: {
      TupleSet a = as_ground(eval_in(phi->a, env), "disjunction");
      if (a.full()) return a;  // the right side cannot add anything
      a |= as_ground(eval_in(phi->b, env), "disjunction");
      return a;
    }
    case Kind::Neg:
      return as_ground(eval_in(phi->a, env), "negation").complement();
    case Kind::Diamond:
      if (phi->index < 1 || phi->index > d_) throw ValidationError("index out of range");
      return diamond_set(phi->name, phi->index, as_ground(eval_in(phi->a, env), "modality"));
    case Kind::Subst:
      if (phi->map.arity() != d_) throw ValidationError("substitution arity does not match");
      return subst_set(phi->map, as_ground(eval_in(phi->a, env), "substitution"));
    case Kind::LamVar:
    case Kind::FixVar: {
      const Value* v = lookup(env, phi->name);
      if (!v) throw Error("unbound variable " + name_of(phi->name) + " during evaluation");
      return *v;
    }
    case Kind::App: {
      // Saturated applications of fixpoints are memoized on their inputs,
      // which lets a solver be freed once its result is known.
      if (phi->a->kind == Kind::Mu || phi->a->kind == Kind::Nu) {
        Env captured = capture(phi, env);
        if (!env_volatile(captured)) {
          Key k = capture_key(phi, captured);
          if (auto it = impl_->ground_memo.find(k); it != impl_->ground_memo.end()) {
            ++stats_.memo_hits;
            return it->second;
          }
          Value r = apply(eval_in(phi->a, env), eval_in(phi->b, env));
          if (r.is_ground() ) impl_->ground_memo.emplace(std::move(k), r.ground());
          return r;
        }
      }
      Value f = eval_in(phi->a, env);
      Value x = eval_in(phi->b, env);
      return apply(f, x);
    }
    case Kind::Lambda: {
      Env captured = capture(phi, env);
      bool memo = !env_volatile(captured);
      Key k;
      if (memo) {
        k = capture_key(phi, captured);
        if (auto hit = impl_->memo_find(k)) return *hit;
      }
      Value c = FnPtr(std::make_shared<Closure>(phi, captured));
      if (memo) impl_->memo_put(std::move(k), c);
      return c;
    }
    case Kind::Mu:
    case Kind::Nu: {
      Env captured = capture(phi, env);
      bool memo = !env_volatile(captured);
      Key k;
      if (memo) {
        k = capture_key(phi, captured);
        if (auto hit = impl_->memo_find(k)) {
          ++stats_.memo_hits;
          return *hit;
        }
      }
      Value r;
      if (phi->type->ground()) {
        TupleSet x = phi->kind == Kind::Mu ? space_.empty_set() : space_.full_set();
        std::size_t rounds = 0;
        while (true) {
          ++stats_.fixpoint_evals;
          if (++rounds > opts_.iteration_cap) throw ResourceLimit("fixpoint iteration cap exceeded");
          TupleSet next = as_ground(eval_in(phi->a, extend_env(captured, phi->name, x)), "fixpoint body");
          if (next == x) break;
          x = std::move(next);
        }
        r = x;
      } else {
        r = eval_fix_arrow(*this, phi, captured);
      }
      if (memo && !is_volatile(r)) impl_->memo_put(std::move(k), r);
      return r;
    }
  }
  throw Error("unknown formula kind");
}

Value Evaluator::apply(const Value& f, const Value& arg) {
  if (f.is_ground()) throw Error("runtime type error: applying a set");
  const FnPtr& fn = f.fn();
  register_arg(*this, fn->arg_type(), arg);
  return fn->apply(*this, arg);
}

Value Evaluator::apply(const Value& f, std::span<const Value> args) {
  Value r = f;
  for (const auto& a : args) r = apply(r, a);
  return r;
}

Value Evaluator::eval(const Formula& phi, const ValueEnv& env) {
  Value result;
  run_with_stack(opts_.stack_bytes, [&] {
    Env e;
    for (const auto& [s, v] : env) e = extend_env(e, s, v);
    for (int pass = 0;; ++pass) {
      if (pass >= opts_.max_passes) throw ResourceLimit("argument universe did not stabilize");
      ++impl_->epoch;
      ++stats_.passes;
      impl_->ground_memo.clear();
      impl_->fn_memo.clear();
      impl_->canon.clear();
      for (auto& [id, u] : impl_->universes) {
        u.used = false;
        u.candidates.clear();
      }
      result = eval_in(phi, e);
      if (!finish_pass(*this)) break;
    }
  });
  return result;
}

TupleSet Evaluator::eval_ground(const Formula& phi, const ValueEnv& env) {
  Value v = eval(phi, env);
  if (!v.is_ground()) throw Error("formula does not denote a set of tuples");
  return v.ground();
}

Value eval(const Lts& lts, int d, const Formula& phi, const ValueEnv& env, const EvalOptions& opts) {
  Evaluator ev(lts, d, opts);
  Value v = ev.eval(phi, env);
  if (!v.is_ground()) throw Error("eval: closed result must be ground when the session ends; use Evaluator");
  return v;
}

bool check_tuple(const Lts& lts, std::span<const StateId> tuple, const Formula& phi, const ValueEnv& env,
                 const EvalOptions& opts) {
  Evaluator ev(lts, static_cast<int>(tuple.size()), opts);
  TupleSet s = ev.eval_ground(phi, env);
  return s.test(ev.space().index(tuple));
}

}  // namespace phfl
