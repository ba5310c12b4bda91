#include <algorithm>
#include <functional>
#include <optional>

#include "phfl/error.hpp"
#include "phfl/holfp.hpp"

namespace phfl::holfp {

HValue HValue::ind(StateId s) {
  HValue v;
  v.state = s;
  return v;
}

HValue HValue::empty_rel(std::size_t product) {
  HValue v;
  v.bits.assign((product + 63) / 64, 0);
  return v;
}

namespace {

[[noreturn]] void too_large(const HTypePtr& t, const std::string& what) {
  throw LatticeTooLarge("domain too large: " + to_string(t) + " has " + what + " elements");
}

/// Sizes and element coding for the types of one LTS.
class Domains {
 public:
  Domains(const Lts& l, const HolfpLimits& lim) : l_(l), lim_(lim) {}

  /// |[[t]]|, at most lim.max_domain.
  std::uint64_t size(const HTypePtr& t) {
    if (t->individual) return static_cast<std::uint64_t>(l_.num_states());
    std::uint64_t p = product(t, lim_.max_domain);
    if (p >= 63 || (std::uint64_t{1} << p) > lim_.max_domain) too_large(t, "2^" + std::to_string(p));
    return std::uint64_t{1} << p;
  }

  /// Size of the product of the components of t.
  std::uint64_t product(const HTypePtr& t, std::uint64_t cap) {
    std::uint64_t p = 1;
    for (const auto& c : t->comps) {
      std::uint64_t s = size(c);
      if (s != 0 && p > cap / s) too_large(t, "more than " + std::to_string(cap) + " tuples in the product of");
      p *= s;
    }
    return p;
  }

  std::uint64_t product(const HTypePtr& t) { return product(t, lim_.max_product); }

  std::uint64_t index(const HValue& v, const HTypePtr& t) {
    if (t->individual) return static_cast<std::uint64_t>(v.state);
    return v.bits.empty() ? 0 : v.bits[0];
  }

  HValue element(const HTypePtr& t, std::uint64_t i) {
    if (t->individual) return HValue::ind(static_cast<StateId>(i));
    HValue v = HValue::empty_rel(product(t));
    if (!v.bits.empty()) v.bits[0] = i;
    return v;
  }

  std::uint64_t tuple_index(const HTypePtr& t, const std::vector<const HValue*>& vals) {
    std::uint64_t idx = 0, stride = 1;
    for (std::size_t i = 0; i < t->comps.size(); ++i) {
      idx += index(*vals[i], t->comps[i]) * stride;
      stride *= size(t->comps[i]);
    }
    return idx;
  }

  std::vector<HValue> decode(const HTypePtr& t, std::uint64_t idx) {
    std::vector<HValue> out;
    for (const auto& c : t->comps) {
      std::uint64_t s = size(c);
      out.push_back(element(c, idx % s));
      idx /= s;
    }
    return out;
  }

 private:
  const Lts& l_;
  HolfpLimits lim_;
};

class HEval {
 public:
  HEval(const Lts& l, const HolfpLimits& lim, HolfpStats* st) : l_(l), dom_(l, lim), st_(st) {}

  void bind(const std::string& x, HValue v, HTypePtr t) {
    env_[x] = std::move(v);
    types_[x] = std::move(t);
  }

  bool eval(const HFormula& f) {
    switch (f->kind) {
      case HKind::Prop: {
        int p = l_.prop_index(f->name);
        return p >= 0 && l_.has_label(state(f->args[0]), p);
      }
      case HKind::Edge: {
        int a = l_.action_index(f->name);
        return a >= 0 && l_.has_transition(state(f->args[0]), a, state(f->args[1]));
      }
      case HKind::RelApp: {
        const HTypePtr& t = type(f->name);
        std::vector<const HValue*> vals;
        for (const auto& y : f->args) vals.push_back(&value(y));
        return value(f->name).test(dom_.tuple_index(t, vals));
      }
      case HKind::Neg:
        return !eval(f->a);
      case HKind::Or:
        return eval(f->a) || eval(f->b);
      case HKind::Exists: {
        std::uint64_t n = dom_.size(f->type);
        Saved s(*this, {f->name});
        types_[f->name] = f->type;
        for (std::uint64_t i = 0; i < n; ++i) {
          env_[f->name] = dom_.element(f->type, i);
          if (eval(f->a)) return true;
        }
        return false;
      }
      case HKind::Lfp:
        return lfp(f);
    }
    return false;
  }

 private:
  struct Saved {
    HEval& ev;
    std::vector<std::pair<std::string, std::optional<std::pair<HValue, HTypePtr>>>> old;
    Saved(HEval& e, const std::vector<std::string>& xs) : ev(e) {
      for (const auto& x : xs) {
        auto it = ev.env_.find(x);
        if (it == ev.env_.end())
          old.push_back({x, std::nullopt});
        else
          old.push_back({x, std::make_pair(it->second, ev.types_[x])});
      }
    }
    ~Saved() {
      for (auto it = old.rbegin(); it != old.rend(); ++it) {
        if (it->second) {
          ev.env_[it->first] = it->second->first;
          ev.types_[it->first] = it->second->second;
        } else {
          ev.env_.erase(it->first);
          ev.types_.erase(it->first);
        }
      }
    }
  };

  bool lfp(const HFormula& f) {
    const HTypePtr& t = f->type;
    std::vector<const HValue*> argv;
    for (const auto& z : f->args) argv.push_back(&value(z));
    std::uint64_t target = dom_.tuple_index(t, argv);
    std::uint64_t p = dom_.product(t);
    std::vector<std::string> names{f->name};
    names.insert(names.end(), f->params.begin(), f->params.end());
    Saved s(*this, names);
    HValue cur = HValue::empty_rel(p);
    types_[f->name] = t;
    for (std::size_t i = 0; i < f->params.size(); ++i) types_[f->params[i]] = t->comps[i];
    std::size_t rounds = 0;
    while (true) {
      ++rounds;
      env_[f->name] = cur;
      HValue next = HValue::empty_rel(p);
      for (std::uint64_t x = 0; x < p; ++x) {
        auto comps = dom_.decode(t, x);
        for (std::size_t i = 0; i < comps.size(); ++i) env_[f->params[i]] = std::move(comps[i]);
        if (eval(f->a)) next.set(x);
      }
      if (next == cur) break;
      cur = std::move(next);
    }
    if (st_) {
      st_->max_lfp_rounds = std::max(st_->max_lfp_rounds, rounds);
      st_->max_lfp_product = std::max(st_->max_lfp_product, p);
    }
    return cur.test(target);
  }

  const HValue& value(const std::string& x) const {
    auto it = env_.find(x);
    if (it == env_.end()) throw ValidationError("no value for free variable " + x);
    return it->second;
  }

  StateId state(const std::string& x) const {
    StateId s = value(x).state;
    if (s < 0 || s >= l_.num_states()) throw ValidationError("variable " + x + " is not bound to a state");
    return s;
  }

  const HTypePtr& type(const std::string& x) const {
    auto it = types_.find(x);
    if (it == types_.end()) throw ValidationError("no type for variable " + x);
    return it->second;
  }

  const Lts& l_;
  Domains dom_;
  HolfpStats* st_;
  std::map<std::string, HValue> env_;
  std::map<std::string, HTypePtr> types_;
};

}  // namespace

std::uint64_t domain_size(const Lts& l, const HTypePtr& t, std::uint64_t limit) {
  HolfpLimits lim;
  lim.max_domain = limit;
  return Domains(l, lim).size(t);
}

std::vector<HValue> enumerate_domain(const Lts& l, const HTypePtr& t, const HolfpLimits& lim) {
  Domains d(l, lim);
  std::uint64_t n = d.size(t);
  std::vector<HValue> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(d.element(t, i));
  return out;
}

HValue make_relation(const Lts& l, const HTypePtr& t, const std::vector<std::vector<HValue>>& tuples,
                     const HolfpLimits& lim) {
  Domains d(l, lim);
  HValue v = HValue::empty_rel(d.product(t));
  for (const auto& tup : tuples) {
    if (tup.size() != t->comps.size()) throw ValidationError("tuple width does not match " + to_string(t));
    std::vector<const HValue*> ptrs;
    for (const auto& x : tup) ptrs.push_back(&x);
    v.set(d.tuple_index(t, ptrs));
  }
  return v;
}

bool holds(const Lts& l, const HTypePtr& t, const HValue& rel, const std::vector<HValue>& tuple,
           const HolfpLimits& lim) {
  Domains d(l, lim);
  std::vector<const HValue*> ptrs;
  for (const auto& x : tuple) ptrs.push_back(&x);
  return rel.test(d.tuple_index(t, ptrs));
}

bool eval_holfp(const Lts& l, const Assignment& alpha, const HFormula& f, const TypeEnv& free, HolfpStats* stats,
                const HolfpLimits& lim) {
  HEval ev(l, lim, stats);
  for (const auto& [x, v] : alpha) {
    auto it = free.find(x);
    ev.bind(x, v, it == free.end() ? individual() : it->second);
  }
  return ev.eval(f);
}

std::vector<Assignment> all_assignments(const Lts& l, const HolfpInfo& info, const HolfpLimits& lim) {
  std::vector<Assignment> out{{}};
  for (const auto& [x, t] : info.free_types) {
    auto dom = enumerate_domain(l, t, lim);
    std::vector<Assignment> next;
    for (const auto& a : out)
      for (const auto& v : dom) {
        Assignment b = a;
        b[x] = v;
        next.push_back(std::move(b));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace phfl::holfp
