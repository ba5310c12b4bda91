#include <algorithm>

#include "internal.hpp"
#include "json.hpp"

namespace phfl {

namespace {

TupleSet set_from_bits(const TupleSpace& sp, std::size_t bits) {
  TupleSet s = sp.empty_set();
  for (std::size_t b = 0; b < sp.size(); ++b)
    if ((bits >> b) & 1u) s.set(b);
  return s;
}

std::size_t bits_of(const TupleSet& s) { return s.words().empty() ? 0 : static_cast<std::size_t>(s.words()[0]); }

/// Curried function over ground arguments backed by a flat table indexed
/// by the mixed-radix code of the argument sets.
Value table_function(Type t, std::shared_ptr<const std::vector<TupleSet>> table, std::size_t radix,
                     std::size_t offset = 0) {
  return FnPtr(std::make_shared<NativeFn>(t, [t, table, radix, offset](Evaluator&, const Value& arg) -> Value {
    std::size_t off = offset * radix + bits_of(arg.ground());
    if (t->result->ground()) return (*table)[off];
    return table_function(t->result, table, radix, off);
  }));
}

// Argument count and check that every argument is ground.
int ground_arity(const Type& t) {
  int n = 0;
  for (Type u = t; !u->ground(); u = u->result) {
    if (!u->arg->ground()) return -1;
    ++n;
  }
  return n;
}

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit, const std::string& what) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) throw LatticeTooLarge("lattice too large: " + what);
    r *= base;
  }
  if (r > limit) throw LatticeTooLarge("lattice too large: " + what);
  return r;
}

Value uniform_fn(UniformDomain* dom, int level, std::size_t bits, Type ty, std::vector<Value> got, int w,
                 const TupleSet& empty, const TupleSet& full) {
  return FnPtr(std::make_shared<NativeFn>(ty, [=](Evaluator&, const Value& arg) -> Value {
    std::vector<Value> next = got;
    next.push_back(arg);
    if (static_cast<int>(next.size()) < w) return uniform_fn(dom, level, bits, ty->result, next, w, empty, full);
    std::size_t code = 0;
    std::size_t lower = dom->elements(level - 1).size();
    for (const auto& a : next) {
      int pos = dom->index_of(a, level - 1);
      if (pos < 0) return empty;
      code = code * lower + static_cast<std::size_t>(pos);
    }
    return ((bits >> code) & 1u) ? full : empty;
  }));
}

}  // namespace

std::vector<Value> enumerate_lattice(Evaluator& ev, const Type& t, std::size_t limit) {
  const TupleSpace& sp = ev.space();
  if (sp.size() >= 63) throw LatticeTooLarge("lattice too large: |S|^d = " + std::to_string(sp.size()));
  std::size_t radix = std::size_t{1} << sp.size();
  std::vector<Value> out;
  if (t->ground()) {
    if (radix > limit) throw LatticeTooLarge("lattice too large: 2^" + std::to_string(sp.size()) + " sets");
    for (std::size_t b = 0; b < radix; ++b) out.push_back(set_from_bits(sp, b));
    return out;
  }
  int n = ground_arity(t);
  if (n < 0) throw LatticeTooLarge("lattice enumeration supports only first-order function types");
  std::size_t cells = checked_pow(radix, static_cast<std::size_t>(n), limit, to_string(t));
  std::size_t count = checked_pow(radix, cells, limit, to_string(t));
  for (std::size_t c = 0; c < count; ++c) {
    auto table = std::make_shared<std::vector<TupleSet>>(cells);
    std::size_t rest = c;
    for (std::size_t i = 0; i < cells; ++i) {
      (*table)[i] = set_from_bits(sp, rest % radix);
      rest /= radix;
    }
    out.push_back(table_function(t, table, radix));
  }
  return out;
}

bool lattice_leq(Evaluator& ev, const Value& x, const Value& y, const Type& t) {
  if (t->ground()) {
    if (!x.is_ground() || !y.is_ground()) throw Error("lattice_leq: value does not match type Prop");
    return x.ground().subset_of(y.ground());
  }
  if (x.is_ground() || y.is_ground()) throw Error("lattice_leq: value does not match type " + to_string(t));
  for (const Value& a : enumerate_lattice(ev, t->arg)) {
    Value fx = ev.apply(x, a), fy = ev.apply(y, a);
    bool ok = false;
    switch (t->variance) {
      case Variance::Plus:
        ok = lattice_leq(ev, fx, fy, t->result);
        break;
      case Variance::Minus:
        ok = lattice_leq(ev, fy, fx, t->result);
        break;
      case Variance::Zero:
        ok = lattice_eq(ev, fx, fy, t->result);
        break;
    }
    if (!ok) return false;
  }
  return true;
}

bool lattice_eq(Evaluator& ev, const Value& x, const Value& y, const Type& t) {
  if (t->ground()) return x.ground() == y.ground();
  for (const Value& a : enumerate_lattice(ev, t->arg))
    if (!lattice_eq(ev, ev.apply(x, a), ev.apply(y, a), t->result)) return false;
  return true;
}

Value lfp_solve(Evaluator& ev, const std::function<Value(const Value&)>& functional, const Type& t, bool greatest) {
  const TupleSpace& sp = ev.space();
  std::size_t cap = ev.options().iteration_cap;
  if (t->ground()) {
    TupleSet x = greatest ? sp.full_set() : sp.empty_set();
    for (std::size_t round = 0;; ++round) {
      if (round > cap) throw ResourceLimit("lfp_solve: iteration cap exceeded");
      Value next = functional(x);
      if (next.ground() == x) return x;
      x = next.ground();
    }
  }
  int n = ground_arity(t);
  if (n < 0) throw LatticeTooLarge("lfp_solve supports only first-order function types");
  if (sp.size() > ev.options().full_threshold)
    throw LatticeTooLarge("lattice too large: |S|^d = " + std::to_string(sp.size()) + " exceeds threshold " +
                          std::to_string(ev.options().full_threshold));
  std::size_t radix = std::size_t{1} << sp.size();
  std::size_t cells = checked_pow(radix, static_cast<std::size_t>(n), ev.options().full_table_cap, to_string(t));
  auto table = std::make_shared<std::vector<TupleSet>>(cells, greatest ? sp.full_set() : sp.empty_set());
  for (std::size_t round = 0;; ++round) {
    if (round > cap) throw ResourceLimit("lfp_solve: iteration cap exceeded");
    Value next = functional(table_function(t, table, radix));
    auto next_table = std::make_shared<std::vector<TupleSet>>(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      std::vector<Value> args(n);
      std::size_t rest = c;
      for (int i = n - 1; i >= 0; --i) {
        args[i] = set_from_bits(sp, rest % radix);
        rest /= radix;
      }
      (*next_table)[c] = ev.apply(next, args).ground();
    }
    if (*next_table == *table) return table_function(t, table, radix);
    table = next_table;
  }
}

Type tau_type(int w, int k) {
  if (k == 0) return ground_type();
  Type lower = tau_type(w, k - 1);
  std::vector<std::pair<Variance, Type>> args(w, {Variance::Zero, lower});
  return arrows(args);
}

UniformDomain::UniformDomain(Evaluator& ev, int w, int k, std::size_t limit) : ev_(ev), w_(w) {
  const TupleSpace& sp = ev.space();
  levels_.push_back(enumerate_lattice(ev, ground_type(), limit));
  arg_tuples_.emplace_back();
  index_.emplace_back();
  for (int i = 0; i < static_cast<int>(levels_[0].size()); ++i) {
    auto w = levels_[0][i].ground().words();
    std::vector<std::uint64_t> sig(w.begin(), w.end());
    index_[0].emplace(std::string(reinterpret_cast<const char*>(sig.data()), sig.size() * 8), i);
  }
  for (int level = 1; level <= k; ++level) {
    const auto& lower = levels_[level - 1];
    std::size_t tuples = checked_pow(lower.size(), static_cast<std::size_t>(w), limit,
                                     "uniform argument tuples at level " + std::to_string(level));
    std::vector<std::vector<Value>> args;
    for (std::size_t c = 0; c < tuples; ++c) {
      std::vector<Value> tuple(w);
      std::size_t rest = c;
      for (int j = w - 1; j >= 0; --j) {
        tuple[j] = lower[rest % lower.size()];
        rest /= lower.size();
      }
      args.push_back(std::move(tuple));
    }
    arg_tuples_.push_back(args);
    index_.emplace_back();
    std::vector<Value> elems;
    Type t = tau_type(w, level);
    if (level == 1) {
      elems = enumerate_lattice(ev, t, limit);
    } else {
      std::size_t count = checked_pow(2, tuples, limit, "uniform functions at level " + std::to_string(level));
      TupleSet empty = sp.empty_set(), full = sp.full_set();
      for (std::size_t c = 0; c < count; ++c) {
        // Bit j of c gives the value on argument tuple j; arguments outside
        // the uniform domain are mapped to the empty set.
        elems.push_back(uniform_fn(this, level, c, t, {}, w, empty, full));
      }
    }
    levels_.push_back(elems);
    for (int i = 0; i < static_cast<int>(levels_[level].size()); ++i) {
      auto sig = signature(levels_[level][i], level);
      index_[level].emplace(std::string(reinterpret_cast<const char*>(sig.data()), sig.size() * 8), i);
    }
  }
}

std::vector<std::uint64_t> UniformDomain::signature(const Value& f, int level) {
  if (level == 0) {
    auto w = f.ground().words();
    return {w.begin(), w.end()};
  }
  std::vector<std::uint64_t> sig;
  for (const auto& tuple : arg_tuples_[level]) {
    Value r = ev_.apply(f, tuple);
    const auto& w = r.ground().words();
    sig.insert(sig.end(), w.begin(), w.end());
  }
  return sig;
}

int UniformDomain::index_of(const Value& f, int level) {
  auto sig = signature(f, level);
  auto it = index_[level].find(std::string(reinterpret_cast<const char*>(sig.data()), sig.size() * 8));
  return it == index_[level].end() ? -1 : it->second;
}

bool is_uniform(Evaluator& ev, const Value& f, int w, int k, std::size_t limit) {
  if (k < 2) throw Error("is_uniform needs k >= 2");
  UniformDomain dom(ev, w, k - 1, limit);
  const auto& lower = dom.elements(k - 1);
  std::size_t tuples = checked_pow(lower.size(), static_cast<std::size_t>(w), limit, "uniform argument tuples");
  for (std::size_t c = 0; c < tuples; ++c) {
    std::vector<Value> args(w);
    std::size_t rest = c;
    for (int j = w - 1; j >= 0; --j) {
      args[j] = lower[rest % lower.size()];
      rest /= lower.size();
    }
    Value r = ev.apply(f, args);
    if (!r.is_ground()) throw Error("is_uniform: value is not of type tau(w,k)");
    if (!r.ground().empty() && !r.ground().full()) return false;
  }
  return true;
}

std::vector<std::vector<StateId>> tuples_of(const TupleSpace& space, const TupleSet& s) {
  std::vector<std::vector<StateId>> out;
  s.for_each([&](std::size_t idx) { out.push_back(space.decode(idx)); });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

nlohmann::json to_json(Evaluator& ev, const Value& v, int depth) {
  if (v.is_ground()) return tuples_of(ev.space(), v.ground());
  nlohmann::json j;
  Type arg = v.fn()->arg_type();
  j["function"] = {{"argument_type", to_string(arg)}};
  if (arg->ground() && ev.space().size() <= 4 && depth < 2) {
    nlohmann::json entries = nlohmann::json::array();
    for (const Value& a : enumerate_lattice(ev, arg))
      entries.push_back({{"argument", to_json(ev, a, depth + 1)}, {"result", to_json(ev, ev.apply(v, a), depth + 1)}});
    j["function"]["table"] = entries;
  }
  return j;
}

}  // namespace

std::string value_to_json(Evaluator& ev, const Value& v) { return to_json(ev, v, 0).dump(); }

}  // namespace phfl
