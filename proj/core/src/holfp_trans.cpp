#include <algorithm>
#include <set>

#include "phfl/error.hpp"
#include "phfl/holfp.hpp"
#include "phfl/typeck.hpp"

namespace phfl::holfp {

Sym phfl_var(const std::string& name) { return intern("h_" + name); }

// ------------------------------------------------------------------ tptr

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// The relation x : tau'(w,2) with tptr_2(x) = s, if s is such a cylinder.
std::optional<HValue> decode_cylinder(const Lts& l, const TupleSpace& sp, const TupleSet& s, int w) {
  std::uint64_t n = static_cast<std::uint64_t>(l.num_states());
  std::uint64_t block = ipow(n, w);
  HValue x = HValue::empty_rel(block);
  std::vector<int> seen(block, -1);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    std::uint64_t pre = i % block;  // positions 1..w are the low digits
    int in = s.test(i) ? 1 : 0;
    if (seen[pre] < 0)
      seen[pre] = in;
    else if (seen[pre] != in)
      return std::nullopt;
  }
  for (std::uint64_t p = 0; p < block; ++p)
    if (seen[p] == 1) x.set(p);
  return x;
}

struct TptrCtx {
  HValue m;
  int w;
  HTypePtr lower;  // argument type tau'(w,k-1)
  std::uint64_t nd;
  Type type;
};

/// Index of f in [[lower]] when f is the image of an element, else -1.
long decode_arg(Evaluator& ev, const TptrCtx& c, const Value& f) {
  if (c.lower->order == 2) {
    if (!f.is_ground()) return -1;
    auto x = decode_cylinder(ev.lts(), ev.space(), f.ground(), c.w);
    if (!x) return -1;
    return static_cast<long>(x->bits.empty() ? 0 : x->bits[0]);
  }
  if (f.is_ground()) return -1;
  // apply f to the images of all tuples over the level below
  HTypePtr below = c.lower->comps[0];
  auto bdom = enumerate_domain(ev.lts(), below);
  std::vector<Value> imgs;
  for (const auto& b : bdom) imgs.push_back(tptr(ev, below, b, c.w));
  std::uint64_t nb = bdom.size(), total = ipow(nb, c.w);
  HValue x = HValue::empty_rel(total);
  std::vector<Value> args(c.w);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t r = i;
    for (int j = 0; j < c.w; ++j) {
      args[j] = imgs[r % nb];
      r /= nb;
    }
    Value v = ev.apply(f, args);
    if (v.ground().full())
      x.set(i);
    else if (!v.ground().empty())
      return -1;
  }
  return static_cast<long>(x.bits.empty() ? 0 : x.bits[0]);
}

Value tptr_partial(std::shared_ptr<const TptrCtx> c, std::vector<long> got) {
  Type t = type_after(c->type, static_cast<int>(got.size()));
  return FnPtr(std::make_shared<NativeFn>(t, [c, got](Evaluator& ev, const Value& arg) -> Value {
    std::vector<long> g = got;
    g.push_back(decode_arg(ev, *c, arg));
    if (static_cast<int>(g.size()) < c->w) return tptr_partial(c, std::move(g));
    std::uint64_t idx = 0, stride = 1;
    for (long v : g) {
      if (v < 0) return ev.space().empty_set();
      idx += static_cast<std::uint64_t>(v) * stride;
      stride *= c->nd;
    }
    return c->m.test(idx) ? ev.space().full_set() : ev.space().empty_set();
  }));
}

}  // namespace

Value tptr(Evaluator& ev, const HTypePtr& t, const HValue& m, int w) {
  if (!is_homogeneous_type(t, w) || t->order < 2)
    throw ValidationError("tptr needs a type tau'(" + std::to_string(w) + ",k) with k >= 2, got " + to_string(t));
  const Lts& l = ev.lts();
  const TupleSpace& sp = ev.space();
  if (ev.arity() < w) throw ValidationError("tptr needs d >= w");
  int k = t->order;
  if (k == 2) {
    std::uint64_t block = ipow(static_cast<std::uint64_t>(l.num_states()), w);
    TupleSet s = sp.empty_set();
    for (std::size_t i = 0; i < sp.size(); ++i)
      if (m.test(i % block)) s.set(i);
    return s;
  }
  auto ctx = std::make_shared<TptrCtx>();
  ctx->m = m;
  ctx->w = w;
  ctx->lower = t->comps[0];
  ctx->nd = domain_size(l, ctx->lower);
  ctx->type = tau_type(w, k - 2);
  return tptr_partial(ctx, {});
}

// ----------------------------------------------------------------- trans

namespace {

/// Bisimilarity of positions d-1 and d over the signature.
Formula bisim_last(const Signature& sig, int d) {
  Sym x = fresh_sym("X");
  std::vector<Formula> parts;
  for (const auto& p : sig.props) parts.push_back(iff(prop(p, d - 1), prop(p, d)));
  for (const auto& a : sig.actions) parts.push_back(box(a, d - 1, diamond(a, d, fixvar(x))));
  parts.push_back(subst(sigma_swap(d, d - 1, d), fixvar(x)));
  return nu(x, ground_type(), big_and(parts));
}

void free_names(const HFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto use = [&](const std::string& x) {
    if (!bound.count(x)) out.insert(x);
  };
  switch (f->kind) {
    case HKind::Prop:
    case HKind::Edge:
      for (const auto& x : f->args) use(x);
      return;
    case HKind::RelApp:
      use(f->name);
      for (const auto& x : f->args) use(x);
      return;
    case HKind::Neg:
      free_names(f->a, bound, out);
      return;
    case HKind::Or:
      free_names(f->a, bound, out);
      free_names(f->b, bound, out);
      return;
    case HKind::Exists: {
      bool fresh = bound.insert(f->name).second;
      free_names(f->a, bound, out);
      if (fresh) bound.erase(f->name);
      return;
    }
    case HKind::Lfp: {
      for (const auto& z : f->args) use(z);
      std::vector<std::string> added;
      for (const auto& x : std::vector<std::string>{f->name})
        if (bound.insert(x).second) added.push_back(x);
      for (const auto& y : f->params)
        if (bound.insert(y).second) added.push_back(y);
      free_names(f->a, bound, out);
      for (const auto& x : added) bound.erase(x);
      return;
    }
  }
}

class Translator {
 public:
  struct Var {
    bool individual;
    int index = 0;  // individuals
    int order = 1;  // relations
    bool fix = false;
  };
  using Scope = std::map<std::string, Var>;

  Translator(int w, QuantifierConfig c, const Signature& sig) : w_(w), c_(std::move(c)), bisim_(bisim_last(sig, c_.d)) {}

  Formula run(const HFormula& f, const Scope& sc) {
    switch (f->kind) {
      case HKind::Prop:
        return prop(f->name, index(sc, f->args[0], f));
      case HKind::Edge: {
        int i = index(sc, f->args[0], f), j = index(sc, f->args[1], f);
        int d = c_.d;
        if (i != j) return diamond(f->name, i, subst(IndexMap::from_pairs(d, {{d - 1, i}, {d, j}}), bisim_));
        // self loop: move the source to d-1 so position i keeps the old state
        return subst(IndexMap::from_pairs(d, {{d - 1, i}}),
                     diamond(f->name, d - 1, subst(IndexMap::from_pairs(d, {{d, i}}), bisim_)));
      }
      case HKind::Neg:
        return neg(run(f->a, sc));
      case HKind::Or:
        return lor(run(f->a, sc), run(f->b, sc));
      case HKind::Exists: {
        Scope inner = sc;
        int k = f->type->order;
        if (k == 1) {
          int j = alloc(sc, 1, f);
          inner[f->name] = {true, j};
          return exists_index(c_, j, run(f->a, inner));
        }
        inner[f->name] = {false, 0, k, false};
        return exists_ho(c_, k - 2, phfl_var(f->name), run(f->a, inner));
      }
      case HKind::RelApp: {
        const Var& x = var(sc, f->name, f);
        if (x.individual) throw ValidationError("individual variable " + f->name + " applied");
        Formula ref = x.fix ? fixvar(phfl_var(f->name)) : lamvar(phfl_var(f->name));
        if (x.order == 2) return subst(positions(sc, f->args, f), ref);
        std::vector<Formula> args;
        for (const auto& y : f->args) args.push_back(relation_ref(sc, y, f));
        return apps(ref, args);
      }
      case HKind::Lfp:
        return f->type->order == 2 ? lfp_first(f, sc) : lfp_higher(f, sc);
    }
    return ff();
  }

 private:
  /// Order-2 fixpoint: an order-0 mu over d-tuples whose positions 1..w
  /// carry the parameters.
  Formula lfp_first(const HFormula& f, const Scope& sc) {
    std::set<std::string> bound{f->name}, used;
    bound.insert(f->params.begin(), f->params.end());
    free_names(f->a, bound, used);
    Scope inner;
    std::vector<std::pair<int, int>> moves;  // (old, new) for clobbered variables
    Scope probe = sc;
    for (const auto& [name, v] : sc) {
      if (!v.individual) {
        inner[name] = v;
        continue;
      }
      if (v.index > w_) {
        inner[name] = v;
      } else if (used.count(name)) {
        int j = alloc(probe, w_ + 1, f);
        probe["#" + name] = {true, j};
        inner[name] = {true, j};
        moves.push_back({v.index, j});
      }
    }
    for (const auto& [name, v] : probe)
      if (name[0] == '#') inner[name] = v;  // keeps relocated slots reserved
    for (int j = 0; j < w_; ++j) inner[f->params[j]] = {true, j + 1};
    inner[f->name] = {false, 0, 2, true};
    Formula body = run(f->a, inner);
    Formula out = subst(positions(sc, f->args, f), mu(phfl_var(f->name), ground_type(), body));
    int d = c_.d;
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
      auto [from, to] = *it;
      Formula same = subst(IndexMap::from_pairs(d, {{d - 1, to}, {d, from}}), bisim_);
      out = exists_index(c_, to, land(same, out));
    }
    return out;
  }

  Formula lfp_higher(const HFormula& f, const Scope& sc) {
    int k = f->type->order;
    Scope inner = sc;
    inner[f->name] = {false, 0, k, true};
    for (const auto& y : f->params) inner[y] = {false, 0, k - 1, false};
    Formula body = run(f->a, inner);
    Type lower = tau_type(w_, k - 3);
    for (auto it = f->params.rbegin(); it != f->params.rend(); ++it)
      body = lambda(phfl_var(*it), Variance::Zero, lower, body);
    Formula m = mu(phfl_var(f->name), tau_type(w_, k - 2), body);
    std::vector<Formula> args;
    for (const auto& z : f->args) args.push_back(relation_ref(sc, z, f));
    return apps(m, args);
  }

  IndexMap positions(const Scope& sc, const std::vector<std::string>& ys, const HFormula& at) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < w_; ++j) pairs.push_back({j + 1, index(sc, ys.at(j), at)});
    return IndexMap::from_pairs(c_.d, pairs);
  }

  Formula relation_ref(const Scope& sc, const std::string& y, const HFormula& at) {
    const Var& v = var(sc, y, at);
    if (v.individual) throw ValidationError("individual " + y + " passed where a relation is expected");
    return v.fix ? fixvar(phfl_var(y)) : lamvar(phfl_var(y));
  }

  const Var& var(const Scope& sc, const std::string& x, const HFormula& at) {
    auto it = sc.find(x);
    if (it == sc.end())
      throw ValidationError("reserved-index clash: variable " + x + " is not available in " + to_string(at));
    return it->second;
  }

  int index(const Scope& sc, const std::string& x, const HFormula& at) {
    const Var& v = var(sc, x, at);
    if (!v.individual) throw ValidationError("relation " + x + " used as an individual");
    return v.index;
  }

  int alloc(const Scope& sc, int from, const HFormula& at) {
    std::set<int> live;
    for (const auto& [n, v] : sc)
      if (v.individual) live.insert(v.index);
    for (int j = from; j <= c_.last_free(); ++j)
      if (!live.count(j)) {
        max_index_ = std::max(max_index_, j);
        return j;
      }
    throw ValidationError("reserved-index clash: no free position below " + std::to_string(c_.first_anchor()) +
                          " for the individuals of " + to_string(at));
  }

  int w_;
  QuantifierConfig c_;
  Formula bisim_;
  int max_index_ = 0;

 public:
  int max_index() const { return max_index_; }
};

}  // namespace

constexpr int kSpareSlots = 8;

TransResult trans(const HFormula& f, int w, const Signature& sig, int r, const TypeEnv& free) {
  HolfpInfo info = typecheck_holfp(f, free);
  if (!is_homogeneous(f, w, info.free_types))
    throw ValidationError("trans needs a formula homogeneous for w=" + std::to_string(w));
  int nfree = static_cast<int>(info.free_individuals.size());
  if (r == 0) r = std::max(1, nfree);
  if (r < nfree) throw ValidationError("query width below the number of free individuals");
  Translator::Scope sc;
  for (int i = 0; i < nfree; ++i) sc[info.free_individuals[i]] = {true, i + 1};
  for (const auto& [x, t] : info.free_types)
    if (!t->individual) sc[x] = {false, 0, t->order, false};
  // Dry run with spare room to learn how many individual slots are live at
  // once; d grows past 2w+r+2 only when they do not fit below 2w.
  QuantifierConfig wide = QuantifierConfig::make(w, r, sig.actions);
  wide.d += kSpareSlots;
  Translator probe(w, wide, sig);
  probe.run(f, sc);
  QuantifierConfig c = QuantifierConfig::make(w, r, sig.actions);
  c.d = std::max(c.d, probe.max_index() + r + 2);
  Translator tr(w, c, sig);
  return {tr.run(f, sc), c, info.free_individuals};
}

Capture capture_pipeline(const HFormula& f, const Signature& sig) {
  HolfpInfo info = typecheck_holfp(f);
  for (const auto& [x, t] : info.free_types)
    if (!t->individual) throw ValidationError("capture needs a query: free variable " + x + " is a relation");
  Homogenized h = homogenize(f);
  TransResult tr = trans(h.formula, h.w, sig);
  const QuantifierConfig& c = tr.config;
  std::vector<std::pair<int, int>> copy;
  for (int j = 0; j < c.r; ++j) copy.push_back({c.first_anchor() + j, j + 1});
  IndexMap sigma = IndexMap::from_pairs(c.d, copy);
  Formula body = subst(sigma, tr.formula);
  Formula psi = info.order >= 2 || tr.formula->has_free(goodness_var())
                    ? app(lambda(goodness_var(), Variance::Zero, ground_type(), body), subst(sigma, tt()))
                    : body;
  Capture out;
  out.psi = psi;
  out.phi_prime = tr.formula;
  out.homogeneous = h.formula;
  out.config = c;
  out.free_individuals = tr.free_individuals;
  out.holfp_order = info.order;
  type_of(Context{}, psi);
  out.phfl_order = order_of_formula(psi);
  return out;
}

bool capture_query(const Lts& l, const Capture& c, const std::vector<StateId>& states, const EvalOptions& opts) {
  if (static_cast<int>(states.size()) < static_cast<int>(c.free_individuals.size()))
    throw ValidationError("query needs one state per free individual");
  std::vector<StateId> tuple(states.begin(), states.end());
  if (tuple.empty()) tuple.push_back(0);
  tuple.resize(c.config.d, tuple.back());
  return check_tuple(l, tuple, c.psi, {}, opts);
}

}  // namespace phfl::holfp
