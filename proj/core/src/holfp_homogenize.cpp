#include <algorithm>
#include <functional>

#include "phfl/error.hpp"
#include "phfl/holfp.hpp"

namespace phfl::holfp {

namespace {

bool types_homogeneous(const HFormula& f, int w) {
  switch (f->kind) {
    case HKind::Exists:
      if (!is_homogeneous_type(f->type, w)) return false;
      break;
    case HKind::Lfp:
      if (!is_homogeneous_type(f->type, w)) return false;
      break;
    default:
      break;
  }
  if (f->a && !types_homogeneous(f->a, w)) return false;
  return !f->b || types_homogeneous(f->b, w);
}

HFormula conj(std::vector<HFormula> fs) {
  if (fs.empty()) return nullptr;
  HFormula f = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) f = h_and(*it, f);
  return f;
}

HFormula guarded(HFormula guard, HFormula body) { return guard ? h_and(guard, body) : body; }

/// Wraps formulas under existential binders with conjoined guards.
struct Wrap {
  std::vector<std::pair<std::string, HTypePtr>> binders;
  std::vector<HFormula> guards;

  HFormula apply(HFormula inner) const {
    // guards[i] may mention binders[0..i]
    HFormula f = inner;
    for (std::size_t i = binders.size(); i-- > 0;) f = h_exists(binders[i].first, binders[i].second, h_and(guards[i], f));
    return f;
  }
};

class Homogenizer {
 public:
  Homogenizer(int w, const TypeEnv& free) : w_(w), types_(free) {}

  HFormula run(const HFormula& f) {
    switch (f->kind) {
      case HKind::Prop:
      case HKind::Edge:
        return f;
      case HKind::RelApp: {
        const HTypePtr& t = type_of(f->name);
        Wrap wrap;
        auto args = lift_args(t, f->args, wrap);
        return wrap.apply(h_app(f->name, args));
      }
      case HKind::Neg:
        return h_neg(run(f->a));
      case HKind::Or:
        return h_or(run(f->a), run(f->b));
      case HKind::Exists: {
        types_[f->name] = f->type;
        HFormula body = run(f->a);
        HFormula g = f->type->individual ? nullptr : enc(f->name, f->type);
        return h_exists(f->name, hom(f->type->order), guarded(g, body));
      }
      case HKind::Lfp: {
        const HTypePtr& t = f->type;
        int m = t->order - 1;
        int n = static_cast<int>(t->comps.size());
        types_[f->name] = t;
        for (int i = 0; i < n; ++i) types_[f->params[i]] = t->comps[i];
        HFormula body = run(f->a);
        std::vector<std::string> params;
        for (int i = 0; i < n; ++i) {
          const HTypePtr& c = t->comps[i];
          if (c->order == m) {
            params.push_back(f->params[i]);
            continue;
          }
          std::string p = fresh();
          params.push_back(p);
          body = unlift(p, m, f->params[i], c, body);
        }
        while (static_cast<int>(params.size()) < w_) params.push_back(fresh());
        Wrap wrap;
        auto args = lift_args(t, f->args, wrap);
        return wrap.apply(h_lfp(f->name, params, hom(t->order), body, args));
      }
    }
    return f;
  }

 private:
  HTypePtr hom(int k) const { return homogeneous_type(w_, k); }
  std::string fresh() { return "_h" + std::to_string(++counter_); }

  const HTypePtr& type_of(const std::string& x) const {
    auto it = types_.find(x);
    if (it == types_.end()) throw ValidationError("no type for variable " + x);
    return it->second;
  }

  HTypePtr var_type(const std::string& x) const {
    auto it = types_.find(x);
    return it == types_.end() ? individual() : it->second;
  }

  /// Arguments of an application of a t-typed relation: lifted to the
  /// component order and padded to width w.
  std::vector<std::string> lift_args(const HTypePtr& t, const std::vector<std::string>& ys, Wrap& wrap) {
    int m = t->order - 1;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      std::string cur = ys[i];
      for (int o = t->comps[i]->order; o < m; ++o) {
        std::string l = fresh();
        wrap.binders.push_back({l, hom(o + 1)});
        wrap.guards.push_back(singleton(l, cur, o));
        cur = l;
      }
      out.push_back(cur);
    }
    while (static_cast<int>(out.size()) < w_) out.push_back(out.back());
    return out;
  }

  /// exists chain from `outer` (order m) down to `inner` (type c) around body.
  HFormula unlift(const std::string& outer, int m, const std::string& inner, const HTypePtr& c, HFormula body) {
    std::vector<std::string> names;
    for (int o = m - 1; o > c->order; --o) names.push_back(fresh());
    names.push_back(inner);
    // names[j] has order m-1-j
    HFormula f = body;
    for (std::size_t j = names.size(); j-- > 0;) {
      int o = m - 1 - static_cast<int>(j);
      const std::string& up = j == 0 ? outer : names[j - 1];
      f = h_exists(names[j], hom(o), h_and(singleton(up, names[j], o), f));
    }
    return f;
  }

  /// a = b at tau'(w,k).
  HFormula eq(const std::string& a, const std::string& b, int k) {
    if (k == 1) {
      std::string p = fresh();
      return h_forall(p, hom(2), h_implies(h_app(p, std::vector<std::string>(w_, a)),
                                            h_app(p, std::vector<std::string>(w_, b))));
    }
    std::vector<std::string> us;
    for (int i = 0; i < w_; ++i) us.push_back(fresh());
    HFormula f = h_and(h_implies(h_app(a, us), h_app(b, us)), h_implies(h_app(b, us), h_app(a, us)));
    for (auto it = us.rbegin(); it != us.rend(); ++it) f = h_forall(*it, hom(k - 1), f);
    return f;
  }

  /// l = {(m,...,m)} with m : tau'(w,k).
  HFormula singleton(const std::string& l, const std::string& m, int k) {
    std::vector<std::string> zs;
    for (int i = 0; i < w_; ++i) zs.push_back(fresh());
    std::vector<HFormula> eqs;
    for (const auto& z : zs) eqs.push_back(eq(z, m, k));
    HFormula only = h_implies(h_app(l, zs), conj(eqs));
    for (auto it = zs.rbegin(); it != zs.rend(); ++it) only = h_forall(*it, hom(k), only);
    return h_and(h_app(l, std::vector<std::string>(w_, m)), only);
  }

  /// x : hom(ord t) encodes an element of t; null when every element does.
  HFormula enc(const std::string& x, const HTypePtr& t) {
    int m = t->order - 1;
    int n = static_cast<int>(t->comps.size());
    std::vector<std::string> zs;
    for (int i = 0; i < w_; ++i) zs.push_back(fresh());
    std::vector<HFormula> parts;
    for (int j = n; j < w_; ++j) parts.push_back(eq(zs[j], zs[n - 1], m));
    for (int i = 0; i < n; ++i) {
      const HTypePtr& c = t->comps[i];
      if (c->order == m) {
        if (!c->individual)
          if (HFormula g = enc(zs[i], c)) parts.push_back(g);
        continue;
      }
      std::string base = fresh();
      HFormula g = c->individual ? nullptr : enc(base, c);
      HFormula inner = g ? g : h_or(h_prop("_", base), h_neg(h_prop("_", base)));
      parts.push_back(unlift(zs[i], m, base, c, inner));
    }
    if (parts.empty()) return nullptr;
    HFormula f = h_implies(h_app(x, zs), conj(parts));
    for (auto it = zs.rbegin(); it != zs.rend(); ++it) f = h_forall(*it, hom(m), f);
    return f;
  }

  int w_;
  TypeEnv types_;
  int counter_ = 0;
};

}  // namespace

bool is_homogeneous(const HFormula& f, int w, const TypeEnv& free) {
  for (const auto& [x, t] : free)
    if (!is_homogeneous_type(t, w)) return false;
  return types_homogeneous(f, w);
}

Homogenized homogenize(const HFormula& f, const TypeEnv& free) {
  HolfpInfo info = typecheck_holfp(f, free);
  int w = std::max(info.width, 1);
  if (is_homogeneous(f, w, info.free_types)) return {f, w};
  w = std::max(w, 2);
  for (const auto& [x, t] : info.free_types)
    if (!is_homogeneous_type(t, w))
      throw ValidationError("free relation variable " + x + " of type " + to_string(t) + " is not homogeneous for w=" +
                            std::to_string(w));
  HFormula g = Homogenizer(w, info.free_types).run(f);
  typecheck_holfp(g, free);
  return {g, w};
}

}  // namespace phfl::holfp
