#include "phfl/typeck.hpp"

#include <algorithm>
#include <map>

#include "phfl/error.hpp"
#include "phfl/syntax.hpp"

namespace phfl {

Context::Context(std::initializer_list<Hypothesis> hs) {
  for (const auto& h : hs) add(h);
}

void Context::add(Hypothesis h) {
  auto it = std::find_if(hyps_.begin(), hyps_.end(), [&](const Hypothesis& o) { return o.name == h.name; });
  if (it != hyps_.end()) hyps_.erase(it);
  hyps_.push_back(std::move(h));
}

const Hypothesis* Context::find(Sym name) const {
  for (const auto& h : hyps_)
    if (h.name == name) return &h;
  return nullptr;
}

bool operator==(const Context& a, const Context& b) {
  if (a.hyps_.size() != b.hyps_.size()) return false;
  for (std::size_t i = 0; i < a.hyps_.size(); ++i) {
    const auto &x = a.hyps_[i], &y = b.hyps_[i];
    if (x.name != y.name || x.variance != y.variance || x.type != y.type || x.fixpoint != y.fixpoint) return false;
  }
  return true;
}

Context dual_context(const Context& ctx) {
  Context out;
  for (auto h : ctx.hypotheses()) {
    h.variance = dual(h.variance);
    out.add(h);
  }
  return out;
}

namespace {

// Occurrence polarities of free variables: bit 0 positive, bit 1
// negative. A 0-variance argument contributes both. Whether a judgement
// holds only depends on these, so each subterm is visited once.
constexpr unsigned kPos = 1, kNeg = 2;

unsigned flip(unsigned m) { return ((m & kPos) << 1) | ((m & kNeg) >> 1); }

struct Result {
  Type type;
  std::map<Sym, unsigned> occ;
};

bool usable(Variance v, bool fixpoint) { return fixpoint ? v == Variance::Plus : v != Variance::Minus; }

bool allowed(Variance v, bool fixpoint, unsigned m) {
  return (!(m & kPos) || usable(v, fixpoint)) && (!(m & kNeg) || usable(dual(v), fixpoint));
}

std::string show(const Formula& f) {
  std::string s = print_formula(f);
  if (s.size() > 200) s = s.substr(0, 197) + "...";
  return s;
}

void merge(std::map<Sym, unsigned>& into, const std::map<Sym, unsigned>& from, bool flipped = false) {
  for (auto [x, m] : from) into[x] |= flipped ? flip(m) : m;
}

class Checker {
 public:
  explicit Checker(const Context& ctx) {
    for (const auto& h : ctx.hypotheses()) scope_.push_back(h);
  }

  int max_order = 0;

  Result infer(const Formula& f) {
    Result r = infer_raw(f);
    max_order = std::max(max_order, order_of_type(r.type));
    return r;
  }

  /// Throws if some free variable occurs where its hypothesis forbids it.
  void check_free(const Formula& f, const Result& r) {
    for (auto [x, m] : r.occ) {
      const Hypothesis* h = lookup(x);
      if (!allowed(h->variance, h->fixpoint, m)) blame(f, *h, m);
    }
  }

 private:
  // Finds an occurrence of h.name at a polarity h forbids.
  [[noreturn]] void blame(const Formula& top, const Hypothesis& h, unsigned bad_mask) {
    unsigned bad = 0;
    if ((bad_mask & kPos) && !usable(h.variance, h.fixpoint)) bad |= kPos;
    if ((bad_mask & kNeg) && !usable(dual(h.variance), h.fixpoint)) bad |= kNeg;
    Formula at = top;
    unsigned pol = kPos;
    find(top, h.name, kPos, bad, at, pol);
    Variance v = pol == kNeg ? dual(h.variance) : h.variance;
    std::string how = pol == (kPos | kNeg) ? std::string("both polarities (0-variance argument)")
                                           : std::string("variance ") + variance_char(v);
    throw TypeError(h.fixpoint ? "fixvar" : "var", show(at),
                    std::string("variance violation: ") + (h.fixpoint ? "fixpoint" : "lambda") + " variable " +
                        name_of(h.name) + " occurs with " + how);
  }

  bool find(const Formula& f, Sym x, unsigned pol, unsigned bad, Formula& at, unsigned& at_pol) {
    if (!f->has_free(x)) return false;
    switch (f->kind) {
      case Kind::LamVar:
      case Kind::FixVar:
        if (pol & bad) {
          at = f;
          at_pol = pol;
          return true;
        }
        return false;
      case Kind::Neg:
        return find(f->a, x, flip(pol), bad, at, at_pol);
      case Kind::Or:
        return find(f->a, x, pol, bad, at, at_pol) || find(f->b, x, pol, bad, at, at_pol);
      case Kind::App: {
        if (find(f->a, x, pol, bad, at, at_pol)) return true;
        Type ft = infer_type_only(f->a);
        unsigned ap = ft->variance == Variance::Plus    ? pol
                      : ft->variance == Variance::Minus ? flip(pol)
                                                        : (kPos | kNeg);
        return find(f->b, x, ap, bad, at, at_pol);
      }
      case Kind::Lambda:
      case Kind::Mu:
      case Kind::Nu: {
        push(f);
        bool r = find(f->a, x, pol, bad, at, at_pol);
        scope_.pop_back();
        return r;
      }
      default:
        return find(f->a, x, pol, bad, at, at_pol);
    }
  }

  Type infer_type_only(const Formula& f) {
    int saved = max_order;
    Type t = infer(f).type;
    max_order = saved;
    return t;
  }

  const Hypothesis* lookup(Sym s) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == s) return &*it;
    return nullptr;
  }

  void push(const Formula& f) {
    bool fix = f->kind != Kind::Lambda;
    scope_.push_back({f->name, fix ? Variance::Plus : f->variance, f->type, fix});
  }

  void expect_ground(const Result& r, const Formula& sub, const char* rule) {
    if (!r.type->ground())
      throw TypeError(rule, show(sub), "type mismatch: expected Prop, got " + to_string(r.type));
  }

  // Checks and discharges the variable bound at f.
  void bind(const Formula& f, Result& body) {
    auto it = body.occ.find(f->name);
    if (it != body.occ.end()) {
      const Hypothesis& h = scope_.back();
      if (!allowed(h.variance, h.fixpoint, it->second)) blame(f->a, h, it->second);
      body.occ.erase(it);
    }
    scope_.pop_back();
  }

  Result infer_raw(const Formula& f) {
    switch (f->kind) {
      case Kind::Prop:
      case Kind::Lt:
        return {ground_type(), {}};
      case Kind::Or: {
        Result a = infer(f->a);
        expect_ground(a, f->a, "or");
        Result b = infer(f->b);
        expect_ground(b, f->b, "or");
        merge(a.occ, b.occ);
        return a;
      }
      case Kind::Neg: {
        Result a = infer(f->a);
        expect_ground(a, f->a, "neg");
        Result r{ground_type(), {}};
        merge(r.occ, a.occ, true);
        return r;
      }
      case Kind::Diamond:
      case Kind::Subst: {
        Result a = infer(f->a);
        expect_ground(a, f->a, f->kind == Kind::Diamond ? "diamond" : "subst");
        return a;
      }
      case Kind::LamVar:
      case Kind::FixVar: {
        const Hypothesis* h = lookup(f->name);
        if (!h) throw TypeError("var", show(f), "unbound variable " + name_of(f->name));
        if (h->fixpoint != (f->kind == Kind::FixVar))
          throw TypeError("var", show(f), "variable " + name_of(f->name) + " used with the wrong kind");
        return {h->type, {{f->name, kPos}}};
      }
      case Kind::Lambda: {
        push(f);
        Result body = infer(f->a);
        bind(f, body);
        return {arrow(f->type, f->variance, body.type), std::move(body.occ)};
      }
      case Kind::Mu:
      case Kind::Nu: {
        push(f);
        Result body = infer(f->a);
        if (body.type != f->type) {
          scope_.pop_back();
          throw TypeError(f->kind == Kind::Mu ? "mu" : "nu", show(f),
                          "type mismatch: body has type " + to_string(body.type) + ", binder declares " +
                              to_string(f->type));
        }
        bind(f, body);
        return body;
      }
      case Kind::App: {
        Result fn = infer(f->a);
        if (fn.type->ground())
          throw TypeError("app", show(f), "ill-typed application: " + show(f->a) + " has type Prop, not a function type");
        Result arg = infer(f->b);
        if (arg.type != fn.type->arg)
          throw TypeError("app", show(f),
                          "ill-typed application: argument has type " + to_string(arg.type) + ", expected " +
                              to_string(fn.type->arg));
        Result r{fn.type->result, std::move(fn.occ)};
        switch (fn.type->variance) {
          case Variance::Plus:
            merge(r.occ, arg.occ);
            break;
          case Variance::Minus:
            merge(r.occ, arg.occ, true);
            break;
          case Variance::Zero:
            for (auto [x, m] : arg.occ) r.occ[x] |= kPos | kNeg;
            break;
        }
        return r;
      }
    }
    throw Error("unknown formula kind");
  }

  std::vector<Hypothesis> scope_;
};

}  // namespace

Type type_of(const Context& ctx, const Formula& phi) {
  Checker c(ctx);
  Result r = c.infer(phi);
  c.check_free(phi, r);
  return r.type;
}

int order_of_formula(const Formula& phi, const Context& ctx) {
  Checker c(ctx);
  Result r = c.infer(phi);
  c.check_free(phi, r);
  return c.max_order;
}

}  // namespace phfl
