#include "phfl/holfp.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "phfl/error.hpp"

namespace phfl::holfp {

// ---------------------------------------------------------------- types

HTypePtr individual() {
  static const HTypePtr t = std::make_shared<HType>();
  return t;
}

HTypePtr relation(std::vector<HTypePtr> comps) {
  if (comps.empty()) throw ValidationError("relation type needs at least one component");
  auto t = std::make_shared<HType>();
  t->individual = false;
  int m = 0;
  for (const auto& c : comps) m = std::max(m, c->order);
  t->order = m + 1;
  t->comps = std::move(comps);
  return t;
}

HTypePtr homogeneous_type(int w, int k) {
  if (w < 1 || k < 1) throw ValidationError("homogeneous type needs w >= 1 and k >= 1");
  HTypePtr t = individual();
  for (int i = 1; i < k; ++i) t = relation(std::vector<HTypePtr>(w, t));
  return t;
}

bool same_type(const HTypePtr& a, const HTypePtr& b) {
  if (a == b) return true;
  if (a->individual != b->individual || a->comps.size() != b->comps.size()) return false;
  for (std::size_t i = 0; i < a->comps.size(); ++i)
    if (!same_type(a->comps[i], b->comps[i])) return false;
  return true;
}

bool is_homogeneous_type(const HTypePtr& t, int w) { return same_type(t, homogeneous_type(w, t->order)); }

int max_width(const HTypePtr& t) {
  int m = static_cast<int>(t->comps.size());
  for (const auto& c : t->comps) m = std::max(m, max_width(c));
  return m;
}

std::string to_string(const HTypePtr& t) {
  if (t->individual) return "ind";
  std::string s = "(";
  for (std::size_t i = 0; i < t->comps.size(); ++i) s += (i ? "," : "") + to_string(t->comps[i]);
  return s + ")";
}

// -------------------------------------------------------- constructors

namespace {

std::shared_ptr<HNode> node(HKind k) {
  auto n = std::make_shared<HNode>();
  n->kind = k;
  return n;
}

/// body[~X/X]: negates every application of X.
HFormula negate_apps(const HFormula& f, const std::string& x) {
  switch (f->kind) {
    case HKind::RelApp:
      return f->name == x ? h_neg(f) : f;
    case HKind::Prop:
    case HKind::Edge:
      return f;
    case HKind::Neg:
      return h_neg(negate_apps(f->a, x));
    case HKind::Or:
      return h_or(negate_apps(f->a, x), negate_apps(f->b, x));
    case HKind::Exists:
      return h_exists(f->name, f->type, negate_apps(f->a, x));
    case HKind::Lfp:
      return h_lfp(f->name, f->params, f->type, negate_apps(f->a, x), f->args);
  }
  return f;
}

}  // namespace

HFormula h_prop(std::string p, std::string x) {
  auto n = node(HKind::Prop);
  n->name = std::move(p);
  n->args = {std::move(x)};
  return n;
}

HFormula h_edge(std::string a, std::string x, std::string y) {
  auto n = node(HKind::Edge);
  n->name = std::move(a);
  n->args = {std::move(x), std::move(y)};
  return n;
}

HFormula h_app(std::string x, std::vector<std::string> ys) {
  auto n = node(HKind::RelApp);
  n->name = std::move(x);
  n->args = std::move(ys);
  return n;
}

HFormula h_neg(HFormula a) {
  auto n = node(HKind::Neg);
  n->a = std::move(a);
  return n;
}

HFormula h_or(HFormula a, HFormula b) {
  auto n = node(HKind::Or);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

HFormula h_and(HFormula a, HFormula b) { return h_neg(h_or(h_neg(std::move(a)), h_neg(std::move(b)))); }
HFormula h_implies(HFormula a, HFormula b) { return h_or(h_neg(std::move(a)), std::move(b)); }

HFormula h_exists(std::string x, HTypePtr t, HFormula body) {
  auto n = node(HKind::Exists);
  n->name = std::move(x);
  n->type = std::move(t);
  n->a = std::move(body);
  return n;
}

HFormula h_forall(std::string x, HTypePtr t, HFormula body) {
  return h_neg(h_exists(std::move(x), std::move(t), h_neg(std::move(body))));
}

HFormula h_lfp(std::string x, std::vector<std::string> ys, HTypePtr t, HFormula body, std::vector<std::string> zs) {
  auto n = node(HKind::Lfp);
  n->name = std::move(x);
  n->params = std::move(ys);
  n->type = std::move(t);
  n->a = std::move(body);
  n->args = std::move(zs);
  return n;
}

HFormula h_gfp(std::string x, std::vector<std::string> ys, HTypePtr t, HFormula body, std::vector<std::string> zs) {
  HFormula inner = h_neg(negate_apps(body, x));
  return h_neg(h_lfp(x, std::move(ys), std::move(t), inner, std::move(zs)));
}

// -------------------------------------------------------------- printer

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
  return s;
}

bool match_and(const HFormula& f, HFormula& l, HFormula& r) {
  if (f->kind != HKind::Neg || f->a->kind != HKind::Or) return false;
  const auto& o = f->a;
  if (o->a->kind != HKind::Neg || o->b->kind != HKind::Neg) return false;
  l = o->a->a;
  r = o->b->a;
  return true;
}

std::string print(const HFormula& f) {
  HFormula l, r;
  switch (f->kind) {
    case HKind::Prop:
    case HKind::Edge:
    case HKind::RelApp:
      return f->name + "(" + join(f->args) + ")";
    case HKind::Or:
      return "(" + print(f->a) + " \\/ " + print(f->b) + ")";
    case HKind::Neg:
      if (match_and(f, l, r)) return "(" + print(l) + " /\\ " + print(r) + ")";
      if (f->a->kind == HKind::Exists && f->a->a->kind == HKind::Neg)
        return "(forall (" + f->a->name + ":" + to_string(f->a->type) + "). " + print(f->a->a->a) + ")";
      return "~" + print(f->a);
    case HKind::Exists:
      return "(exists (" + f->name + ":" + to_string(f->type) + "). " + print(f->a) + ")";
    case HKind::Lfp: {
      std::vector<std::string> head{f->name};
      head.insert(head.end(), f->params.begin(), f->params.end());
      return "(lfp (" + join(head) + "). " + print(f->a) + ")(" + join(f->args) + ")";
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const HFormula& f) { return print(f); }

// ---------------------------------------------------------------- parser

namespace {

struct Tok {
  enum K { Name, Sym, End } k;
  std::string s;
  int line, col;
};

std::vector<Tok> lex(std::string_view t) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++i) {
      if (t[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < t.size()) {
    char c = t[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < t.size() && t[i] != '\n') adv(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_' || t[j] == '\''))
        ++j;
      out.push_back({Tok::Name, std::string(t.substr(i, j - i)), line, col});
      adv(j - i);
      continue;
    }
    if (t.substr(i, 2) == "\\/" || t.substr(i, 2) == "/\\" || t.substr(i, 2) == "->") {
      out.push_back({Tok::Sym, std::string(t.substr(i, 2)), line, col});
      adv(2);
      continue;
    }
    if (std::string_view("(),.:~").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), line, col});
      adv(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  HFormula parse() {
    HFormula f = formula();
    if (peek().k != Tok::End) fail("trailing input '" + peek().s + "'");
    return f;
  }

 private:
  const Tok& peek(int o = 0) const { return toks_[std::min(pos_ + o, toks_.size() - 1)]; }
  bool is(const char* s, int o = 0) const { return peek(o).k != Tok::End && peek(o).s == s; }
  [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, peek().line, peek().col); }
  void expect(const char* s) {
    if (!is(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  std::string name() {
    if (peek().k != Tok::Name) fail("expected a name");
    return toks_[pos_++].s;
  }
  bool keyword(const char* s) const { return peek().k == Tok::Name && peek().s == s; }

  HFormula formula() {
    HFormula f = disj();
    if (is("->")) {
      ++pos_;
      return h_implies(f, formula());
    }
    return f;
  }

  HFormula disj() {
    HFormula f = conj();
    while (is("\\/")) {
      ++pos_;
      f = h_or(f, conj());
    }
    return f;
  }

  HFormula conj() {
    HFormula f = unary();
    while (is("/\\")) {
      ++pos_;
      f = h_and(f, unary());
    }
    return f;
  }

  HFormula unary() {
    if (is("~")) {
      ++pos_;
      return h_neg(unary());
    }
    if (keyword("exists") || keyword("forall")) {
      bool ex = peek().s == "exists";
      ++pos_;
      expect("(");
      std::string x = name();
      expect(":");
      HTypePtr t = type();
      expect(")");
      expect(".");
      HFormula body = formula();
      return ex ? h_exists(x, t, body) : h_forall(x, t, body);
    }
    if (is("(") && peek(1).k == Tok::Name && (peek(1).s == "lfp" || peek(1).s == "gfp") && is("(", 2)) {
      ++pos_;
      bool least = name() == "lfp";
      expect("(");
      std::string x = name();
      std::vector<std::string> ys;
      while (is(",")) {
        ++pos_;
        ys.push_back(name());
      }
      expect(")");
      expect(".");
      HFormula body = formula();
      expect(")");
      std::vector<std::string> zs = arglist();
      if (zs.size() != ys.size()) fail("fixpoint of arity " + std::to_string(ys.size()) + " applied to " +
                                       std::to_string(zs.size()) + " arguments");
      // the type is filled in during elaboration
      return least ? h_lfp(x, ys, nullptr, body, zs) : h_gfp(x, ys, nullptr, body, zs);
    }
    if (is("(")) {
      ++pos_;
      HFormula f = formula();
      expect(")");
      return f;
    }
    std::string head = name();
    return h_app(head, arglist());
  }

  std::vector<std::string> arglist() {
    expect("(");
    std::vector<std::string> xs{name()};
    while (is(",")) {
      ++pos_;
      xs.push_back(name());
    }
    expect(")");
    return xs;
  }

  HTypePtr type() {
    if (keyword("ind")) {
      ++pos_;
      return individual();
    }
    expect("(");
    std::vector<HTypePtr> cs{type()};
    while (is(",")) {
      ++pos_;
      cs.push_back(type());
    }
    expect(")");
    return relation(cs);
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

/// Resolves applications and fills in fixpoint types from the scope.
class Elaborator {
 public:
  explicit Elaborator(const TypeEnv& free) : free_(free) {}

  HFormula run(const HFormula& f) {
    switch (f->kind) {
      case HKind::Prop:
      case HKind::Edge:
        return f;
      case HKind::RelApp: {
        const HTypePtr* t = find(f->name);
        if (t && !(*t)->individual) return f;
        if (t) throw TypeError("application", print(f), "individual variable " + f->name + " applied");
        if (f->args.size() == 1) return h_prop(f->name, f->args[0]);
        if (f->args.size() == 2) return h_edge(f->name, f->args[0], f->args[1]);
        throw TypeError("unbound variable", print(f), "unbound variable " + f->name);
      }
      case HKind::Neg:
        return h_neg(run(f->a));
      case HKind::Or:
        return h_or(run(f->a), run(f->b));
      case HKind::Exists: {
        scope_.push_back({f->name, f->type});
        HFormula body = run(f->a);
        scope_.pop_back();
        return h_exists(f->name, f->type, body);
      }
      case HKind::Lfp: {
        HTypePtr t = f->type;
        if (!t) {
          std::vector<HTypePtr> cs;
          for (const auto& z : f->args) {
            const HTypePtr* zt = find(z);
            cs.push_back(zt ? *zt : individual());
          }
          t = relation(cs);
        }
        scope_.push_back({f->name, t});
        for (std::size_t i = 0; i < f->params.size() && i < t->comps.size(); ++i)
          scope_.push_back({f->params[i], t->comps[i]});
        HFormula body = run(f->a);
        scope_.resize(scope_.size() - 1 - std::min(f->params.size(), t->comps.size()));
        return h_lfp(f->name, f->params, t, body, f->args);
      }
    }
    return f;
  }

 private:
  const HTypePtr* find(const std::string& x) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == x) return &it->second;
    auto it = free_.find(x);
    return it == free_.end() ? nullptr : &it->second;
  }

  const TypeEnv& free_;
  std::vector<std::pair<std::string, HTypePtr>> scope_;
};

// ------------------------------------------------------------ typecheck

class Checker {
 public:
  explicit Checker(const TypeEnv& free) : free_(free) {}

  HolfpInfo run(const HFormula& f) {
    collect_binders(f);
    walk(f, 0);
    info_.free_types = free_used_;
    for (const auto& [x, t] : free_used_) {
      info_.order = std::max(info_.order, t->order);
      info_.width = std::max(info_.width, max_width(t));
    }
    return info_;
  }

 private:
  void collect_binders(const HFormula& f) {
    auto bind = [&](const std::string& x) {
      if (!binders_.insert(x).second)
        throw TypeError("single binding", print(f), "variable " + x + " is bound more than once");
      if (free_.count(x)) throw TypeError("single binding", print(f), "variable " + x + " is declared free and bound");
    };
    switch (f->kind) {
      case HKind::Exists:
        bind(f->name);
        break;
      case HKind::Lfp:
        bind(f->name);
        for (const auto& y : f->params) bind(y);
        break;
      default:
        break;
    }
    if (f->a) collect_binders(f->a);
    if (f->b) collect_binders(f->b);
  }

  void note_type(const HTypePtr& t) {
    info_.order = std::max(info_.order, t->order);
    info_.width = std::max(info_.width, max_width(t));
  }

  /// Type of x at an occurrence; unbound names are free individuals when
  /// `want` is ind.
  HTypePtr lookup(const std::string& x, const HFormula& at, const HTypePtr& want) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == x) return it->type;
    if (binders_.count(x))
      throw TypeError("single binding", print(at), "variable " + x + " is used outside its binder");
    auto it = free_.find(x);
    HTypePtr t;
    if (it != free_.end()) {
      t = it->second;
    } else if (want && want->individual) {
      t = individual();
    } else {
      throw TypeError("unbound variable", print(at), "unbound variable " + x);
    }
    if (free_used_.emplace(x, t).second && t->individual) info_.free_individuals.push_back(x);
    return t;
  }

  void expect_type(const std::string& x, const HFormula& at, const HTypePtr& want) {
    HTypePtr t = lookup(x, at, want);
    if (!same_type(t, want))
      throw TypeError("type mismatch", print(at),
                      "variable " + x + " has type " + to_string(t) + ", expected " + to_string(want));
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == x && it->fixpoint)
        throw TypeError("positivity", print(at), "fixpoint variable " + x + " used as an argument");
  }

  void walk(const HFormula& f, int negs) {
    switch (f->kind) {
      case HKind::Prop:
        expect_type(f->args.at(0), f, individual());
        return;
      case HKind::Edge:
        expect_type(f->args.at(0), f, individual());
        expect_type(f->args.at(1), f, individual());
        return;
      case HKind::RelApp: {
        HTypePtr t = lookup(f->name, f, nullptr);
        if (t->individual) throw TypeError("type mismatch", print(f), "individual variable " + f->name + " applied");
        if (t->comps.size() != f->args.size())
          throw TypeError("type mismatch", print(f),
                          f->name + " has " + std::to_string(t->comps.size()) + " components, applied to " +
                              std::to_string(f->args.size()));
        for (std::size_t i = 0; i < f->args.size(); ++i) expect_type(f->args[i], f, t->comps[i]);
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
          if (it->name != f->name) continue;
          if (it->fixpoint && (negs - it->negs) % 2 != 0)
            throw TypeError("positivity", print(f), "fixpoint variable " + f->name + " occurs negatively");
          break;
        }
        return;
      }
      case HKind::Neg:
        walk(f->a, negs + 1);
        return;
      case HKind::Or:
        walk(f->a, negs);
        walk(f->b, negs);
        return;
      case HKind::Exists:
        note_type(f->type);
        scope_.push_back({f->name, f->type, false, 0});
        walk(f->a, negs);
        scope_.pop_back();
        return;
      case HKind::Lfp: {
        if (!f->type || f->type->individual)
          throw TypeError("type mismatch", print(f), "fixpoint variable needs a relation type");
        const auto& cs = f->type->comps;
        if (cs.size() != f->params.size() || cs.size() != f->args.size())
          throw TypeError("type mismatch", print(f), "fixpoint arity does not match its parameters or arguments");
        note_type(f->type);
        for (std::size_t i = 0; i < cs.size(); ++i) expect_type(f->args[i], f, cs[i]);
        scope_.push_back({f->name, f->type, true, negs});
        for (std::size_t i = 0; i < cs.size(); ++i) scope_.push_back({f->params[i], cs[i], false, 0});
        walk(f->a, negs);
        scope_.resize(scope_.size() - 1 - cs.size());
        return;
      }
    }
  }

  struct Entry {
    std::string name;
    HTypePtr type;
    bool fixpoint;
    int negs;
  };
  const TypeEnv& free_;
  std::set<std::string> binders_;
  std::vector<Entry> scope_;
  TypeEnv free_used_;
  HolfpInfo info_;
};

}  // namespace

HFormula parse_holfp(std::string_view text, const TypeEnv& free) {
  HFormula raw = Parser(text).parse();
  HFormula f = Elaborator(free).run(raw);
  typecheck_holfp(f, free);
  return f;
}

HolfpInfo typecheck_holfp(const HFormula& f, const TypeEnv& free) { return Checker(free).run(f); }

}  // namespace phfl::holfp
