#include "phfl/formula.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <unordered_map>

#include "phfl/error.hpp"

namespace phfl {

namespace {

struct SymTable {
  std::mutex mu;
  std::unordered_map<std::string, Sym> ids;
  std::vector<std::unique_ptr<std::string>> names;
  std::unordered_map<std::string, int> fresh_counter;
};

SymTable& syms() {
  static SymTable t;
  return t;
}

std::atomic<std::uint64_t> next_node_id{1};

std::vector<Sym> merge(const std::vector<Sym>& a, const std::vector<Sym>& b) {
  std::vector<Sym> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Sym> without(const std::vector<Sym>& a, Sym x) {
  std::vector<Sym> out;
  out.reserve(a.size());
  for (Sym s : a)
    if (s != x) out.push_back(s);
  return out;
}

std::shared_ptr<Node> make(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->id = next_node_id.fetch_add(1, std::memory_order_relaxed);
  return n;
}

Formula unary(Kind k, Formula a) {
  if (!a) throw Error("missing subformula");
  auto n = make(k);
  n->free = a->free;
  n->size = a->size + 1;
  n->a = std::move(a);
  return n;
}

Formula binary(Kind k, Formula a, Formula b) {
  if (!a || !b) throw Error("missing subformula");
  auto n = make(k);
  n->free = merge(a->free, b->free);
  n->size = a->size + b->size + 1;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Formula binder(Kind k, Sym x, Variance v, Type t, Formula body) {
  if (!body) throw Error("missing binder body");
  if (!t) throw Error("binder without a type");
  auto n = make(k);
  n->name = x;
  n->variance = v;
  n->type = std::move(t);
  n->free = without(body->free, x);
  n->size = body->size + 1;
  n->a = std::move(body);
  return n;
}

}  // namespace

Sym intern(std::string_view name) {
  auto& t = syms();
  std::lock_guard lock(t.mu);
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  Sym id = static_cast<Sym>(t.names.size());
  t.names.push_back(std::make_unique<std::string>(name));
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string& name_of(Sym s) {
  auto& t = syms();
  std::lock_guard lock(t.mu);
  return *t.names.at(static_cast<std::size_t>(s));
}

Sym fresh_sym(std::string_view prefix) {
  auto& t = syms();
  std::lock_guard lock(t.mu);
  int& counter = t.fresh_counter[std::string(prefix)];
  while (true) {
    std::string candidate = std::string(prefix) + std::to_string(counter++);
    if (t.ids.count(candidate)) continue;
    Sym id = static_cast<Sym>(t.names.size());
    t.names.push_back(std::make_unique<std::string>(candidate));
    t.ids.emplace(candidate, id);
    return id;
  }
}

bool IndexMap::is_identity() const {
  for (int i = 0; i < arity(); ++i)
    if (map[i] != i + 1) return false;
  return true;
}

IndexMap IndexMap::identity(int d) {
  IndexMap m;
  for (int i = 1; i <= d; ++i) m.map.push_back(i);
  return m;
}

IndexMap IndexMap::from_pairs(int d, const std::vector<std::pair<int, int>>& pairs) {
  IndexMap m = identity(d);
  std::vector<bool> seen(d + 1, false);
  for (auto [i, j] : pairs) {
    if (i < 1 || i > d || j < 1 || j > d)
      throw ValidationError("index out of range in substitution {" + std::to_string(i) + "->" + std::to_string(j) + "}");
    if (seen[i]) throw ValidationError("index " + std::to_string(i) + " mapped twice in substitution");
    seen[i] = true;
    m.map[i - 1] = j;
  }
  return m;
}

bool Node::has_free(Sym s) const { return std::binary_search(free.begin(), free.end(), s); }

Formula prop(Sym p, int i) {
  auto n = make(Kind::Prop);
  n->name = p;
  n->index = i;
  return n;
}
Formula prop(std::string_view p, int i) { return prop(intern(p), i); }
Formula lor(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula neg(Formula a) { return unary(Kind::Neg, std::move(a)); }
Formula diamond(Sym action, int i, Formula a) {
  auto n = unary(Kind::Diamond, std::move(a));
  auto m = std::const_pointer_cast<Node>(n);
  m->name = action;
  m->index = i;
  return n;
}
Formula diamond(std::string_view action, int i, Formula a) { return diamond(intern(action), i, std::move(a)); }
Formula subst(IndexMap sigma, Formula a) {
  auto n = unary(Kind::Subst, std::move(a));
  std::const_pointer_cast<Node>(n)->map = std::move(sigma);
  return n;
}
Formula lambda(Sym x, Variance v, Type t, Formula body) {
  return binder(Kind::Lambda, x, v, std::move(t), std::move(body));
}
Formula lamvar(Sym x) {
  auto n = make(Kind::LamVar);
  n->name = x;
  n->free = {x};
  return n;
}
Formula app(Formula f, Formula arg) { return binary(Kind::App, std::move(f), std::move(arg)); }
Formula mu(Sym x, Type t, Formula body) { return binder(Kind::Mu, x, Variance::Plus, std::move(t), std::move(body)); }
Formula nu(Sym x, Type t, Formula body) { return binder(Kind::Nu, x, Variance::Plus, std::move(t), std::move(body)); }
Formula fixvar(Sym x) {
  auto n = make(Kind::FixVar);
  n->name = x;
  n->free = {x};
  return n;
}
Formula lt_atom() { return make(Kind::Lt); }

Formula ff() {
  static const Sym x = intern("_ff");
  return mu(x, ground_type(), fixvar(x));
}
Formula tt() { return neg(ff()); }
Formula land(Formula a, Formula b) { return neg(lor(neg(std::move(a)), neg(std::move(b)))); }
Formula box(Sym action, int i, Formula a) { return neg(diamond(action, i, neg(std::move(a)))); }
Formula box(std::string_view action, int i, Formula a) { return box(intern(action), i, std::move(a)); }
Formula implies(Formula a, Formula b) { return lor(neg(std::move(a)), std::move(b)); }
Formula iff(Formula a, Formula b) { return land(implies(a, b), implies(b, a)); }

Formula apps(Formula f, const std::vector<Formula>& args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}
Formula apps(Formula f, std::initializer_list<Formula> args) { return apps(std::move(f), std::vector<Formula>(args)); }

Formula big_or(const std::vector<Formula>& fs) {
  if (fs.empty()) return ff();
  Formula r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r = lor(r, fs[i]);
  return r;
}

Formula big_and(const std::vector<Formula>& fs) {
  if (fs.empty()) return tt();
  Formula r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r = land(r, fs[i]);
  return r;
}

bool is_ff(const Formula& f) {
  return f->kind == Kind::Mu && f->type->ground() && f->a->kind == Kind::FixVar && f->a->name == f->name;
}
bool is_tt(const Formula& f) { return f->kind == Kind::Neg && is_ff(f->a); }

bool match_and(const Formula& f, Formula& l, Formula& r) {
  if (f->kind != Kind::Neg || f->a->kind != Kind::Or) return false;
  const auto& o = f->a;
  if (o->a->kind != Kind::Neg || o->b->kind != Kind::Neg) return false;
  l = o->a->a;
  r = o->b->a;
  return true;
}

bool match_box(const Formula& f, Sym& action, int& i, Formula& body) {
  if (f->kind != Kind::Neg || f->a->kind != Kind::Diamond || f->a->a->kind != Kind::Neg) return false;
  action = f->a->name;
  i = f->a->index;
  body = f->a->a->a;
  return true;
}

bool match_implies(const Formula& f, Formula& l, Formula& r) {
  if (f->kind != Kind::Or || f->a->kind != Kind::Neg) return false;
  l = f->a->a;
  r = f->b;
  return true;
}

bool match_iff(const Formula& f, Formula& l, Formula& r) {
  Formula x, y, l2, r2;
  if (!match_and(f, x, y)) return false;
  if (!match_implies(x, l, r) || !match_implies(y, l2, r2)) return false;
  return alpha_equal(l, r2) && alpha_equal(r, l2);
}

int max_index(const Formula& f) {
  switch (f->kind) {
    case Kind::Prop:
      return f->index;
    case Kind::Lt:
      return 2;
    case Kind::Diamond:
      return std::max(f->index, max_index(f->a));
    case Kind::Subst: {
      int m = f->map.arity();
      for (int v : f->map.map) m = std::max(m, v);
      return std::max(m, max_index(f->a));
    }
    case Kind::LamVar:
    case Kind::FixVar:
      return 0;
    case Kind::Or:
    case Kind::App:
      return std::max(max_index(f->a), max_index(f->b));
    default:
      return max_index(f->a);
  }
}

void validate_indices(const Formula& f, int d) {
  auto bad = [&](int i) {
    throw ValidationError("index out of range: " + std::to_string(i) + " exceeds arity " + std::to_string(d));
  };
  switch (f->kind) {
    case Kind::Prop:
      if (f->index < 1 || f->index > d) bad(f->index);
      return;
    case Kind::Lt:
      if (d < 2) throw ValidationError("index out of range: lt needs arity at least 2");
      return;
    case Kind::Diamond:
      if (f->index < 1 || f->index > d) bad(f->index);
      validate_indices(f->a, d);
      return;
    case Kind::Subst:
      if (f->map.arity() != d)
        throw ValidationError("substitution arity " + std::to_string(f->map.arity()) + " does not match " +
                              std::to_string(d));
      for (int v : f->map.map)
        if (v < 1 || v > d) bad(v);
      validate_indices(f->a, d);
      return;
    case Kind::LamVar:
    case Kind::FixVar:
      return;
    case Kind::Or:
    case Kind::App:
      validate_indices(f->a, d);
      validate_indices(f->b, d);
      return;
    default:
      validate_indices(f->a, d);
  }
}

namespace {

bool alpha_rec(const Formula& a, const Formula& b, std::vector<std::pair<Sym, Sym>>& bound) {
  if (a.get() == b.get() && a->free.empty()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Prop:
      return a->name == b->name && a->index == b->index;
    case Kind::Lt:
      return true;
    case Kind::LamVar:
    case Kind::FixVar: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        bool ma = it->first == a->name, mb = it->second == b->name;
        if (ma || mb) return ma && mb;
      }
      return a->name == b->name;
    }
    case Kind::Or:
    case Kind::App:
      return alpha_rec(a->a, b->a, bound) && alpha_rec(a->b, b->b, bound);
    case Kind::Neg:
      return alpha_rec(a->a, b->a, bound);
    case Kind::Diamond:
      return a->name == b->name && a->index == b->index && alpha_rec(a->a, b->a, bound);
    case Kind::Subst:
      return a->map == b->map && alpha_rec(a->a, b->a, bound);
    case Kind::Lambda:
    case Kind::Mu:
    case Kind::Nu: {
      if (a->type != b->type || a->variance != b->variance) return false;
      bound.emplace_back(a->name, b->name);
      bool r = alpha_rec(a->a, b->a, bound);
      bound.pop_back();
      return r;
    }
  }
  return false;
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
  std::vector<std::pair<Sym, Sym>> bound;
  return alpha_rec(a, b, bound);
}

bool uses_lt(const Formula& f) {
  if (f->kind == Kind::Lt) return true;
  if (f->a && uses_lt(f->a)) return true;
  return f->b && uses_lt(f->b);
}

}  // namespace phfl
