#include "phfl/macros.hpp"

#include <algorithm>
#include <set>

#include "phfl/error.hpp"
#include "phfl/eval.hpp"

namespace phfl {

Formula phi_bisim(const std::vector<std::string>& actions, const std::vector<std::string>& props) {
  Sym x = fresh_sym("X");
  std::vector<Formula> parts;
  for (const auto& p : props) parts.push_back(iff(prop(p, 1), prop(p, 2)));
  for (const auto& a : actions) parts.push_back(box(a, 1, diamond(a, 2, fixvar(x))));
  parts.push_back(subst(sigma_swap(2, 1, 2), fixvar(x)));
  return nu(x, ground_type(), big_and(parts));
}

Formula phi_fte(const std::vector<std::string>& actions) {
  Sym f = fresh_sym("F"), x = fresh_sym("x"), y = fresh_sym("y");
  Type ft = arrows({{Variance::Zero, ground_type()}, {Variance::Zero, ground_type()}});
  std::vector<Formula> parts{iff(lamvar(x), lamvar(y))};
  for (const auto& a : actions)
    parts.push_back(apps(fixvar(f), {diamond(a, 1, lamvar(x)), diamond(a, 2, lamvar(y))}));
  Formula body = lambda(x, Variance::Zero, ground_type(), lambda(y, Variance::Zero, ground_type(), big_and(parts)));
  return apps(nu(f, ft, body), {tt(), tt()});
}

QuantifierConfig QuantifierConfig::make(int w, int r, std::vector<std::string> actions) {
  QuantifierConfig c{w, r, 2 * w + r + 2, std::move(actions)};
  c.validate();
  return c;
}

void QuantifierConfig::validate() const {
  if (w < 1 || r < 1 || d < 2 * w + r + 2)
    throw ValidationError("quantifier layout needs w >= 1, r >= 1 and d >= 2w+r+2 (w=" + std::to_string(w) +
                          ", r=" + std::to_string(r) + ", d=" + std::to_string(d) + ")");
}

Sym goodness_var() { return intern("e"); }

namespace {

void check_index(int d, int i) {
  if (i < 1 || i > d) throw ValidationError("index out of range: " + std::to_string(i) + " for arity " + std::to_string(d));
}

Formula e_var() { return lamvar(goodness_var()); }

std::vector<Formula> vars_of(const std::vector<Sym>& xs) {
  std::vector<Formula> out;
  for (Sym s : xs) out.push_back(lamvar(s));
  return out;
}

std::vector<Sym> fresh_syms(const char* prefix, int n) {
  std::vector<Sym> out;
  for (int i = 0; i < n; ++i) out.push_back(fresh_sym(prefix));
  return out;
}

Formula exists_prefix(const QuantifierConfig& c, Formula phi) {
  for (int i = c.w; i >= 1; --i) phi = exists_index(c, i, phi);
  return phi;
}

Formula forall_prefix(const QuantifierConfig& c, Formula phi) {
  for (int i = c.w; i >= 1; --i) phi = forall_index(c, i, phi);
  return phi;
}

}  // namespace

IndexMap sigma_assign(int d, int i, int j) {
  check_index(d, i);
  check_index(d, j);
  return IndexMap::from_pairs(d, {{i, j}});
}

IndexMap sigma_swap(int d, int i, int j) {
  check_index(d, i);
  check_index(d, j);
  return IndexMap::from_pairs(d, {{i, j}, {j, i}});
}

IndexMap sigma_cmp(const QuantifierConfig& c, int i) {
  check_index(c.d, i + c.w);
  return IndexMap::from_pairs(c.d, {{c.d - 1, i}, {c.d, i + c.w}});
}

IndexMap sigma_cmp_reversed(const QuantifierConfig& c, int i) {
  check_index(c.d, i + c.w);
  return IndexMap::from_pairs(c.d, {{c.d - 1, i + c.w}, {c.d, i}});
}

IndexMap sigma_shift(int d, int w) {
  check_index(d, 2 * w);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= w; ++i) pairs.push_back({i, w + i});
  return IndexMap::from_pairs(d, pairs);
}

IndexMap sigma_copy(int d, int w) {
  check_index(d, 2 * w);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= w; ++i) pairs.push_back({w + i, i});
  return IndexMap::from_pairs(d, pairs);
}

Formula exists_index(const QuantifierConfig& c, int i, const Formula& phi) {
  if (i < 1 || i > c.last_free())
    throw ValidationError("quantified index " + std::to_string(i) + " lies in the reserved positions");
  Sym x = fresh_sym("X");
  std::vector<Formula> steps{phi};
  for (const auto& a : c.actions) steps.push_back(diamond(a, i, fixvar(x)));
  Formula reach = mu(x, ground_type(), big_or(steps));
  std::vector<Formula> alts;
  for (int j = c.first_anchor(); j <= c.d - 2; ++j) alts.push_back(subst(sigma_assign(c.d, i, j), reach));
  return big_or(alts);
}

Formula forall_index(const QuantifierConfig& c, int i, const Formula& phi) {
  return neg(exists_index(c, i, neg(phi)));
}

Formula phi_lt_w(const QuantifierConfig& c, bool reversed) {
  auto less = [&](int i) { return subst(reversed ? sigma_cmp_reversed(c, i) : sigma_cmp(c, i), lt_atom()); };
  auto equal = [&](int j) {
    return land(neg(subst(sigma_cmp(c, j), lt_atom())), neg(subst(sigma_cmp_reversed(c, j), lt_atom())));
  };
  std::vector<Formula> alts;
  for (int i = 1; i <= c.w; ++i) {
    std::vector<Formula> conj;
    for (int j = 1; j < i; ++j) conj.push_back(equal(j));
    conj.push_back(less(i));
    alts.push_back(big_and(conj));
  }
  return big_or(alts);
}

Formula phi_lt_setpair(const QuantifierConfig& c, const Formula& x, const Formula& y) {
  Formula above = forall_prefix(c, implies(phi_lt_w(c, true), iff(x, y)));
  return exists_prefix(c, big_and({y, neg(x), subst(sigma_copy(c.d, c.w), above)}));
}

Formula next_set(const QuantifierConfig& c, const Formula& x) {
  IndexMap shift = sigma_copy(c.d, c.w);
  Formula all_below = subst(shift, forall_prefix(c, implies(phi_lt_w(c), x)));
  Formula gap_below = subst(shift, exists_prefix(c, land(phi_lt_w(c), neg(x))));
  return lor(big_and({e_var(), neg(x), all_below}), big_and({e_var(), x, gap_below}));
}

Formula exists_set(const QuantifierConfig& c, Sym x, const Formula& phi) {
  c.validate();
  Sym f = fresh_sym("F");
  Type ft = arrow(ground_type(), Variance::Zero, ground_type());
  Formula body = lambda(x, Variance::Zero, ground_type(), lor(phi, app(fixvar(f), next_set(c, lamvar(x)))));
  return app(mu(f, ft, body), ff());
}

Formula forall_set(const QuantifierConfig& c, Sym x, const Formula& phi) { return neg(exists_set(c, x, neg(phi))); }

Formula phi_lt_tuple(const QuantifierConfig& c, int k, const std::vector<Formula>& xs, const std::vector<Formula>& ys) {
  if (static_cast<int>(xs.size()) != c.w || static_cast<int>(ys.size()) != c.w)
    throw ValidationError("tuple comparison needs w arguments on each side");
  std::vector<Formula> alts;
  for (int i = 0; i < c.w; ++i) {
    std::vector<Formula> conj;
    for (int j = 0; j < i; ++j)
      conj.push_back(land(neg(phi_lt_fn(c, k, xs[j], ys[j])), neg(phi_lt_fn(c, k, ys[j], xs[j]))));
    conj.push_back(phi_lt_fn(c, k, xs[i], ys[i]));
    alts.push_back(big_and(conj));
  }
  return big_or(alts);
}

Formula phi_lt_fn(const QuantifierConfig& c, int k, const Formula& x, const Formula& y) {
  if (k == 0) return phi_lt_setpair(c, x, y);
  auto xs = fresh_syms("u", c.w), ys = fresh_syms("v", c.w);
  auto xv = vars_of(xs), yv = vars_of(ys);
  Formula above = implies(phi_lt_tuple(c, k - 1, xv, yv), iff(apps(x, yv), apps(y, yv)));
  Formula body = big_and({apps(y, xv), neg(apps(x, xv)), forall_ho(c, k - 1, ys, above)});
  return exists_ho(c, k - 1, xs, body);
}

Formula ff_ho(const QuantifierConfig& c, int k) {
  Formula f = ff();
  Type lower = tau_type(c.w, k - 1);
  for (int i = 0; i < c.w; ++i) f = lambda(fresh_sym("u"), Variance::Zero, lower, f);
  return f;
}

Formula next_ho(const QuantifierConfig& c, int k, const Formula& x) {
  if (k == 0) return next_set(c, x);
  auto xs = fresh_syms("u", c.w), ys = fresh_syms("v", c.w);
  auto xv = vars_of(xs), yv = vars_of(ys);
  Formula below = phi_lt_tuple(c, k - 1, yv, xv);
  Formula set_bit = land(neg(apps(x, xv)), forall_ho(c, k - 1, ys, implies(below, apps(x, yv))));
  Formula keep_bit = land(apps(x, xv), exists_ho(c, k - 1, ys, land(below, neg(apps(x, yv)))));
  Formula f = lor(set_bit, keep_bit);
  Type lower = tau_type(c.w, k - 1);
  for (int i = c.w - 1; i >= 0; --i) f = lambda(xs[i], Variance::Zero, lower, f);
  return f;
}

Formula exists_ho(const QuantifierConfig& c, int k, Sym x, const Formula& phi) {
  if (k == 0) return exists_set(c, x, phi);
  c.validate();
  Sym f = fresh_sym("F");
  Type t = tau_type(c.w, k);
  Type ft = arrow(t, Variance::Zero, ground_type());
  Formula body = lambda(x, Variance::Zero, t, lor(phi, app(fixvar(f), next_ho(c, k, lamvar(x)))));
  return app(mu(f, ft, body), ff_ho(c, k));
}

Formula forall_ho(const QuantifierConfig& c, int k, Sym x, const Formula& phi) {
  return neg(exists_ho(c, k, x, neg(phi)));
}

Formula exists_ho(const QuantifierConfig& c, int k, const std::vector<Sym>& xs, const Formula& phi) {
  Formula f = phi;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) f = exists_ho(c, k, *it, f);
  return f;
}

Formula forall_ho(const QuantifierConfig& c, int k, const std::vector<Sym>& xs, const Formula& phi) {
  Formula f = phi;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) f = forall_ho(c, k, *it, f);
  return f;
}

TupleSet good_set(const Lts& l, const QuantifierConfig& c, std::span<const StateId> anchors,
                  const std::vector<std::vector<StateId>>& prefixes) {
  if (static_cast<int>(anchors.size()) != c.r) throw ValidationError("expected r anchor states");
  TupleSpace sp(l.num_states(), c.d);
  TupleSet out = sp.empty_set();
  std::set<std::vector<StateId>> allowed(prefixes.begin(), prefixes.end());
  int plen = c.d - c.r - 2;
  for (std::size_t x = 0; x < sp.size(); ++x) {
    bool ok = true;
    for (int j = 0; j < c.r && ok; ++j) ok = sp.component(x, c.first_anchor() + j) == anchors[j];
    if (ok && !allowed.empty()) {
      std::vector<StateId> p(plen);
      for (int i = 0; i < plen; ++i) p[i] = sp.component(x, i + 1);
      ok = allowed.count(p) > 0;
    }
    if (ok) out.set(x);
  }
  return out;
}

bool goodness_check(const Lts& l, int d, int r, const TupleSet& e) {
  if (r < 1 || d < r + 3) return false;
  TupleSpace sp(l.num_states(), d);
  if (e.size() != sp.size() || e.empty()) return false;
  int plen = d - r - 2;
  std::vector<StateId> anchors;
  std::set<std::vector<StateId>> prefixes;
  bool consistent = true;
  e.for_each([&](std::size_t x) {
    std::vector<StateId> a(r), p(plen);
    for (int j = 0; j < r; ++j) a[j] = sp.component(x, d - r - 1 + j);
    for (int i = 0; i < plen; ++i) p[i] = sp.component(x, i + 1);
    if (anchors.empty()) anchors = a;
    consistent = consistent && a == anchors;
    prefixes.insert(p);
  });
  if (!consistent) return false;
  std::size_t n = static_cast<std::size_t>(l.num_states());
  if (e.count() != prefixes.size() * n * n) return false;
  auto reach = reachable(l, anchors);
  return std::all_of(reach.begin(), reach.end(), [](bool b) { return b; });
}

}  // namespace phfl
