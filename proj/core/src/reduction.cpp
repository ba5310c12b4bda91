#include "phfl/reduction.hpp"

#include <algorithm>

#include "phfl/error.hpp"
#include "phfl/tuple_set.hpp"

namespace phfl {

std::string product_action(std::string_view a, int i) { return std::string(a) + std::to_string(i); }
std::string product_prop(std::string_view p, int i) { return std::string(p) + std::to_string(i); }

std::string sigma_action(const IndexMap& sigma) {
  std::string s = "sigma";
  for (int j : sigma.map) s += std::to_string(j);
  return s;
}

std::vector<IndexMap> all_sigmas(int d) {
  std::vector<IndexMap> out;
  IndexMap m = IndexMap::identity(d);
  std::fill(m.map.begin(), m.map.end(), 1);
  while (true) {
    out.push_back(m);
    int i = d - 1;
    while (i >= 0 && m.map[i] == d) m.map[i--] = 1;
    if (i < 0) break;
    ++m.map[i];
  }
  return out;
}

ProductLts d_product(const Lts& lts, int d, const std::vector<IndexMap>& sigmas, std::size_t max_states) {
  if (d < 1 || d > 9) throw ValidationError("product arity must be between 1 and 9");
  TupleSpace space(lts.num_states(), d);
  if (space.size() > max_states)
    throw ResourceLimit("product has " + std::to_string(space.size()) + " states, above the bound " +
                        std::to_string(max_states));
  std::vector<IndexMap> sig;
  for (const auto& s : sigmas) {
    if (s.arity() != d) throw ValidationError("substitution arity does not match the product arity");
    if (std::find(sig.begin(), sig.end(), s) == sig.end()) sig.push_back(s);
  }

  std::vector<std::string> actions, props;
  for (int i = 1; i <= d; ++i)
    for (const auto& a : lts.actions()) actions.push_back(product_action(a, i));
  for (const auto& s : sig) actions.push_back(sigma_action(s));
  for (int i = 1; i <= d; ++i)
    for (const auto& p : lts.props()) props.push_back(product_prop(p, i));

  ProductLts out{Lts(static_cast<int>(space.size()), actions, props), d, sig};
  int na = static_cast<int>(lts.actions().size());
  int np = static_cast<int>(lts.props().size());
  std::vector<StateId> t(d);
  for (std::size_t x = 0; x < space.size(); ++x) {
    StateId sx = static_cast<StateId>(x);
    for (int i = 1; i <= d; ++i) {
      StateId si = space.component(x, i);
      for (int p = 0; p < np; ++p)
        if (lts.has_label(si, p)) out.lts.add_label(sx, (i - 1) * np + p);
      for (int a = 0; a < na; ++a)
        for (StateId u : lts.successors(a, si))
          out.lts.add_transition(sx, (i - 1) * na + a, static_cast<StateId>(space.replace(x, i, u)));
    }
    for (std::size_t k = 0; k < sig.size(); ++k) {
      for (int j = 1; j <= d; ++j) t[j - 1] = space.component(x, sig[k](j));
      out.lts.add_transition(sx, d * na + static_cast<int>(k), static_cast<StateId>(space.index(t)));
    }
  }
  return out;
}

namespace {

void collect(const Formula& f, std::vector<IndexMap>& out) {
  if (!f) return;
  if (f->kind == Kind::Subst && std::find(out.begin(), out.end(), f->map) == out.end()) out.push_back(f->map);
  collect(f->a, out);
  collect(f->b, out);
}

}  // namespace

std::vector<IndexMap> sigma_maps(const Formula& phi) {
  std::vector<IndexMap> out;
  collect(phi, out);
  return out;
}

Formula hat_translate(const Formula& f) {
  switch (f->kind) {
    case Kind::Prop:
      return prop(product_prop(name_of(f->name), f->index), 1);
    case Kind::Lt:
      throw ValidationError("the order atom lt has no monadic translation");
    case Kind::Or:
      return lor(hat_translate(f->a), hat_translate(f->b));
    case Kind::Neg:
      return neg(hat_translate(f->a));
    case Kind::Diamond:
      return diamond(product_action(name_of(f->name), f->index), 1, hat_translate(f->a));
    case Kind::Subst:
      return diamond(sigma_action(f->map), 1, hat_translate(f->a));
    case Kind::Lambda:
      return lambda(f->name, f->variance, f->type, hat_translate(f->a));
    case Kind::LamVar:
    case Kind::FixVar:
      return f;
    case Kind::App:
      return app(hat_translate(f->a), hat_translate(f->b));
    case Kind::Mu:
      return mu(f->name, f->type, hat_translate(f->a));
    case Kind::Nu:
      return nu(f->name, f->type, hat_translate(f->a));
  }
  throw Error("unknown formula kind");
}

TupleSet eval_via_product(const Lts& lts, int d, const Formula& phi, const EvalOptions& opts) {
  ProductLts p = d_product(lts, d, sigma_maps(phi));
  TupleSet mono = eval(p.lts, 1, hat_translate(phi), {}, opts).ground();
  return mono;  // product state x is tuple index x, so the sets coincide
}

bool check_via_product(const Lts& lts, std::span<const StateId> tuple, const Formula& phi, const EvalOptions& opts) {
  int d = static_cast<int>(tuple.size());
  TupleSpace space(lts.num_states(), d);
  return eval_via_product(lts, d, phi, opts).test(space.index(tuple));
}

}  // namespace phfl
