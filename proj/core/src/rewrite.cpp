#include "phfl/rewrite.hpp"

#include "phfl/error.hpp"

namespace phfl {

namespace {

Formula rebuild_unary(const Formula& f, Formula a) {
  if (a == f->a) return f;
  switch (f->kind) {
    case Kind::Neg:
      return neg(std::move(a));
    case Kind::Diamond:
      return diamond(f->name, f->index, std::move(a));
    case Kind::Subst:
      return subst(f->map, std::move(a));
    case Kind::Lambda:
      return lambda(f->name, f->variance, f->type, std::move(a));
    case Kind::Mu:
      return mu(f->name, f->type, std::move(a));
    case Kind::Nu:
      return nu(f->name, f->type, std::move(a));
    default:
      throw Error("rebuild_unary on a non-unary node");
  }
}

Formula rebuild_binary(const Formula& f, Formula a, Formula b) {
  if (a == f->a && b == f->b) return f;
  return f->kind == Kind::Or ? lor(std::move(a), std::move(b)) : app(std::move(a), std::move(b));
}

Formula rebind(const Formula& f, Sym y, Formula body) {
  switch (f->kind) {
    case Kind::Lambda:
      return lambda(y, f->variance, f->type, std::move(body));
    case Kind::Mu:
      return mu(y, f->type, std::move(body));
    default:
      return nu(y, f->type, std::move(body));
  }
}

Formula var_like(const Formula& f, Sym y) { return f->kind == Kind::Lambda ? lamvar(y) : fixvar(y); }

}  // namespace

Formula substitute(const Formula& phi, Sym x, const Formula& psi) {
  if (!phi->has_free(x)) return phi;
  switch (phi->kind) {
    case Kind::LamVar:
    case Kind::FixVar:
      return psi;
    case Kind::Or:
    case Kind::App:
      return rebuild_binary(phi, substitute(phi->a, x, psi), substitute(phi->b, x, psi));
    case Kind::Neg:
    case Kind::Diamond:
    case Kind::Subst:
      return rebuild_unary(phi, substitute(phi->a, x, psi));
    case Kind::Lambda:
    case Kind::Mu:
    case Kind::Nu: {
      // phi->name != x here, since x is free in phi.
      if (psi->has_free(phi->name)) {
        Sym y = fresh_sym(name_of(phi->name) + "_");
        Formula body = substitute(phi->a, phi->name, var_like(phi, y));
        return rebind(phi, y, substitute(body, x, psi));
      }
      return rebuild_unary(phi, substitute(phi->a, x, psi));
    }
    default:
      return phi;
  }
}

Formula unfold_fixpoint(const Formula& phi) {
  if (phi->kind != Kind::Mu && phi->kind != Kind::Nu) throw Error("unfold_fixpoint: not a fixpoint node");
  return substitute(phi->a, phi->name, phi);
}

Formula beta_reduce(const Formula& phi) {
  switch (phi->kind) {
    case Kind::App: {
      Formula f = beta_reduce(phi->a);
      Formula a = beta_reduce(phi->b);
      if (f->kind == Kind::Lambda) return beta_reduce(substitute(f->a, f->name, a));
      return rebuild_binary(phi, std::move(f), std::move(a));
    }
    case Kind::Or:
      return rebuild_binary(phi, beta_reduce(phi->a), beta_reduce(phi->b));
    case Kind::Neg:
    case Kind::Diamond:
    case Kind::Subst:
    case Kind::Lambda:
    case Kind::Mu:
    case Kind::Nu:
      return rebuild_unary(phi, beta_reduce(phi->a));
    default:
      return phi;
  }
}

Formula rename_binders(const Formula& phi) {
  switch (phi->kind) {
    case Kind::Or:
    case Kind::App:
      return rebuild_binary(phi, rename_binders(phi->a), rename_binders(phi->b));
    case Kind::Neg:
    case Kind::Diamond:
    case Kind::Subst:
      return rebuild_unary(phi, rename_binders(phi->a));
    case Kind::Lambda:
    case Kind::Mu:
    case Kind::Nu: {
      Sym y = fresh_sym(name_of(phi->name) + "_");
      Formula body = substitute(phi->a, phi->name, var_like(phi, y));
      return rebind(phi, y, rename_binders(body));
    }
    default:
      return phi;
  }
}

}  // namespace phfl
