#pragma once

#include "phfl/formula.hpp"

namespace phfl {

/// Capture-avoiding substitution phi[psi/x]; x may be a lambda or a
/// fixpoint variable.
Formula substitute(const Formula& phi, Sym x, const Formula& psi);

/// body[phi/X] for phi = mu X. body or nu X. body.
Formula unfold_fixpoint(const Formula& phi);

/// Contracts every beta-redex, including those created by contraction.
/// Fixpoints are not unfolded.
Formula beta_reduce(const Formula& phi);

/// Rebuilds `phi` with every binder renamed to a fresh symbol.
Formula rename_binders(const Formula& phi);

}  // namespace phfl
