#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phfl/eval.hpp"
#include "phfl/formula.hpp"
#include "phfl/lts.hpp"

namespace phfl {

/// Product state numbering follows TupleSpace: the product state of
/// (s1..sd) is TupleSpace(n, d).index(s).
struct ProductLts {
  Lts lts;
  int arity = 1;
  std::vector<IndexMap> sigmas;  // sigma actions present, in action order after the a_i
};

/// Action and proposition names used by the product and by hat_translate.
std::string product_action(std::string_view a, int i);
std::string product_prop(std::string_view p, int i);
std::string sigma_action(const IndexMap& sigma);

/// d-product over actions a_i and props p_i. Only the given sigma maps get
/// actions; pass all_sigmas(d) for the full product. d must be at most 9
/// so generated names stay unambiguous.
ProductLts d_product(const Lts& lts, int d, const std::vector<IndexMap>& sigmas,
                     std::size_t max_states = std::size_t{1} << 22);
std::vector<IndexMap> all_sigmas(int d);

/// Distinct substitution maps occurring in phi, in first-occurrence order.
std::vector<IndexMap> sigma_maps(const Formula& phi);

/// Monadic translation; rejects the built-in order atom.
Formula hat_translate(const Formula& phi);

bool check_via_product(const Lts& lts, std::span<const StateId> tuple, const Formula& phi,
                       const EvalOptions& opts = {});
/// The set of tuples satisfying phi, computed on the product.
TupleSet eval_via_product(const Lts& lts, int d, const Formula& phi, const EvalOptions& opts = {});

}  // namespace phfl
