#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phfl/formula.hpp"

namespace phfl {

struct ParseOptions {
  /// Names that may occur free; they are read as lambda variables.
  std::vector<std::string> free_vars;
  /// Rename binders so that no name is bound twice or both free and bound.
  bool rename_apart = true;
};

/// Parses surface syntax and checks every index against arity d.
Formula parse_formula(std::string_view text, int d, const ParseOptions& opts = {});
Type parse_type(std::string_view text);

std::string print_formula(const Formula& f);

}  // namespace phfl
