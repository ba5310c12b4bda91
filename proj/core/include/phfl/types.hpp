#pragma once

#include <memory>
#include <string>
#include <vector>

namespace phfl {

enum class Variance { Plus, Minus, Zero };

Variance dual(Variance v);
char variance_char(Variance v);

struct TypeNode;
/// Types are hash-consed: structurally equal types share one node, so
/// pointer equality is type equality.
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  Type arg;  // null for the ground type
  Variance variance = Variance::Plus;
  Type result;
  int id = 0;  // dense identifier, stable within a process

  bool ground() const { return !arg; }
};

Type ground_type();
Type arrow(const Type& arg, Variance v, const Type& result);
/// t1 -> t2 -> ... -> ground with the given variances.
Type arrows(const std::vector<std::pair<Variance, Type>>& args);

int order_of_type(const Type& t);
/// Number of arguments before reaching the ground type.
int type_arity(const Type& t);
/// Result type after applying `n` arguments.
Type type_after(const Type& t, int n);

/// Surface syntax: `Prop`, `(+Prop) -> Prop`.
std::string to_string(const Type& t);

}  // namespace phfl
