#include "phfl/types.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "phfl/error.hpp"

namespace phfl {

Variance dual(Variance v) {
  switch (v) {
    case Variance::Plus:
      return Variance::Minus;
    case Variance::Minus:
      return Variance::Plus;
    case Variance::Zero:
      return Variance::Zero;
  }
  return v;
}

char variance_char(Variance v) {
  switch (v) {
    case Variance::Plus:
      return '+';
    case Variance::Minus:
      return '-';
    case Variance::Zero:
      return '0';
  }
  return '?';
}

namespace {

struct TypeTable {
  std::mutex mu;
  Type ground;
  std::map<std::tuple<int, int, int>, Type> arrows;
  int next_id = 0;
};

TypeTable& table() {
  static TypeTable t;
  return t;
}

}  // namespace

Type ground_type() {
  auto& t = table();
  std::lock_guard lock(t.mu);
  if (!t.ground) {
    auto node = std::make_shared<TypeNode>();
    node->id = t.next_id++;
    t.ground = node;
  }
  return t.ground;
}

Type arrow(const Type& arg, Variance v, const Type& result) {
  if (!arg || !result) throw Error("arrow type with a missing component");
  auto& t = table();
  std::lock_guard lock(t.mu);
  auto key = std::make_tuple(arg->id, static_cast<int>(v), result->id);
  auto it = t.arrows.find(key);
  if (it != t.arrows.end()) return it->second;
  auto node = std::make_shared<TypeNode>();
  node->arg = arg;
  node->variance = v;
  node->result = result;
  node->id = t.next_id++;
  t.arrows.emplace(key, node);
  return node;
}

Type arrows(const std::vector<std::pair<Variance, Type>>& args) {
  Type t = ground_type();
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = arrow(it->second, it->first, t);
  return t;
}

int order_of_type(const Type& t) {
  if (t->ground()) return 0;
  return std::max(order_of_type(t->arg) + 1, order_of_type(t->result));
}

int type_arity(const Type& t) {
  int n = 0;
  for (const TypeNode* p = t.get(); !p->ground(); p = p->result.get()) ++n;
  return n;
}

Type type_after(const Type& t, int n) {
  Type r = t;
  for (int i = 0; i < n; ++i) {
    if (r->ground()) throw Error("too many arguments for type " + to_string(t));
    r = r->result;
  }
  return r;
}

std::string to_string(const Type& t) {
  if (t->ground()) return "Prop";
  return std::string("(") + variance_char(t->variance) + to_string(t->arg) + ") -> " + to_string(t->result);
}

}  // namespace phfl
