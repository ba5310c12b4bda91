#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "phfl/formula.hpp"
#include "phfl/tuple_set.hpp"
#include "phfl/types.hpp"

namespace phfl {

class Evaluator;
class FunctionValue;
using FnPtr = std::shared_ptr<FunctionValue>;

/// Element of a semantic lattice: a set of tuples at ground type, a
/// function otherwise.
class Value {
 public:
  Value() = default;
  Value(TupleSet s) : v_(std::move(s)) {}
  Value(FnPtr f) : v_(std::move(f)) {}

  bool is_ground() const { return std::holds_alternative<TupleSet>(v_); }
  const TupleSet& ground() const { return std::get<TupleSet>(v_); }
  const FnPtr& fn() const { return std::get<FnPtr>(v_); }

 private:
  std::variant<TupleSet, FnPtr> v_;
};

/// Function values. Application goes through Evaluator::apply, which
/// also records the argument for extensional comparisons.
class FunctionValue {
 public:
  FunctionValue();
  virtual ~FunctionValue() = default;

  virtual Type arg_type() const = 0;
  virtual Value apply(Evaluator& ev, const Value& arg) = 0;
  /// True while the value may still change meaning, i.e. it depends on
  /// a fixpoint that is being solved.
  virtual bool is_volatile() const { return false; }

  const std::uint64_t uid;

  // Extensional key cache, valid for one evaluation pass.
  std::uint64_t key_epoch = 0;
  std::vector<std::uint64_t> key;
};

/// Function given by a host callback.
class NativeFn : public FunctionValue {
 public:
  using Impl = std::function<Value(Evaluator&, const Value&)>;
  NativeFn(Type type, Impl impl) : type_(std::move(type)), impl_(std::move(impl)) {}
  Type arg_type() const override { return type_->arg; }
  Value apply(Evaluator& ev, const Value& arg) override { return impl_(ev, arg); }
  const Type& type() const { return type_; }

 private:
  Type type_;
  Impl impl_;
};

/// Persistent association list from variables to values.
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  Sym name;
  Value value;
  Env next;
};

Env extend_env(Env env, Sym name, Value v);
const Value* lookup(const Env& env, Sym name);

}  // namespace phfl
