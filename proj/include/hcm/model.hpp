#pragma once

#include "hcm/expr.hpp"
#include "hcm/rational.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hcm {

enum class VarKind { Exogenous, Endogenous };

// Position of a variable in its model's declaration order.
struct VarId {
  std::uint32_t index = 0;
  auto operator<=>(const VarId&) const = default;
};

// Position of a value in its variable's range.
using ValueId = std::uint32_t;

struct Variable {
  std::string name;
  VarKind kind = VarKind::Endogenous;
  std::vector<std::string> range;

  std::optional<ValueId> find_value(std::string_view label) const;
  bool integer_range() const;
};

enum class ModelErrorKind {
  DuplicateVariable,
  UndefinedVariable,
  EquationNotTotal,
  ValueOutOfRange,
  CyclicModel,
  UtilityIncomplete,
  DefaultOutOfRange,
  InvalidRange,
  InvalidDeclaration,
  ModelTooLarge,
  ContextIncomplete,
  InvalidIntervention,
};

std::string_view to_string(ModelErrorKind kind);

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorKind kind, std::string entity, const std::string& message);

  ModelErrorKind kind() const { return kind_; }
  // Name of the offending variable, or "utility" / "default" / "context".
  const std::string& entity() const { return entity_; }

 private:
  ModelErrorKind kind_;
  std::string entity_;
};

// Caps that keep the exhaustive searches tractable.
struct Limits {
  std::size_t max_endogenous = 16;
  std::size_t max_range = 8;
  std::size_t max_table = std::size_t{1} << 20;
};

struct VariableDecl {
  std::string name;
  VarKind kind = VarKind::Endogenous;
  std::vector<std::string> range;
  std::optional<Expr> equation;  // required iff endogenous
  bool outcome = false;

  bool operator==(const VariableDecl&) const = default;
};

// Unvalidated model description, as produced by the DSL parser or by hand.
struct ModelDecl {
  std::string name;
  std::vector<VariableDecl> variables;
  std::vector<std::pair<std::string, Rational>> utility;
  std::optional<Rational> default_utility;

  bool operator==(const ModelDecl&) const = default;
};

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<ValueId> values) : values_(std::move(values)) {}

  ValueId operator[](VarId v) const { return values_[v.index]; }
  ValueId& operator[](VarId v) { return values_[v.index]; }
  std::size_t size() const { return values_.size(); }
  std::span<const ValueId> values() const { return values_; }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<ValueId> values_;
};

// Structural equation compiled to a dense table over the parents it actually
// depends on. Index = sum(value(parent[i]) * stride[i]).
struct Equation {
  VarId target;
  std::vector<VarId> parents;
  std::vector<std::size_t> strides;
  std::vector<ValueId> table;
  Expr source;

  ValueId evaluate(const Assignment& a) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) idx += a[parents[i]] * strides[i];
    return table[idx];
  }
};

class Model;

namespace detail {
class ModelBuilder;
}

// Full assignment of the exogenous variables.
class Context {
 public:
  Context() = default;

  static Context from_labels(const Model& m,
                             const std::vector<std::pair<std::string, std::string>>& values);
  // One value per exogenous variable, in the model's exogenous order.
  static Context from_values(const Model& m, std::vector<ValueId> exogenous_values);

  std::span<const std::pair<VarId, ValueId>> entries() const { return entries_; }

  bool operator==(const Context&) const = default;

 private:
  std::vector<std::pair<VarId, ValueId>> entries_;
};

// Surgery on endogenous variables: each target's equation is replaced by a
// constant. Entries are kept sorted by variable.
class Intervention {
 public:
  Intervention() = default;

  static Intervention from_labels(const Model& m,
                                  const std::vector<std::pair<std::string, std::string>>& values);

  // Inserts or overwrites.
  void set(VarId v, ValueId value);
  std::optional<ValueId> find(VarId v) const;
  bool empty() const { return targets_.empty(); }
  std::size_t size() const { return targets_.size(); }
  std::span<const std::pair<VarId, ValueId>> entries() const { return targets_; }

  // Throws InvalidIntervention / ValueOutOfRange if a target is exogenous or
  // a value is outside its range.
  void validate(const Model& m) const;

  bool operator==(const Intervention&) const = default;

 private:
  std::vector<std::pair<VarId, ValueId>> targets_;
};

class Model {
 public:
  const std::string& name() const { return name_; }
  std::size_t size() const { return variables_.size(); }
  std::span<const Variable> variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_[v.index]; }
  std::optional<VarId> find(std::string_view name) const;
  // Throws UndefinedVariable.
  VarId require(std::string_view name) const;

  const std::vector<VarId>& exogenous() const { return exogenous_; }
  const std::vector<VarId>& endogenous() const { return endogenous_; }
  // Exogenous variables first, then endogenous ones; ties broken by
  // declaration order.
  const std::vector<VarId>& topological_order() const { return topo_; }
  const Equation& equation(VarId v) const;

  std::optional<VarId> outcome() const { return outcome_; }
  // Utility of an outcome value. Only meaningful when outcome() is set.
  const Rational& utility(ValueId o) const { return utility_[o]; }
  const std::vector<Rational>& utilities() const { return utility_; }
  const Rational& default_utility() const { return default_; }

  // Same causal structure with a different utility table and default.
  Model with_utilities(std::vector<Rational> utility, Rational default_utility) const;
  Model with_default(Rational default_utility) const;

  const std::vector<std::string>& warnings() const { return warnings_; }
  const ModelDecl& declaration() const { return decl_; }
  const Limits& limits() const { return limits_; }

 private:
  friend Model build_model(const ModelDecl& decl, const Limits& limits);
  friend class detail::ModelBuilder;
  friend Model intervene(const Model& m, const Intervention& iv);

  std::string name_;
  std::vector<Variable> variables_;
  std::vector<VarId> exogenous_;
  std::vector<VarId> endogenous_;
  std::vector<VarId> topo_;
  std::vector<std::optional<Equation>> equations_;
  std::optional<VarId> outcome_;
  std::vector<Rational> utility_;
  Rational default_{0};
  std::vector<std::string> warnings_;
  ModelDecl decl_;
  Limits limits_;
};

// Validates and compiles a declaration. Errors name the offending entity.
Model build_model(const ModelDecl& decl, const Limits& limits = {});

// Edges X -> Y exactly when F_Y changes with X for some setting of the other
// variables.
struct DependencyGraph {
  std::vector<std::pair<VarId, VarId>> edges;  // sorted (from, to)
  std::vector<VarId> roots;                    // exogenous variables some equation reads

  bool has_edge(VarId from, VarId to) const;
};

DependencyGraph dependency_graph(const Model& m);
std::string to_dot(const Model& m, const DependencyGraph& g);

// The unique solution of the equations under ctx, with iv's targets held at
// their intervened values. Equivalent to solve(intervene(m, iv), ctx).
Assignment solve(const Model& m, const Context& ctx, const Intervention& iv = {});

// M_{X <- x}: targets' equations replaced by constants.
Model intervene(const Model& m, const Intervention& iv);

// "X=x" label helpers.
std::string describe(const Model& m, VarId v, ValueId value);

}  // namespace hcm
