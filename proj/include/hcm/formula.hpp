#pragma once

#include "hcm/model.hpp"

#include <string>
#include <vector>

namespace hcm {

// X = x
struct PrimitiveEvent {
  VarId var;
  ValueId value = 0;
  auto operator<=>(const PrimitiveEvent&) const = default;
};

// X1 = x1 ∧ ... ∧ Xk = xk over distinct variables.
using Conjunction = std::vector<PrimitiveEvent>;

// Boolean combination of primitive events.
struct Formula {
  enum class Kind { Event, Not, And, Or };

  Kind kind = Kind::Event;
  PrimitiveEvent event;
  std::vector<Formula> children;

  static Formula primitive(VarId v, ValueId value);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula of(const Conjunction& c);

  bool holds(const Assignment& a) const;
  // Distinct variables mentioned, ascending.
  std::vector<VarId> variables() const;

  bool operator==(const Formula&) const = default;
};

// [Y <- y] body
struct CausalFormula {
  Intervention prefix;
  Formula body;

  bool operator==(const CausalFormula&) const = default;
};

bool evaluate(const Model& m, const Context& ctx, const CausalFormula& f);
bool evaluate(const Model& m, const Context& ctx, const Formula& body);

// True iff f1 => !f2 is valid: no joint assignment of the variables in the
// model makes both true. Only the mentioned variables are enumerated; the
// bodies cannot distinguish assignments that agree on them.
bool implies_not(const Formula& f1, const Formula& f2, const Model& m);

std::string to_string(const Model& m, const Formula& f);
std::string to_string(const Model& m, const Conjunction& c);
std::string to_string(const Model& m, const Intervention& iv);

}  // namespace hcm
