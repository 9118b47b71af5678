#pragma once

#include <string>
#include <vector>

namespace hcm {

// Source form of a structural equation body. Names are unresolved; the model
// builder binds them and compiles the body into a lookup table.
//
// A bare variable reference or literal at the top of an equation yields that
// value directly. Inside `!`, `&`, `|`, and `when` guards, operands are read as
// Booleans: a variable with an all-integer range is true iff its value is not 0.
struct Expr {
  enum class Kind { Literal, VarRef, Equals, NotEquals, Not, And, Or, Case };

  Kind kind = Kind::Literal;
  std::string name;                // VarRef, Equals, NotEquals
  std::string value;               // Literal, Equals, NotEquals
  std::vector<Expr> operands;      // Not: 1, And/Or: >= 2, Case: guards
  std::vector<std::string> arms;   // Case: one value per guard, then the else value

  static Expr literal(std::string v);
  static Expr var(std::string n);
  static Expr equals(std::string n, std::string v);
  static Expr not_equals(std::string n, std::string v);
  static Expr negate(Expr e);
  static Expr conj(std::vector<Expr> es);
  static Expr disj(std::vector<Expr> es);
  static Expr cases(std::vector<Expr> guards, std::vector<std::string> values,
                    std::string otherwise);

  bool operator==(const Expr&) const = default;
};

// Every variable name the expression mentions, in first-occurrence order.
std::vector<std::string> referenced_names(const Expr& e);

// Canonical surface text (the model DSL's expression syntax).
std::string to_source(const Expr& e);

// Integer labels are canonicalized ("007" -> "7"); symbolic labels are
// identifiers. Returns true for labels that parse as integers.
bool is_integer_label(const std::string& label);

}  // namespace hcm
