#pragma once

// Text format for causal utility models (.hcm) and for query expressions.
//
//   version 1
//   model name {
//     exo U : {0, 1}
//     var X : {0, 1} = U
//     outcome O : {bad, good} = case { when X = 1 -> good; else -> bad }
//     utility { bad: 0, good: 1 }
//     default 1/2
//   }
//   context main { U = 1 }
//
// Formulas: `[X<-v, Y<-w] A=1 & !(B=0 | C!=2)`.

#include "hcm/causality.hpp"
#include "hcm/model.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hcm {

enum class DiagnosticKind { LexError, ParseError, SemanticError };
std::string_view to_string(DiagnosticKind kind);

// 1-based line and column (columns count code points).
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
};

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::ParseError;
  std::string message;
  SourceSpan span;
  std::string token;                  // offending token text, empty at end of input
  std::vector<std::string> expected;  // parse errors only
  std::optional<ModelErrorKind> model_error;  // semantic errors from the model builder

  // "line:col: kind: message"
  std::string format() const;
};

class DslError : public std::runtime_error {
 public:
  explicit DslError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

struct NamedContext {
  std::string name;
  std::vector<std::pair<std::string, std::string>> values;
  Context resolved;

  bool operator==(const NamedContext& o) const { return name == o.name && values == o.values; }
};

struct ModelDocument {
  ModelDecl decl;
  std::vector<NamedContext> contexts;
  Model model;
  // Source locations of declared entities; not part of document identity.
  std::map<std::string, SourceSpan> spans;

  // Throws QueryError(UnknownContext).
  const Context& context(std::string_view name) const;
  bool has_context(std::string_view name) const;

  // Context order is irrelevant.
  bool operator==(const ModelDocument& o) const;
};

ModelDocument parse_model(std::string_view text, const Limits& limits = {});

// Canonical text: declarations in declaration order, contexts sorted by
// name, fixed whitespace, rationals as `n` or `n/d`.
std::string serialize_model(const ModelDocument& doc);

// Formula with optional intervention prefix, bound against the model.
CausalFormula parse_formula(std::string_view text, const Model& m);

// Bare intervention list `X<-v, Y<-w`; empty text is the empty intervention.
Intervention parse_intervention(std::string_view text, const Model& m);

// Conjunction of primitive events: `X=1 & Y=b`.
Conjunction parse_event(std::string_view text, const Model& m);

// Contrast values for `event`, written like an event over the same variables.
// Returned in the event's order. Throws QueryError(InvalidContrast) when the
// variables differ.
std::vector<ValueId> parse_contrast(std::string_view text, const Model& m, const Conjunction& event);

// One query line: `<kind> key=value ...`. Values may be double-quoted.
struct QueryExpression {
  enum class Kind { Solve, Evaluate, Cause, PlainCause, Harm, Alternative };

  Kind kind = Kind::Solve;
  std::map<std::string, std::string> args;

  std::optional<std::string> arg(const std::string& key) const;
  bool operator==(const QueryExpression&) const = default;
};

std::string_view to_string(QueryExpression::Kind kind);
QueryExpression parse_query(std::string_view text);
std::string to_string(const QueryExpression& q);

}  // namespace hcm
