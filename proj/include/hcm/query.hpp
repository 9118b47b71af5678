#pragma once

// Runs a parsed QueryExpression against a model document and produces the
// flags plus a machine-readable report.
//
// Recognized arguments (all values are DSL text):
//   every kind   context=<name> max_witness=<n> default=<rational>
//   solve        do=<X<-v, ...>
//   evaluate     formula=<[..] body>
//   cause        event= contrast= effect= contrast_effect=
//   plain        event= effect=
//   harm         event= [contrast=] [flag=harm|strict|counterfactual|below-default]
//   alternative  event= alternative=

#include "hcm/dsl.hpp"
#include "hcm/harm.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <string_view>

namespace hcm {

inline constexpr std::string_view kEngineVersion = "1.0.0";

struct QueryOptions {
  bool all_witnesses = false;
};

struct QueryResult {
  // Value of the queried flag; always true for solve.
  bool holds = false;
  std::map<std::string, bool> flags;
  nlohmann::ordered_json report;
  // Human-readable rendering, one fact per line.
  std::string text;
};

// Context named by the `context` argument, else `main`, else the only one.
// A model without exogenous variables gets the empty context.
Context resolve_context(const ModelDocument& doc, const QueryExpression& q);

// Throws QueryError for semantic problems, DslError for malformed
// expressions, and std::invalid_argument for bad argument values.
QueryResult run_query(const ModelDocument& doc, const QueryExpression& q, const QueryOptions& opts = {});

}  // namespace hcm
