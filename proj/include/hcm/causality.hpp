#pragma once

#include "hcm/formula.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcm {

enum class QueryErrorKind {
  InvalidEvent,        // empty, repeated, or exogenous variables
  InvalidContrast,     // contrast equals the event in some component
  EffectNotExclusive,  // phi' => !phi is not valid
  OutcomeInEvent,
  UnknownVariable,
  NoOutcome,
  UnknownContext,
};

std::string_view to_string(QueryErrorKind kind);

class QueryError : public std::runtime_error {
 public:
  QueryError(QueryErrorKind kind, const std::string& message);
  QueryErrorKind kind() const { return kind_; }

 private:
  QueryErrorKind kind_;
};

enum class CauseCondition { AC1, AC2, AC3 };
std::string_view to_string(CauseCondition c);

// Variables held at their actual values while the cause is flipped.
struct Witness {
  std::vector<VarId> vars;      // ascending declaration order
  std::vector<ValueId> values;  // actual values, parallel to vars

  bool operator==(const Witness&) const = default;
};

// "X = x rather than X = x' is an actual cause of phi rather than phi'".
struct CauseQuery {
  Conjunction event;
  std::vector<ValueId> contrast;  // parallel to event
  Formula effect;
  Formula contrast_effect;
};

struct SearchOptions {
  // Largest witness set tried; 0 restricts the search to but-for causation.
  std::optional<std::size_t> max_witness;
};

struct CauseVerdict {
  bool is_cause = false;
  std::optional<Witness> witness;
  std::optional<CauseCondition> failed;
  // When AC3 fails: the sub-conjunction that already satisfies AC1 and AC2.
  Conjunction smaller_cause;
};

CauseVerdict check_contrastive_cause(const Model& m, const Context& ctx, const CauseQuery& q,
                                     const SearchOptions& opts = {});

// Every witness set whose actual-value fixing satisfies AC2, smallest first.
// Empty when AC1 fails.
std::vector<Witness> enumerate_witnesses(const Model& m, const Context& ctx, const CauseQuery& q,
                                         const SearchOptions& opts = {});

struct PlainCauseVerdict {
  CauseVerdict verdict;
  // Certificate, set when verdict.is_cause.
  std::vector<ValueId> contrast;
  std::optional<Formula> contrast_effect;
};

// Non-contrastive query: searches contrasts x' and contrast effects phi'
// (conjunctions over the effect's variables that exclude phi) for a
// contrastive certificate.
PlainCauseVerdict check_plain_cause(const Model& m, const Context& ctx, const Conjunction& event,
                                    const Formula& effect, const SearchOptions& opts = {});

struct CausePart {
  PrimitiveEvent conjunct;
  Conjunction cause;  // the multi-conjunct cause containing it
};

// Conjuncts of plain actual causes of `effect` that have two or more
// conjuncts. Candidate causes are the actual values of endogenous variables.
std::vector<CausePart> parts_of_cause(const Model& m, const Context& ctx, const Formula& effect,
                                      const SearchOptions& opts = {});

// Sorts the event by variable (permuting the contrast alongside) and checks
// that variables are distinct endogenous ones and that every component of
// the contrast differs from the event.
void normalize_query(const Model& m, CauseQuery& q);

// Checks that the event's variables are distinct endogenous ones with
// in-range values and returns it sorted by variable.
Conjunction normalize_event(const Model& m, Conjunction event);

// Contrast tuples for an event, in range order with the first event
// variable most significant. With `all_components_differ`, only tuples that
// change every component.
std::vector<std::vector<ValueId>> enumerate_contrasts(const Model& m, const Conjunction& event,
                                                      bool all_components_differ);

}  // namespace hcm
