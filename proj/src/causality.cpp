#include "hcm/causality.hpp"

#include <algorithm>
#include <numeric>

namespace hcm {

std::string_view to_string(QueryErrorKind kind) {
  switch (kind) {
    case QueryErrorKind::InvalidEvent: return "InvalidEvent";
    case QueryErrorKind::InvalidContrast: return "InvalidContrast";
    case QueryErrorKind::EffectNotExclusive: return "EffectNotExclusive";
    case QueryErrorKind::OutcomeInEvent: return "OutcomeInEvent";
    case QueryErrorKind::UnknownVariable: return "UnknownVariable";
    case QueryErrorKind::NoOutcome: return "NoOutcome";
    case QueryErrorKind::UnknownContext: return "UnknownContext";
  }
  return "QueryError";
}

QueryError::QueryError(QueryErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::string_view to_string(CauseCondition c) {
  switch (c) {
    case CauseCondition::AC1: return "AC1";
    case CauseCondition::AC2: return "AC2";
    case CauseCondition::AC3: return "AC3";
  }
  return "?";
}

namespace {

// Calls visit(subset) for every subset of `pool` with at most `cap` elements,
// by increasing size and then lexicographically. Stops when visit returns
// true; returns whether it did.
template <typename Visit>
bool for_each_subset(const std::vector<VarId>& pool, std::size_t cap, Visit&& visit) {
  const std::size_t n = pool.size();
  std::vector<VarId> subset;
  for (std::size_t k = 0; k <= std::min(cap, n); ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      subset.clear();
      for (auto i : idx) subset.push_back(pool[i]);
      if (visit(subset)) return true;
      // Next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

struct Ac2Search {
  const Model& m;
  const Context& ctx;
  const Assignment& actual;
  const SearchOptions& opts;

  std::vector<VarId> candidates(const Conjunction& event) const {
    std::vector<VarId> pool;
    for (auto v : m.endogenous()) {
      const bool in_event = std::any_of(event.begin(), event.end(),
                                        [&](const PrimitiveEvent& e) { return e.var == v; });
      if (!in_event) pool.push_back(v);
    }
    return pool;
  }

  bool holds_with(const Conjunction& event, const std::vector<ValueId>& contrast,
                  const std::vector<VarId>& w, const Formula& contrast_effect) const {
    Intervention iv;
    for (std::size_t i = 0; i < event.size(); ++i) iv.set(event[i].var, contrast[i]);
    for (auto v : w) iv.set(v, actual[v]);
    return contrast_effect.holds(solve(m, ctx, iv));
  }

  std::size_t cap() const { return opts.max_witness.value_or(m.size()); }

  std::optional<Witness> first(const Conjunction& event, const std::vector<ValueId>& contrast,
                               const Formula& contrast_effect) const {
    std::optional<Witness> found;
    for_each_subset(candidates(event), cap(), [&](const std::vector<VarId>& w) {
      if (!holds_with(event, contrast, w, contrast_effect)) return false;
      Witness wit;
      wit.vars = w;
      for (auto v : w) wit.values.push_back(actual[v]);
      found = std::move(wit);
      return true;
    });
    return found;
  }

  std::vector<Witness> all(const Conjunction& event, const std::vector<ValueId>& contrast,
                           const Formula& contrast_effect) const {
    std::vector<Witness> out;
    for_each_subset(candidates(event), cap(), [&](const std::vector<VarId>& w) {
      if (holds_with(event, contrast, w, contrast_effect)) {
        Witness wit;
        wit.vars = w;
        for (auto v : w) wit.values.push_back(actual[v]);
        out.push_back(std::move(wit));
      }
      return false;
    });
    return out;
  }
};

bool event_holds(const Conjunction& event, const Assignment& a) {
  return std::all_of(event.begin(), event.end(),
                     [&](const PrimitiveEvent& e) { return a[e.var] == e.value; });
}

// Core check on an already-normalized query.
CauseVerdict decide(const Model& m, const Context& ctx, const Assignment& actual,
                    const CauseQuery& q, const SearchOptions& opts) {
  CauseVerdict verdict;
  if (!event_holds(q.event, actual) || !q.effect.holds(actual)) {
    verdict.failed = CauseCondition::AC1;
    return verdict;
  }
  const Ac2Search search{m, ctx, actual, opts};
  auto witness = search.first(q.event, q.contrast, q.contrast_effect);
  if (!witness) {
    verdict.failed = CauseCondition::AC2;
    return verdict;
  }
  // AC3: no strict nonempty sub-conjunction, with the contrast restricted
  // componentwise, satisfies AC1 and AC2. AC1 is inherited from the event.
  const std::size_t k = q.event.size();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k); ++mask) {
    Conjunction sub;
    std::vector<ValueId> sub_contrast;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) {
        sub.push_back(q.event[i]);
        sub_contrast.push_back(q.contrast[i]);
      }
    }
    if (search.first(sub, sub_contrast, q.contrast_effect)) {
      verdict.failed = CauseCondition::AC3;
      verdict.smaller_cause = std::move(sub);
      return verdict;
    }
  }
  verdict.is_cause = true;
  verdict.witness = std::move(witness);
  return verdict;
}

void validate_event(const Model& m, const Conjunction& event) {
  if (event.empty()) throw QueryError(QueryErrorKind::InvalidEvent, "event has no conjuncts");
  for (std::size_t i = 0; i < event.size(); ++i) {
    const auto& e = event[i];
    if (e.var.index >= m.size()) throw QueryError(QueryErrorKind::UnknownVariable, "unknown variable");
    const auto& var = m.variable(e.var);
    if (var.kind != VarKind::Endogenous) {
      throw QueryError(QueryErrorKind::InvalidEvent,
                       "event variable '" + var.name + "' is exogenous");
    }
    if (e.value >= var.range.size()) {
      throw QueryError(QueryErrorKind::InvalidEvent, "event value out of range for '" + var.name + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (event[j].var == e.var) {
        throw QueryError(QueryErrorKind::InvalidEvent, "variable '" + var.name + "' repeated in event");
      }
    }
  }
}

void check_exclusive(const Model& m, const Formula& effect, const Formula& contrast_effect) {
  if (!implies_not(contrast_effect, effect, m)) {
    throw QueryError(QueryErrorKind::EffectNotExclusive,
                     "'" + to_string(m, contrast_effect) + "' does not exclude '" +
                         to_string(m, effect) + "'");
  }
}

// Contrast effects for a plain query: conjunctions over nonempty subsets of
// the effect's variables, smallest subsets first, values in range order,
// keeping those that exclude the effect.
std::vector<Formula> contrast_effect_candidates(const Model& m, const Formula& effect) {
  const std::vector<VarId> vars = effect.variables();
  std::vector<Formula> out;
  for_each_subset(vars, vars.size(), [&](const std::vector<VarId>& subset) {
    if (subset.empty()) return false;
    Conjunction c;
    for (auto v : subset) c.push_back({v, 0});
    while (true) {
      Formula f = Formula::of(c);
      if (implies_not(f, effect, m)) out.push_back(std::move(f));
      std::size_t i = c.size();
      while (i > 0) {
        --i;
        if (++c[i].value < m.variable(c[i].var).range.size()) break;
        c[i].value = 0;
        if (i == 0) return false;
      }
      if (c.empty()) return false;
    }
  });
  return out;
}

}  // namespace

void normalize_query(const Model& m, CauseQuery& q) {
  if (q.contrast.size() != q.event.size()) {
    throw QueryError(QueryErrorKind::InvalidContrast, "contrast must cover exactly the event variables");
  }
  validate_event(m, q.event);
  std::vector<std::size_t> order(q.event.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return q.event[a].var < q.event[b].var; });
  Conjunction event;
  std::vector<ValueId> contrast;
  for (auto i : order) {
    event.push_back(q.event[i]);
    contrast.push_back(q.contrast[i]);
  }
  for (std::size_t i = 0; i < event.size(); ++i) {
    const auto& var = m.variable(event[i].var);
    if (contrast[i] >= var.range.size()) {
      throw QueryError(QueryErrorKind::InvalidContrast, "contrast value out of range for '" + var.name + "'");
    }
    if (contrast[i] == event[i].value) {
      throw QueryError(QueryErrorKind::InvalidContrast,
                       "contrast for '" + var.name + "' equals the event value " +
                           var.range[event[i].value]);
    }
  }
  q.event = std::move(event);
  q.contrast = std::move(contrast);
}

Conjunction normalize_event(const Model& m, Conjunction event) {
  validate_event(m, event);
  std::sort(event.begin(), event.end());
  return event;
}

std::vector<std::vector<ValueId>> enumerate_contrasts(const Model& m, const Conjunction& event,
                                                      bool all_components_differ) {
  std::vector<std::vector<ValueId>> out;
  std::vector<ValueId> cur(event.size(), 0);
  if (event.empty()) return out;
  while (true) {
    bool keep = true;
    bool any_differs = false;
    for (std::size_t i = 0; i < event.size(); ++i) {
      if (cur[i] == event[i].value) {
        if (all_components_differ) keep = false;
      } else {
        any_differs = true;
      }
    }
    if (keep && any_differs) out.push_back(cur);
    std::size_t i = event.size();
    while (i > 0) {
      --i;
      if (++cur[i] < m.variable(event[i].var).range.size()) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
  }
}

CauseVerdict check_contrastive_cause(const Model& m, const Context& ctx, const CauseQuery& query,
                                     const SearchOptions& opts) {
  CauseQuery q = query;
  normalize_query(m, q);
  check_exclusive(m, q.effect, q.contrast_effect);
  const Assignment actual = solve(m, ctx);
  return decide(m, ctx, actual, q, opts);
}

std::vector<Witness> enumerate_witnesses(const Model& m, const Context& ctx, const CauseQuery& query,
                                         const SearchOptions& opts) {
  CauseQuery q = query;
  normalize_query(m, q);
  check_exclusive(m, q.effect, q.contrast_effect);
  const Assignment actual = solve(m, ctx);
  if (!event_holds(q.event, actual) || !q.effect.holds(actual)) return {};
  return Ac2Search{m, ctx, actual, opts}.all(q.event, q.contrast, q.contrast_effect);
}

PlainCauseVerdict check_plain_cause(const Model& m, const Context& ctx, const Conjunction& event_in,
                                    const Formula& effect, const SearchOptions& opts) {
  validate_event(m, event_in);
  Conjunction event = event_in;
  std::sort(event.begin(), event.end());

  PlainCauseVerdict result;
  const Assignment actual = solve(m, ctx);
  if (!event_holds(event, actual) || !effect.holds(actual)) {
    result.verdict.failed = CauseCondition::AC1;
    return result;
  }
  const auto candidates = contrast_effect_candidates(m, effect);
  result.verdict.failed = CauseCondition::AC2;
  for (const auto& contrast : enumerate_contrasts(m, event, true)) {
    for (const auto& phi_prime : candidates) {
      CauseQuery q{event, contrast, effect, phi_prime};
      CauseVerdict v = decide(m, ctx, actual, q, opts);
      if (v.is_cause) {
        result.verdict = std::move(v);
        result.contrast = contrast;
        result.contrast_effect = phi_prime;
        return result;
      }
      // Report AC3 if any candidate got that far.
      if (v.failed == CauseCondition::AC3) {
        result.verdict.failed = CauseCondition::AC3;
        result.verdict.smaller_cause = v.smaller_cause;
      }
    }
  }
  return result;
}

std::vector<CausePart> parts_of_cause(const Model& m, const Context& ctx, const Formula& effect,
                                      const SearchOptions& opts) {
  std::vector<CausePart> out;
  const Assignment actual = solve(m, ctx);
  if (!effect.holds(actual)) return out;
  for_each_subset(m.endogenous(), m.endogenous().size(), [&](const std::vector<VarId>& vars) {
    if (vars.size() < 2) return false;
    Conjunction event;
    for (auto v : vars) event.push_back({v, actual[v]});
    if (check_plain_cause(m, ctx, event, effect, opts).verdict.is_cause) {
      for (const auto& e : event) out.push_back({e, event});
    }
    return false;
  });
  return out;
}

}  // namespace hcm
