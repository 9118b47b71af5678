#include "hcm/harm.hpp"

#include <algorithm>

namespace hcm {

std::string_view to_string(HarmCondition c) {
  switch (c) {
    case HarmCondition::H1: return "H1";
    case HarmCondition::H2: return "H2";
    case HarmCondition::H3: return "H3";
    case HarmCondition::C1: return "C1";
    case HarmCondition::C2: return "C2";
    case HarmCondition::C3: return "C3";
  }
  return "?";
}

namespace {

VarId require_outcome(const Model& m) {
  if (!m.outcome()) throw QueryError(QueryErrorKind::NoOutcome, "model '" + m.name() + "' has no outcome variable");
  return *m.outcome();
}

// Sorts event and the optional fixed contrast together.
void normalize(const Model& m, HarmQuery& q) {
  const VarId outcome = require_outcome(m);
  for (const auto& e : q.event) {
    if (e.var == outcome) {
      throw QueryError(QueryErrorKind::OutcomeInEvent,
                       "outcome variable '" + m.variable(outcome).name + "' cannot be part of the event");
    }
  }
  if (q.only_contrast && q.only_contrast->size() != q.event.size()) {
    throw QueryError(QueryErrorKind::InvalidContrast, "contrast must cover exactly the event variables");
  }
  Conjunction sorted = normalize_event(m, q.event);
  if (q.only_contrast) {
    std::vector<ValueId> contrast;
    for (const auto& e : sorted) {
      const auto it = std::find(q.event.begin(), q.event.end(), e);
      const ValueId value = (*q.only_contrast)[static_cast<std::size_t>(it - q.event.begin())];
      if (value >= m.variable(e.var).range.size()) {
        throw QueryError(QueryErrorKind::InvalidContrast,
                         "contrast value out of range for '" + m.variable(e.var).name + "'");
      }
      if (value == e.value) {
        throw QueryError(QueryErrorKind::InvalidContrast,
                         "contrast repeats the event value of '" + m.variable(e.var).name + "'");
      }
      contrast.push_back(value);
    }
    q.only_contrast = std::move(contrast);
  }
  q.event = std::move(sorted);
}

Intervention to_intervention(const Conjunction& event, const std::vector<ValueId>& values) {
  Intervention iv;
  for (std::size_t i = 0; i < event.size(); ++i) iv.set(event[i].var, values[i]);
  return iv;
}

}  // namespace

HarmVerdict assess_harm(const Model& m, const Context& ctx, const HarmQuery& query) {
  HarmQuery q = query;
  normalize(m, q);
  const VarId outcome = *m.outcome();

  HarmVerdict v;
  v.event = q.event;
  const Assignment actual = solve(m, ctx);
  const ValueId o = actual[outcome];
  v.actual_outcome = o;
  v.event_holds = std::all_of(q.event.begin(), q.event.end(),
                              [&](const PrimitiveEvent& e) { return actual[e.var] == e.value; });
  const Rational& u_o = m.utility(o);
  const bool h1 = u_o < m.default_utility();

  std::vector<std::vector<ValueId>> causal_contrasts;
  std::vector<std::vector<ValueId>> counterfactual_contrasts;
  if (q.only_contrast) {
    causal_contrasts.push_back(*q.only_contrast);
    counterfactual_contrasts.push_back(*q.only_contrast);
  } else {
    // A contrast that repeats an event value always fails minimality, so
    // the causal conditions only need the fully flipped ones.
    causal_contrasts = enumerate_contrasts(m, q.event, true);
    counterfactual_contrasts = enumerate_contrasts(m, q.event, false);
  }

  bool h2_any = false;
  bool h2_h3_any = false;
  bool c2_any = false;
  if (v.event_holds) {
    for (const auto& contrast : causal_contrasts) {
      const ValueId o2 = solve(m, ctx, to_intervention(q.event, contrast))[outcome];
      for (ValueId o1 = 0; o1 < m.variable(outcome).range.size(); ++o1) {
        if (!(u_o < m.utility(o1))) continue;
        CauseQuery cq{q.event, contrast, Formula::primitive(outcome, o), Formula::primitive(outcome, o1)};
        const CauseVerdict cause = check_contrastive_cause(m, ctx, cq, q.search);
        if (!cause.is_cause) continue;
        h2_any = true;
        const bool h3 = u_o <= m.utility(o2);
        if (h3) h2_h3_any = true;
        if (!h1) continue;
        const HarmCertificate cert{o, o1, o2, contrast, *cause.witness};
        if (!v.harm_certificate) v.harm_certificate = cert;
        if (h3 && !v.strict_certificate) v.strict_certificate = cert;
        if (m.default_utility() <= m.utility(o1) && !v.below_default_certificate) {
          v.below_default_certificate = cert;
        }
      }
    }
    for (const auto& contrast : counterfactual_contrasts) {
      const ValueId o2 = solve(m, ctx, to_intervention(q.event, contrast))[outcome];
      if (o2 != o) c2_any = true;
      if (u_o < m.utility(o2)) {
        v.counterfactual_certificate = HarmCertificate{o, o2, o2, contrast, Witness{}};
        break;
      }
    }
  }

  v.harms = v.harm_certificate.has_value();
  v.strictly_harms = v.strict_certificate.has_value();
  v.below_default = v.below_default_certificate.has_value();
  v.counterfactually_harms = v.counterfactual_certificate.has_value();

  if (!h1) v.failed.push_back(HarmCondition::H1);
  if (!h2_any) v.failed.push_back(HarmCondition::H2);
  if (h2_any && !h2_h3_any) v.failed.push_back(HarmCondition::H3);
  if (!v.event_holds) v.failed.push_back(HarmCondition::C1);
  if (v.event_holds && !c2_any) v.failed.push_back(HarmCondition::C2);
  if (c2_any && !v.counterfactually_harms) v.failed.push_back(HarmCondition::C3);
  return v;
}

HarmVerdict check_harm(const Model& m, const Context& ctx, const HarmQuery& q) {
  return assess_harm(m, ctx, q);
}

HarmVerdict check_strict_harm(const Model& m, const Context& ctx, const HarmQuery& q) {
  return assess_harm(m, ctx, q);
}

HarmVerdict check_counterfactual_harm(const Model& m, const Context& ctx, const HarmQuery& q) {
  return assess_harm(m, ctx, q);
}

bool check_below_default(const Model& m, const Context& ctx, const HarmQuery& q) {
  return assess_harm(m, ctx, q).below_default;
}

bool check_alternative_strictly_harms(const Model& m, const Context& ctx, const HarmQuery& query,
                                      const std::vector<ValueId>& alternative) {
  HarmQuery q = query;
  q.only_contrast = alternative;
  normalize(m, q);
  const std::vector<ValueId> alt = *q.only_contrast;

  HarmQuery flipped;
  flipped.search = q.search;
  for (std::size_t i = 0; i < q.event.size(); ++i) flipped.event.push_back({q.event[i].var, alt[i]});
  std::vector<ValueId> original;
  for (const auto& e : q.event) original.push_back(e.value);
  flipped.only_contrast = std::move(original);

  const Model world = intervene(m, to_intervention(q.event, alt));
  return assess_harm(world, ctx, flipped).strictly_harms;
}

}  // namespace hcm
