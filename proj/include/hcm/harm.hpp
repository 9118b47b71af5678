#pragma once

#include "hcm/causality.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcm {

enum class HarmCondition { H1, H2, H3, C1, C2, C3 };
std::string_view to_string(HarmCondition c);

// Event X = x against the model's outcome, utility, and default.
struct HarmQuery {
  Conjunction event;
  SearchOptions search;
  // Restrict every search to this contrast (parallel to event).
  std::optional<std::vector<ValueId>> only_contrast;
};

struct HarmCertificate {
  ValueId o = 0;         // actual outcome
  ValueId o_prime = 0;   // outcome the contrast causes instead
  ValueId o_double_prime = 0;  // outcome under the contrast alone
  std::vector<ValueId> contrast;  // parallel to the normalized event
  Witness witness;       // empty for counterfactual certificates
};

struct HarmVerdict {
  Conjunction event;  // normalized (sorted by variable)
  bool event_holds = false;
  ValueId actual_outcome = 0;

  bool harms = false;
  bool strictly_harms = false;
  bool counterfactually_harms = false;
  bool below_default = false;

  // First certificate in search order for each flag that holds.
  std::optional<HarmCertificate> harm_certificate;
  std::optional<HarmCertificate> strict_certificate;
  std::optional<HarmCertificate> below_default_certificate;
  std::optional<HarmCertificate> counterfactual_certificate;

  std::vector<HarmCondition> failed;
};

// Computes every flag in one pass. Contrasts are tried in range order, then
// alternative outcomes o' in range order.
HarmVerdict assess_harm(const Model& m, const Context& ctx, const HarmQuery& q);

HarmVerdict check_harm(const Model& m, const Context& ctx, const HarmQuery& q);
HarmVerdict check_strict_harm(const Model& m, const Context& ctx, const HarmQuery& q);
HarmVerdict check_counterfactual_harm(const Model& m, const Context& ctx, const HarmQuery& q);
bool check_below_default(const Model& m, const Context& ctx, const HarmQuery& q);

// Whether X = x' rather than X = x would have strictly harmed: strict harm of
// the event X = x' with the fixed contrast x, evaluated in M_{X <- x'}.
bool check_alternative_strictly_harms(const Model& m, const Context& ctx, const HarmQuery& q,
                                      const std::vector<ValueId>& alternative);

}  // namespace hcm
