#include "hcm/query.hpp"

#include <chrono>
#include <stdexcept>

namespace hcm {

using nlohmann::ordered_json;

namespace {

std::string required(const QueryExpression& q, const std::string& key) {
  auto v = q.arg(key);
  if (!v) throw std::invalid_argument(std::string(to_string(q.kind)) + " query needs " + key + "=");
  return *v;
}

// Query text that names unknown variables or values is a query error, not a
// malformed file.
template <class F>
auto bind(const Model& m, F&& parse) {
  try {
    return parse();
  } catch (const DslError& e) {
    if (e.diagnostic().kind != DiagnosticKind::SemanticError) throw;
    const bool unknown = !m.find(e.diagnostic().token) && e.diagnostic().message.starts_with("unknown");
    throw QueryError(unknown ? QueryErrorKind::UnknownVariable : QueryErrorKind::InvalidEvent,
                     e.diagnostic().message);
  }
}

Formula body_of(const Model& m, const std::string& text) {
  CausalFormula f = bind(m, [&] { return parse_formula(text, m); });
  if (!f.prefix.empty()) {
    Diagnostic d;
    d.kind = DiagnosticKind::ParseError;
    d.message = "effect cannot carry an intervention prefix";
    d.token = "[";
    throw DslError(std::move(d));
  }
  return f.body;
}

std::string label(const Model& m, VarId v, ValueId x) { return m.variable(v).range[x]; }

ordered_json values_of(const Model& m, const Conjunction& event, const std::vector<ValueId>& values) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < event.size(); ++i) {
    out[m.variable(event[i].var).name] = label(m, event[i].var, values[i]);
  }
  return out;
}

ordered_json witness_json(const Model& m, const Witness& w, ordered_json& cert) {
  ordered_json vars = ordered_json::array(), vals = ordered_json::array();
  for (std::size_t i = 0; i < w.vars.size(); ++i) {
    vars.push_back(m.variable(w.vars[i]).name);
    vals.push_back(label(m, w.vars[i], w.values[i]));
  }
  cert["witnessVars"] = vars;
  cert["witnessValues"] = vals;
  return cert;
}

std::string witness_text(const Model& m, const Witness& w) {
  if (w.vars.empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < w.vars.size(); ++i) {
    if (i) out += ", ";
    out += describe(m, w.vars[i], w.values[i]);
  }
  return out + "}";
}

std::string contrast_text(const Model& m, const Conjunction& event, const std::vector<ValueId>& c) {
  Conjunction alt = event;
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i].value = c[i];
  return to_string(m, alt);
}

std::string flag_line(const std::map<std::string, bool>& flags, const std::vector<std::string>& order) {
  std::string out;
  for (const auto& k : order) {
    if (!out.empty()) out += " ";
    out += k + "=" + (flags.at(k) ? "true" : "false");
  }
  return out + "\n";
}

void cause_certificate(const Model& m, const Conjunction& event, const std::vector<ValueId>& contrast,
                       const CauseVerdict& v, QueryResult& r) {
  ordered_json cert = ordered_json::object();
  witness_json(m, v.witness ? *v.witness : Witness{}, cert);
  cert["contrast"] = values_of(m, event, contrast);
  r.report["certificate"] = v.is_cause ? cert : ordered_json(nullptr);
  r.report["failed"] = ordered_json::array();
  if (v.failed) r.report["failed"].push_back(std::string(to_string(*v.failed)));
  if (v.is_cause) {
    r.text += "witness: " + witness_text(m, *v.witness) + "\n";
    r.text += "contrast: " + contrast_text(m, event, contrast) + "\n";
  } else if (v.failed) {
    r.text += "failed: " + std::string(to_string(*v.failed)) + "\n";
    if (!v.smaller_cause.empty()) r.text += "smaller cause: " + to_string(m, v.smaller_cause) + "\n";
  }
}

void run_solve(const Model& m, const Context& ctx, const QueryExpression& q, QueryResult& r) {
  Intervention iv;
  if (auto text = q.arg("do")) {
    iv = bind(m, [&] { return parse_intervention(*text, m); });
  }
  const Assignment a = solve(m, ctx, iv);
  ordered_json out = ordered_json::object();
  for (VarId v : m.topological_order()) {
    out[m.variable(v).name] = label(m, v, a[v]);
    r.text += describe(m, v, a[v]) + "\n";
  }
  r.holds = true;
  r.report["assignment"] = out;
}

void run_evaluate(const Model& m, const Context& ctx, const QueryExpression& q, QueryResult& r) {
  const CausalFormula f = bind(m, [&] { return parse_formula(required(q, "formula"), m); });
  r.holds = evaluate(m, ctx, f);
  r.flags["holds"] = r.holds;
  r.text += flag_line(r.flags, {"holds"});
}

void run_cause(const Model& m, const Context& ctx, const QueryExpression& q, const SearchOptions& search,
               const QueryOptions& opts, QueryResult& r) {
  CauseQuery cq;
  cq.event = bind(m, [&] { return parse_event(required(q, "event"), m); });
  cq.contrast = bind(m, [&] { return parse_contrast(required(q, "contrast"), m, cq.event); });
  cq.effect = body_of(m, required(q, "effect"));
  cq.contrast_effect = body_of(m, required(q, "contrast_effect"));
  normalize_query(m, cq);
  const CauseVerdict v = check_contrastive_cause(m, ctx, cq, search);
  r.holds = v.is_cause;
  r.flags["isCause"] = v.is_cause;
  r.text += flag_line(r.flags, {"isCause"});
  cause_certificate(m, cq.event, cq.contrast, v, r);
  if (opts.all_witnesses) {
    ordered_json all = ordered_json::array();
    for (const auto& w : enumerate_witnesses(m, ctx, cq, search)) {
      ordered_json cert = ordered_json::object();
      all.push_back(witness_json(m, w, cert));
      r.text += "witness: " + witness_text(m, w) + "\n";
    }
    r.report["witnesses"] = all;
  }
}

void run_plain(const Model& m, const Context& ctx, const QueryExpression& q, const SearchOptions& search,
               QueryResult& r) {
  const Conjunction event =
      normalize_event(m, bind(m, [&] { return parse_event(required(q, "event"), m); }));
  const Formula effect = body_of(m, required(q, "effect"));
  const PlainCauseVerdict v = check_plain_cause(m, ctx, event, effect, search);
  r.holds = v.verdict.is_cause;
  r.flags["isCause"] = r.holds;
  r.text += flag_line(r.flags, {"isCause"});
  cause_certificate(m, event, v.contrast, v.verdict, r);
  if (v.contrast_effect) {
    const std::string ce = to_string(m, *v.contrast_effect);
    r.report["certificate"]["contrastEffect"] = ce;
    r.text += "contrast effect: " + ce + "\n";
  }
}

ordered_json harm_certificate_json(const Model& m, const Conjunction& event, const HarmCertificate& c) {
  const VarId o = *m.outcome();
  ordered_json cert = ordered_json::object();
  witness_json(m, c.witness, cert);
  cert["contrast"] = values_of(m, event, c.contrast);
  cert["o"] = label(m, o, c.o);
  cert["oPrime"] = label(m, o, c.o_prime);
  cert["oDoublePrime"] = label(m, o, c.o_double_prime);
  cert["utilities"] = {{"o", to_string(m.utility(c.o))},
                       {"oPrime", to_string(m.utility(c.o_prime))},
                       {"oDoublePrime", to_string(m.utility(c.o_double_prime))},
                       {"default", to_string(m.default_utility())}};
  return cert;
}

std::string harm_certificate_text(const Model& m, const Conjunction& event, const HarmCertificate& c) {
  const VarId o = *m.outcome();
  return "contrast: " + contrast_text(m, event, c.contrast) + "\nwitness: " + witness_text(m, c.witness) +
         "\no: " + label(m, o, c.o) + " (u=" + to_string(m.utility(c.o)) + ")\no': " +
         label(m, o, c.o_prime) + " (u=" + to_string(m.utility(c.o_prime)) + ")\no'': " +
         label(m, o, c.o_double_prime) + " (u=" + to_string(m.utility(c.o_double_prime)) + ")\n";
}

void run_harm(const Model& m, const Context& ctx, const QueryExpression& q, const SearchOptions& search,
              QueryResult& r) {
  HarmQuery hq;
  hq.search = search;
  hq.event = bind(m, [&] { return parse_event(required(q, "event"), m); });
  if (auto c = q.arg("contrast")) hq.only_contrast = bind(m, [&] { return parse_contrast(*c, m, hq.event); });
  const HarmVerdict v = assess_harm(m, ctx, hq);

  r.flags = {{"harms", v.harms},
             {"strictlyHarms", v.strictly_harms},
             {"counterfactuallyHarms", v.counterfactually_harms},
             {"belowDefault", v.below_default}};
  const std::string flag = q.arg("flag").value_or("harm");
  const std::optional<HarmCertificate>* cert = nullptr;
  if (flag == "harm") {
    r.holds = v.harms;
    cert = &v.harm_certificate;
  } else if (flag == "strict") {
    r.holds = v.strictly_harms;
    cert = &v.strict_certificate;
  } else if (flag == "counterfactual") {
    r.holds = v.counterfactually_harms;
    cert = &v.counterfactual_certificate;
  } else if (flag == "below-default") {
    r.holds = v.below_default;
    cert = &v.below_default_certificate;
  } else {
    throw std::invalid_argument("unknown harm flag '" + flag + "'");
  }
  r.text += flag_line(r.flags, {"harms", "strictlyHarms", "counterfactuallyHarms", "belowDefault"});
  r.report["certificate"] = *cert ? harm_certificate_json(m, v.event, **cert) : ordered_json(nullptr);
  if (*cert) r.text += harm_certificate_text(m, v.event, **cert);
  r.report["failed"] = ordered_json::array();
  std::string failed;
  for (auto c : v.failed) {
    r.report["failed"].push_back(std::string(to_string(c)));
    failed += (failed.empty() ? "" : " ") + std::string(to_string(c));
  }
  if (!failed.empty()) r.text += "failed: " + failed + "\n";
}

void run_alternative(const Model& m, const Context& ctx, const QueryExpression& q, const SearchOptions& search,
                     QueryResult& r) {
  HarmQuery hq;
  hq.search = search;
  hq.event = bind(m, [&] { return parse_event(required(q, "event"), m); });
  const auto alt = bind(m, [&] { return parse_contrast(required(q, "alternative"), m, hq.event); });
  r.holds = check_alternative_strictly_harms(m, ctx, hq, alt);
  r.flags["alternativeStrictlyHarms"] = r.holds;
  r.text += flag_line(r.flags, {"alternativeStrictlyHarms"});
}

}  // namespace

Context resolve_context(const ModelDocument& doc, const QueryExpression& q) {
  if (auto name = q.arg("context")) return doc.context(*name);
  if (doc.has_context("main")) return doc.context("main");
  if (doc.contexts.size() == 1) return doc.contexts.front().resolved;
  if (doc.model.exogenous().empty()) return Context::from_values(doc.model, {});
  throw QueryError(QueryErrorKind::UnknownContext,
                   doc.contexts.empty() ? "model declares no context" : "several contexts; pass context=");
}

QueryResult run_query(const ModelDocument& doc, const QueryExpression& q, const QueryOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Model m = doc.model;
  if (auto d = q.arg("default")) {
    auto value = parse_rational(*d);
    if (!value) throw std::invalid_argument("malformed default '" + *d + "'");
    m = m.with_default(*value);
  }
  SearchOptions search;
  if (auto n = q.arg("max_witness")) {
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(*n, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != n->size()) throw std::invalid_argument("malformed max_witness '" + *n + "'");
    search.max_witness = value;
  }
  const Context ctx = resolve_context(doc, q);

  QueryResult r;
  r.report["query"] = to_string(q);
  r.report["model"] = doc.decl.name;
  switch (q.kind) {
    case QueryExpression::Kind::Solve: run_solve(m, ctx, q, r); break;
    case QueryExpression::Kind::Evaluate: run_evaluate(m, ctx, q, r); break;
    case QueryExpression::Kind::Cause: run_cause(m, ctx, q, search, opts, r); break;
    case QueryExpression::Kind::PlainCause: run_plain(m, ctx, q, search, r); break;
    case QueryExpression::Kind::Harm: run_harm(m, ctx, q, search, r); break;
    case QueryExpression::Kind::Alternative: run_alternative(m, ctx, q, search, r); break;
  }
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : r.flags) flags[k] = v;
  r.report["flags"] = flags;
  if (!r.report.contains("failed")) r.report["failed"] = ordered_json::array();
  r.report["engineVersion"] = kEngineVersion;
  const auto us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  r.report["timing"] = {{"microseconds", us}};
  return r;
}

}  // namespace hcm
