#include "hcm/dsl.hpp"

#include <algorithm>

namespace hcm {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<const NamedContext*> by_name(const std::vector<NamedContext>& contexts) {
  std::vector<const NamedContext*> out;
  for (const auto& c : contexts) out.push_back(&c);
  std::sort(out.begin(), out.end(),
            [](const NamedContext* a, const NamedContext* b) { return a->name < b->name; });
  return out;
}

}  // namespace

bool ModelDocument::operator==(const ModelDocument& o) const {
  if (decl != o.decl || contexts.size() != o.contexts.size()) return false;
  const auto a = by_name(contexts), b = by_name(o.contexts);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(*a[i] == *b[i])) return false;
  }
  return true;
}

std::string serialize_model(const ModelDocument& doc) {
  const ModelDecl& d = doc.decl;
  std::string out = "version 1\nmodel " + d.name + " {\n";
  for (const auto& v : d.variables) {
    const char* kw = v.kind == VarKind::Exogenous ? "exo" : v.outcome ? "outcome" : "var";
    out += "  " + std::string(kw) + " " + v.name + " : {" + join(v.range, ", ") + "}";
    if (v.equation) out += " = " + to_source(*v.equation);
    out += "\n";
  }
  if (!d.utility.empty()) {
    std::vector<std::string> parts;
    for (const auto& [label, u] : d.utility) parts.push_back(label + ": " + to_string(u));
    out += "  utility { " + join(parts, ", ") + " }\n";
  }
  if (d.default_utility) out += "  default " + to_string(*d.default_utility) + "\n";
  out += "}\n";

  for (const auto* c : by_name(doc.contexts)) {
    std::vector<std::string> parts;
    for (const auto& [var, value] : c->values) parts.push_back(var + " = " + value);
    out += "context " + c->name + " { " + join(parts, ", ") + (parts.empty() ? "}\n" : " }\n");
  }
  return out;
}

}  // namespace hcm
