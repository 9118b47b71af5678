#include "hcm/formula.hpp"

#include <algorithm>

namespace hcm {

Formula Formula::primitive(VarId v, ValueId value) {
  Formula f;
  f.kind = Kind::Event;
  f.event = {v, value};
  return f;
}

Formula Formula::negate(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  Formula f;
  f.kind = Kind::And;
  f.children = std::move(fs);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.size() == 1) return std::move(fs.front());
  Formula f;
  f.kind = Kind::Or;
  f.children = std::move(fs);
  return f;
}

Formula Formula::of(const Conjunction& c) {
  std::vector<Formula> parts;
  for (const auto& e : c) parts.push_back(primitive(e.var, e.value));
  return conj(std::move(parts));
}

bool Formula::holds(const Assignment& a) const {
  switch (kind) {
    case Kind::Event: return a[event.var] == event.value;
    case Kind::Not: return !children.front().holds(a);
    case Kind::And:
      return std::all_of(children.begin(), children.end(),
                         [&](const Formula& c) { return c.holds(a); });
    case Kind::Or:
      return std::any_of(children.begin(), children.end(),
                         [&](const Formula& c) { return c.holds(a); });
  }
  return false;
}

namespace {

void collect(const Formula& f, std::vector<VarId>& out) {
  if (f.kind == Formula::Kind::Event) out.push_back(f.event.var);
  for (const auto& c : f.children) collect(c, out);
}

void emit(const Model& m, const Formula& f, std::string& out, int parent) {
  const int prec = f.kind == Formula::Kind::Or ? 1 : f.kind == Formula::Kind::And ? 2 : 3;
  const bool paren = prec <= parent && f.kind != Formula::Kind::Event;
  if (paren) out += '(';
  switch (f.kind) {
    case Formula::Kind::Event: out += describe(m, f.event.var, f.event.value); break;
    case Formula::Kind::Not:
      out += '!';
      if (f.children.front().kind == Formula::Kind::Event) {
        out += '(';
        emit(m, f.children.front(), out, 0);
        out += ')';
      } else {
        emit(m, f.children.front(), out, 2);
      }
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += f.kind == Formula::Kind::And ? " & " : " | ";
        emit(m, f.children[i], out, prec);
      }
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::vector<VarId> Formula::variables() const {
  std::vector<VarId> out;
  collect(*this, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool evaluate(const Model& m, const Context& ctx, const CausalFormula& f) {
  // Solving with the prefix held fixed is solve(intervene(m, prefix), ctx).
  return f.body.holds(solve(m, ctx, f.prefix));
}

bool evaluate(const Model& m, const Context& ctx, const Formula& body) {
  return body.holds(solve(m, ctx));
}

bool implies_not(const Formula& f1, const Formula& f2, const Model& m) {
  std::vector<VarId> vars = f1.variables();
  for (auto v : f2.variables()) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  Assignment a(std::vector<ValueId>(m.size(), 0));
  while (true) {
    if (f1.holds(a) && f2.holds(a)) return false;
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++a[vars[i]] < m.variable(vars[i]).range.size()) break;
      a[vars[i]] = 0;
    }
    if (i == vars.size()) return true;
  }
}

std::string to_string(const Model& m, const Formula& f) {
  std::string out;
  emit(m, f, out, 0);
  return out;
}

std::string to_string(const Model& m, const Conjunction& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " & ";
    out += describe(m, c[i].var, c[i].value);
  }
  return out;
}

std::string to_string(const Model& m, const Intervention& iv) {
  std::string out = "[";
  bool first = true;
  for (const auto& [v, value] : iv.entries()) {
    if (!first) out += ", ";
    first = false;
    out += m.variable(v).name + "<-" + m.variable(v).range[value];
  }
  return out + "]";
}

}  // namespace hcm
