#include "hcm/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hcm {

std::optional<ValueId> Variable::find_value(std::string_view label) const {
  for (std::size_t i = 0; i < range.size(); ++i) {
    if (range[i] == label) return static_cast<ValueId>(i);
  }
  return std::nullopt;
}

bool Variable::integer_range() const {
  return std::all_of(range.begin(), range.end(), is_integer_label);
}

std::string_view to_string(ModelErrorKind kind) {
  switch (kind) {
    case ModelErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ModelErrorKind::UndefinedVariable: return "UndefinedVariable";
    case ModelErrorKind::EquationNotTotal: return "EquationNotTotal";
    case ModelErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case ModelErrorKind::CyclicModel: return "CyclicModel";
    case ModelErrorKind::UtilityIncomplete: return "UtilityIncomplete";
    case ModelErrorKind::DefaultOutOfRange: return "DefaultOutOfRange";
    case ModelErrorKind::InvalidRange: return "InvalidRange";
    case ModelErrorKind::InvalidDeclaration: return "InvalidDeclaration";
    case ModelErrorKind::ModelTooLarge: return "ModelTooLarge";
    case ModelErrorKind::ContextIncomplete: return "ContextIncomplete";
    case ModelErrorKind::InvalidIntervention: return "InvalidIntervention";
  }
  return "ModelError";
}

ModelError::ModelError(ModelErrorKind kind, std::string entity, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      entity_(std::move(entity)) {}

namespace {

[[noreturn]] void fail(ModelErrorKind kind, const std::string& entity, const std::string& msg) {
  throw ModelError(kind, entity, msg);
}

const std::string kTrueLabel = "1";
const std::string kFalseLabel = "0";

// Evaluates an equation body for one joint setting of its referenced
// variables. `slot` maps each referenced name to its position in `labels`.
class BodyEvaluator {
 public:
  explicit BodyEvaluator(const std::unordered_map<std::string, std::size_t>& slot) : slot_(slot) {}

  void bind(const std::vector<const std::string*>& labels) { labels_ = &labels; }

  const std::string& value(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Literal: return e.value;
      case Expr::Kind::VarRef: return label(e.name);
      case Expr::Kind::Case:
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
          if (truth(e.operands[i])) return e.arms[i];
        }
        return e.arms.back();
      default: return truth(e) ? kTrueLabel : kFalseLabel;
    }
  }

  bool truth(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Literal:
      case Expr::Kind::VarRef:
      case Expr::Kind::Case: return value(e) != kFalseLabel;
      case Expr::Kind::Equals: return label(e.name) == e.value;
      case Expr::Kind::NotEquals: return label(e.name) != e.value;
      case Expr::Kind::Not: return !truth(e.operands.front());
      case Expr::Kind::And:
        return std::all_of(e.operands.begin(), e.operands.end(),
                           [this](const Expr& c) { return truth(c); });
      case Expr::Kind::Or:
        return std::any_of(e.operands.begin(), e.operands.end(),
                           [this](const Expr& c) { return truth(c); });
    }
    return false;
  }

 private:
  const std::string& label(const std::string& name) const { return *(*labels_)[slot_.at(name)]; }

  const std::unordered_map<std::string, std::size_t>& slot_;
  const std::vector<const std::string*>* labels_ = nullptr;
};

}  // namespace

namespace detail {

class ModelBuilder {
 public:
  ModelBuilder(const ModelDecl& decl, const Limits& limits) : decl_(decl), limits_(limits) {}

  Model build(Model m) {
    declare_variables(m);
    compile_equations(m);
    order_topologically(m);
    attach_utility(m);
    collect_warnings(m);
    return m;
  }

 private:
  void declare_variables(Model& m) {
    std::size_t endogenous = 0;
    for (const auto& v : decl_.variables) {
      if (v.name.empty()) fail(ModelErrorKind::InvalidDeclaration, v.name, "variable with empty name");
      if (index_.count(v.name)) {
        fail(ModelErrorKind::DuplicateVariable, v.name, "variable '" + v.name + "' declared twice");
      }
      if (v.range.empty()) {
        fail(ModelErrorKind::InvalidRange, v.name, "variable '" + v.name + "' has an empty range");
      }
      if (v.range.size() > limits_.max_range) {
        fail(ModelErrorKind::ModelTooLarge, v.name,
             "range of '" + v.name + "' has " + std::to_string(v.range.size()) +
                 " values (limit " + std::to_string(limits_.max_range) + ")");
      }
      std::set<std::string> seen;
      for (const auto& label : v.range) {
        if (label.empty() || !seen.insert(label).second) {
          fail(ModelErrorKind::InvalidRange, v.name,
               "range of '" + v.name + "' repeats value '" + label + "'");
        }
      }
      if (v.kind == VarKind::Exogenous) {
        if (v.equation) {
          fail(ModelErrorKind::InvalidDeclaration, v.name,
               "exogenous variable '" + v.name + "' cannot have an equation");
        }
        if (v.outcome) {
          fail(ModelErrorKind::InvalidDeclaration, v.name,
               "outcome variable '" + v.name + "' must be endogenous");
        }
      } else {
        ++endogenous;
        if (!v.equation) {
          fail(ModelErrorKind::InvalidDeclaration, v.name,
               "endogenous variable '" + v.name + "' has no equation");
        }
      }
      const VarId id{static_cast<std::uint32_t>(m.variables_.size())};
      index_.emplace(v.name, id);
      m.variables_.push_back(Variable{v.name, v.kind, v.range});
      (v.kind == VarKind::Exogenous ? m.exogenous_ : m.endogenous_).push_back(id);
      if (v.outcome) {
        if (m.outcome_) {
          fail(ModelErrorKind::InvalidDeclaration, v.name,
               "second outcome variable '" + v.name + "'; only one is allowed");
        }
        m.outcome_ = id;
      }
    }
    if (endogenous > limits_.max_endogenous) {
      fail(ModelErrorKind::ModelTooLarge, decl_.name,
           std::to_string(endogenous) + " endogenous variables (limit " +
               std::to_string(limits_.max_endogenous) + ")");
    }
    m.name_ = decl_.name;
    m.decl_ = decl_;
    m.limits_ = limits_;
    m.equations_.resize(m.variables_.size());
  }

  // Static checks that do not need enumeration.
  void check_body(const Model& m, const Variable& target, const Expr& e, bool boolean) const {
    auto lookup = [&](const std::string& name) -> const Variable& {
      auto it = index_.find(name);
      if (it == index_.end()) {
        fail(ModelErrorKind::UndefinedVariable, name,
             "equation for '" + target.name + "' references undeclared variable '" + name + "'");
      }
      if (name == target.name) {
        fail(ModelErrorKind::CyclicModel, name, "equation for '" + name + "' references itself");
      }
      return m.variable(it->second);
    };
    switch (e.kind) {
      case Expr::Kind::Literal:
        if (boolean && !is_integer_label(e.value)) {
          fail(ModelErrorKind::EquationNotTotal, target.name,
               "symbolic value '" + e.value + "' used as a Boolean in the equation for '" +
                   target.name + "'");
        }
        if (!boolean && !target.find_value(e.value)) {
          fail(ModelErrorKind::ValueOutOfRange, target.name,
               "value '" + e.value + "' is not in the range of '" + target.name + "'");
        }
        break;
      case Expr::Kind::VarRef: {
        const auto& v = lookup(e.name);
        if (boolean && !v.integer_range()) {
          fail(ModelErrorKind::EquationNotTotal, target.name,
               "variable '" + v.name + "' has a symbolic range and cannot be used as a Boolean in "
               "the equation for '" + target.name + "'");
        }
        break;
      }
      case Expr::Kind::Equals:
      case Expr::Kind::NotEquals: {
        const auto& v = lookup(e.name);
        if (!v.find_value(e.value)) {
          fail(ModelErrorKind::ValueOutOfRange, v.name,
               "value '" + e.value + "' is not in the range of '" + v.name + "'");
        }
        break;
      }
      case Expr::Kind::Not:
      case Expr::Kind::And:
      case Expr::Kind::Or:
        if (e.operands.empty() || (e.kind == Expr::Kind::Not && e.operands.size() != 1)) {
          fail(ModelErrorKind::InvalidDeclaration, target.name,
               "malformed Boolean expression in the equation for '" + target.name + "'");
        }
        for (const auto& c : e.operands) check_body(m, target, c, true);
        break;
      case Expr::Kind::Case:
        if (e.arms.size() != e.operands.size() + 1) {
          fail(ModelErrorKind::EquationNotTotal, target.name,
               "case expression for '" + target.name + "' lacks an else arm");
        }
        for (const auto& c : e.operands) check_body(m, target, c, true);
        for (const auto& arm : e.arms) {
          if (boolean ? !is_integer_label(arm) : !target.find_value(arm)) {
            fail(ModelErrorKind::ValueOutOfRange, target.name,
                 "case arm value '" + arm + "' is not in the range of '" + target.name + "'");
          }
        }
        break;
    }
  }

  void compile_equations(Model& m) {
    for (std::size_t i = 0; i < decl_.variables.size(); ++i) {
      const auto& d = decl_.variables[i];
      if (d.kind != VarKind::Endogenous) continue;
      const VarId target{static_cast<std::uint32_t>(i)};
      m.equations_[i] = compile(m, target, *d.equation);
    }
  }

  Equation compile(const Model& m, VarId target, const Expr& body) {
    const Variable& tv = m.variable(target);
    check_body(m, tv, body, false);

    std::vector<VarId> refs;
    for (const auto& name : referenced_names(body)) refs.push_back(index_.at(name));
    std::sort(refs.begin(), refs.end());

    std::unordered_map<std::string, std::size_t> slot;
    std::size_t table_size = 1;
    std::vector<std::size_t> radix;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      slot.emplace(m.variable(refs[i]).name, i);
      radix.push_back(m.variable(refs[i]).range.size());
      table_size *= radix.back();
      if (table_size > limits_.max_table) {
        fail(ModelErrorKind::ModelTooLarge, tv.name,
             "equation for '" + tv.name + "' reads too many variables");
      }
    }

    // Full table over syntactic references, first reference most significant.
    std::vector<ValueId> full(table_size);
    std::vector<std::size_t> digits(refs.size(), 0);
    std::vector<const std::string*> labels(refs.size());
    BodyEvaluator eval(slot);
    eval.bind(labels);
    for (std::size_t idx = 0; idx < table_size; ++idx) {
      for (std::size_t i = 0; i < refs.size(); ++i) labels[i] = &m.variable(refs[i]).range[digits[i]];
      const std::string& result = eval.value(body);
      auto value = tv.find_value(result);
      if (!value) {
        std::string where;
        for (std::size_t i = 0; i < refs.size(); ++i) {
          where += (i ? ", " : "") + m.variable(refs[i]).name + "=" + *labels[i];
        }
        fail(ModelErrorKind::EquationNotTotal, tv.name,
             "equation for '" + tv.name + "' yields '" + result + "', outside its range, when " +
                 (where.empty() ? std::string("evaluated") : where));
      }
      full[idx] = *value;
      for (std::size_t i = refs.size(); i-- > 0;) {
        if (++digits[i] < radix[i]) break;
        digits[i] = 0;
      }
    }

    std::vector<std::size_t> full_strides(refs.size(), 1);
    for (std::size_t i = refs.size(); i-- > 1;) full_strides[i - 1] = full_strides[i] * radix[i];

    // Keep only references the value actually varies with.
    std::vector<std::size_t> effective;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      bool varies = false;
      for (std::size_t idx = 0; idx < table_size && !varies; ++idx) {
        if ((idx / full_strides[i]) % radix[i] != 0) continue;
        for (std::size_t k = 1; k < radix[i] && !varies; ++k) {
          varies = full[idx + k * full_strides[i]] != full[idx];
        }
      }
      if (varies) effective.push_back(i);
    }

    Equation eq;
    eq.target = target;
    eq.source = body;
    std::size_t projected = 1;
    for (auto i : effective) {
      eq.parents.push_back(refs[i]);
      projected *= radix[i];
    }
    eq.strides.assign(effective.size(), 1);
    for (std::size_t j = effective.size(); j-- > 1;) {
      eq.strides[j - 1] = eq.strides[j] * radix[effective[j]];
    }
    eq.table.resize(projected);
    for (std::size_t idx = 0; idx < projected; ++idx) {
      std::size_t full_idx = 0;
      for (std::size_t j = 0; j < effective.size(); ++j) {
        const std::size_t digit = (idx / eq.strides[j]) % radix[effective[j]];
        full_idx += digit * full_strides[effective[j]];
      }
      eq.table[idx] = full[full_idx];
    }
    return eq;
  }

  void order_topologically(Model& m) {
    const std::size_t n = m.variables_.size();
    std::vector<std::vector<std::uint32_t>> children(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t y = 0; y < n; ++y) {
      if (!m.equations_[y]) continue;
      for (auto p : m.equations_[y]->parents) {
        children[p.index].push_back(static_cast<std::uint32_t>(y));
        ++indegree[y];
      }
    }
    // Exogenous first (they have no parents), then smallest index first.
    std::set<std::pair<int, std::uint32_t>> ready;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (indegree[v] == 0) {
        ready.emplace(m.variables_[v].kind == VarKind::Exogenous ? 0 : 1, v);
      }
    }
    while (!ready.empty()) {
      const std::uint32_t v = ready.begin()->second;
      ready.erase(ready.begin());
      m.topo_.push_back(VarId{v});
      for (auto c : children[v]) {
        if (--indegree[c] == 0) ready.emplace(1, c);
      }
    }
    if (m.topo_.size() == n) return;

    // Report one concrete cycle by walking parents among the unresolved nodes.
    std::vector<bool> done(n, false);
    for (auto v : m.topo_) done[v.index] = true;
    std::uint32_t start = 0;
    while (done[start]) ++start;
    std::vector<std::uint32_t> path;
    std::vector<int> pos(n, -1);
    std::uint32_t cur = start;
    while (pos[cur] < 0) {
      pos[cur] = static_cast<int>(path.size());
      path.push_back(cur);
      for (auto p : m.equations_[cur]->parents) {
        if (!done[p.index]) {
          cur = p.index;
          break;
        }
      }
    }
    std::string cycle;
    for (std::size_t i = static_cast<std::size_t>(pos[cur]); i < path.size(); ++i) {
      cycle = m.variables_[path[i]].name + (cycle.empty() ? "" : " -> ") + cycle;
    }
    cycle = m.variables_[cur].name + " -> " + cycle;
    fail(ModelErrorKind::CyclicModel, m.variables_[cur].name, "dependency cycle " + cycle);
  }

  void attach_utility(Model& m) {
    if (!m.outcome_) {
      if (!decl_.utility.empty() || decl_.default_utility) {
        fail(ModelErrorKind::InvalidDeclaration, "utility",
             "utility or default given but no outcome variable is declared");
      }
      return;
    }
    const Variable& o = m.variable(*m.outcome_);
    std::vector<std::optional<Rational>> table(o.range.size());
    for (const auto& [label, u] : decl_.utility) {
      auto value = o.find_value(label);
      if (!value) {
        fail(ModelErrorKind::ValueOutOfRange, "utility",
             "utility given for '" + label + "', which is not a value of outcome '" + o.name + "'");
      }
      if (table[*value]) {
        fail(ModelErrorKind::InvalidDeclaration, "utility", "utility for '" + label + "' given twice");
      }
      if (!in_unit_interval(u)) {
        fail(ModelErrorKind::ValueOutOfRange, "utility",
             "utility of '" + label + "' is " + to_string(u) + ", outside [0,1]");
      }
      table[*value] = u;
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i]) {
        fail(ModelErrorKind::UtilityIncomplete, "utility",
             "no utility for outcome value '" + o.range[i] + "'");
      }
      m.utility_.push_back(*table[i]);
    }
    if (!decl_.default_utility) {
      fail(ModelErrorKind::DefaultOutOfRange, "default", "no default utility declared");
    }
    if (!in_unit_interval(*decl_.default_utility)) {
      fail(ModelErrorKind::DefaultOutOfRange, "default",
           "default utility " + to_string(*decl_.default_utility) + " is outside [0,1]");
    }
    m.default_ = *decl_.default_utility;
  }

  void collect_warnings(Model& m) {
    std::vector<bool> read(m.variables_.size(), false);
    for (const auto& eq : m.equations_) {
      if (!eq) continue;
      for (auto p : eq->parents) read[p.index] = true;
    }
    for (auto u : m.exogenous_) {
      if (!read[u.index]) {
        m.warnings_.push_back("exogenous variable '" + m.variable(u).name +
                              "' is not read by any equation");
      }
    }
  }

  const ModelDecl& decl_;
  const Limits& limits_;
  std::unordered_map<std::string, VarId> index_;
};

}  // namespace detail

std::optional<VarId> Model::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return VarId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

VarId Model::require(std::string_view name) const {
  if (auto v = find(name)) return *v;
  fail(ModelErrorKind::UndefinedVariable, std::string(name),
       "unknown variable '" + std::string(name) + "'");
}

const Equation& Model::equation(VarId v) const {
  if (v.index >= equations_.size() || !equations_[v.index]) {
    throw std::out_of_range("no equation for variable " + std::to_string(v.index));
  }
  return *equations_[v.index];
}

Model Model::with_utilities(std::vector<Rational> utility, Rational default_utility) const {
  if (!outcome_) {
    fail(ModelErrorKind::InvalidDeclaration, "utility", "model has no outcome variable");
  }
  if (utility.size() != utility_.size()) {
    fail(ModelErrorKind::UtilityIncomplete, "utility", "utility table size mismatch");
  }
  for (const auto& u : utility) {
    if (!in_unit_interval(u)) {
      fail(ModelErrorKind::ValueOutOfRange, "utility", "utility " + to_string(u) + " outside [0,1]");
    }
  }
  if (!in_unit_interval(default_utility)) {
    fail(ModelErrorKind::DefaultOutOfRange, "default",
         "default utility " + to_string(default_utility) + " is outside [0,1]");
  }
  Model out = *this;
  out.utility_ = std::move(utility);
  out.default_ = default_utility;
  const auto& range = variable(*outcome_).range;
  out.decl_.utility.clear();
  for (std::size_t i = 0; i < range.size(); ++i) out.decl_.utility.emplace_back(range[i], out.utility_[i]);
  out.decl_.default_utility = default_utility;
  return out;
}

Model Model::with_default(Rational default_utility) const {
  return with_utilities(utility_, default_utility);
}

Model build_model(const ModelDecl& decl, const Limits& limits) {
  return detail::ModelBuilder(decl, limits).build(Model{});
}

Context Context::from_labels(const Model& m,
                             const std::vector<std::pair<std::string, std::string>>& values) {
  std::map<VarId, ValueId> seen;
  for (const auto& [name, label] : values) {
    auto v = m.find(name);
    if (!v) fail(ModelErrorKind::UndefinedVariable, name, "context sets unknown variable '" + name + "'");
    const auto& var = m.variable(*v);
    if (var.kind != VarKind::Exogenous) {
      fail(ModelErrorKind::InvalidDeclaration, name,
           "context sets endogenous variable '" + name + "'");
    }
    auto value = var.find_value(label);
    if (!value) {
      fail(ModelErrorKind::ValueOutOfRange, name,
           "value '" + label + "' is not in the range of '" + name + "'");
    }
    if (!seen.emplace(*v, *value).second) {
      fail(ModelErrorKind::DuplicateVariable, name, "context sets '" + name + "' twice");
    }
  }
  Context ctx;
  for (auto u : m.exogenous()) {
    auto it = seen.find(u);
    if (it == seen.end()) {
      fail(ModelErrorKind::ContextIncomplete, m.variable(u).name,
           "context does not set exogenous variable '" + m.variable(u).name + "'");
    }
    ctx.entries_.emplace_back(u, it->second);
  }
  return ctx;
}

Context Context::from_values(const Model& m, std::vector<ValueId> exogenous_values) {
  if (exogenous_values.size() != m.exogenous().size()) {
    fail(ModelErrorKind::ContextIncomplete, "context", "context must set every exogenous variable");
  }
  Context ctx;
  for (std::size_t i = 0; i < exogenous_values.size(); ++i) {
    const VarId u = m.exogenous()[i];
    if (exogenous_values[i] >= m.variable(u).range.size()) {
      fail(ModelErrorKind::ValueOutOfRange, m.variable(u).name, "context value index out of range");
    }
    ctx.entries_.emplace_back(u, exogenous_values[i]);
  }
  return ctx;
}

void Intervention::set(VarId v, ValueId value) {
  auto it = std::lower_bound(targets_.begin(), targets_.end(), v,
                             [](const auto& entry, VarId key) { return entry.first < key; });
  if (it != targets_.end() && it->first == v) {
    it->second = value;
  } else {
    targets_.insert(it, {v, value});
  }
}

std::optional<ValueId> Intervention::find(VarId v) const {
  auto it = std::lower_bound(targets_.begin(), targets_.end(), v,
                             [](const auto& entry, VarId key) { return entry.first < key; });
  if (it != targets_.end() && it->first == v) return it->second;
  return std::nullopt;
}

void Intervention::validate(const Model& m) const {
  for (const auto& [v, value] : targets_) {
    if (v.index >= m.size()) {
      fail(ModelErrorKind::UndefinedVariable, "?", "intervention on unknown variable");
    }
    const auto& var = m.variable(v);
    if (var.kind != VarKind::Endogenous) {
      fail(ModelErrorKind::InvalidIntervention, var.name,
           "cannot intervene on exogenous variable '" + var.name + "'");
    }
    if (value >= var.range.size()) {
      fail(ModelErrorKind::ValueOutOfRange, var.name, "intervened value out of range for '" + var.name + "'");
    }
  }
}

Intervention Intervention::from_labels(const Model& m,
                                       const std::vector<std::pair<std::string, std::string>>& values) {
  Intervention iv;
  for (const auto& [name, label] : values) {
    const VarId v = m.require(name);
    const auto& var = m.variable(v);
    if (var.kind != VarKind::Endogenous) {
      fail(ModelErrorKind::InvalidIntervention, name,
           "cannot intervene on exogenous variable '" + name + "'");
    }
    auto value = var.find_value(label);
    if (!value) {
      fail(ModelErrorKind::ValueOutOfRange, name,
           "value '" + label + "' is not in the range of '" + name + "'");
    }
    if (iv.find(v)) {
      fail(ModelErrorKind::InvalidIntervention, name, "'" + name + "' intervened on twice");
    }
    iv.set(v, *value);
  }
  return iv;
}

bool DependencyGraph::has_edge(VarId from, VarId to) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(from, to));
}

DependencyGraph dependency_graph(const Model& m) {
  DependencyGraph g;
  std::set<VarId> roots;
  for (auto y : m.endogenous()) {
    for (auto p : m.equation(y).parents) {
      g.edges.emplace_back(p, y);
      if (m.variable(p).kind == VarKind::Exogenous) roots.insert(p);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.roots.assign(roots.begin(), roots.end());
  return g;
}

std::string to_dot(const Model& m, const DependencyGraph& g) {
  std::ostringstream out;
  out << "digraph \"" << m.name() << "\" {\n";
  for (const auto& v : m.variables()) {
    out << "  \"" << v.name << "\"";
    if (v.kind == VarKind::Exogenous) out << " [shape=box]";
    if (m.outcome() && m.variable(*m.outcome()).name == v.name) out << " [peripheries=2]";
    out << ";\n";
  }
  for (const auto& [from, to] : g.edges) {
    out << "  \"" << m.variable(from).name << "\" -> \"" << m.variable(to).name << "\";\n";
  }
  out << "}\n";
  return out.str();
}

Assignment solve(const Model& m, const Context& ctx, const Intervention& iv) {
  Assignment a(std::vector<ValueId>(m.size(), 0));
  for (const auto& [u, value] : ctx.entries()) a[u] = value;
  for (auto v : m.topological_order()) {
    if (m.variable(v).kind == VarKind::Exogenous) continue;
    if (auto forced = iv.find(v)) {
      a[v] = *forced;
    } else {
      a[v] = m.equation(v).evaluate(a);
    }
  }
  return a;
}

Model intervene(const Model& m, const Intervention& iv) {
  iv.validate(m);
  Model out = m;
  for (const auto& [v, value] : iv.entries()) {
    const auto& label = m.variable(v).range[value];
    Expr constant = is_integer_label(label) ? Expr::literal(label) : Expr::cases({}, {}, label);
    Equation eq;
    eq.target = v;
    eq.table = {value};
    eq.source = constant;
    out.equations_[v.index] = std::move(eq);
    out.decl_.variables[v.index].equation = std::move(constant);
  }
  // Removing edges keeps the old order valid.
  return out;
}

std::string describe(const Model& m, VarId v, ValueId value) {
  return m.variable(v).name + "=" + m.variable(v).range[value];
}

}  // namespace hcm
