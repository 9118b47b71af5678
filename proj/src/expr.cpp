#include "hcm/expr.hpp"

#include <algorithm>
#include <cctype>

namespace hcm {

Expr Expr::literal(std::string v) {
  Expr e;
  e.kind = Kind::Literal;
  e.value = std::move(v);
  return e;
}

Expr Expr::var(std::string n) {
  Expr e;
  e.kind = Kind::VarRef;
  e.name = std::move(n);
  return e;
}

Expr Expr::equals(std::string n, std::string v) {
  Expr e;
  e.kind = Kind::Equals;
  e.name = std::move(n);
  e.value = std::move(v);
  return e;
}

Expr Expr::not_equals(std::string n, std::string v) {
  Expr e = equals(std::move(n), std::move(v));
  e.kind = Kind::NotEquals;
  return e;
}

Expr Expr::negate(Expr inner) {
  Expr e;
  e.kind = Kind::Not;
  e.operands.push_back(std::move(inner));
  return e;
}

Expr Expr::conj(std::vector<Expr> es) {
  if (es.size() == 1) return std::move(es.front());
  Expr e;
  e.kind = Kind::And;
  e.operands = std::move(es);
  return e;
}

Expr Expr::disj(std::vector<Expr> es) {
  if (es.size() == 1) return std::move(es.front());
  Expr e;
  e.kind = Kind::Or;
  e.operands = std::move(es);
  return e;
}

Expr Expr::cases(std::vector<Expr> guards, std::vector<std::string> values,
                 std::string otherwise) {
  Expr e;
  e.kind = Kind::Case;
  e.operands = std::move(guards);
  e.arms = std::move(values);
  e.arms.push_back(std::move(otherwise));
  return e;
}

namespace {

void collect(const Expr& e, std::vector<std::string>& out) {
  if (!e.name.empty() && std::find(out.begin(), out.end(), e.name) == out.end()) {
    out.push_back(e.name);
  }
  for (const auto& child : e.operands) collect(child, out);
}

// Binding strength: Or < And < Not < atoms.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Or: return 1;
    case Expr::Kind::And: return 2;
    case Expr::Kind::Not: return 3;
    case Expr::Kind::Case: return 0;
    default: return 4;
  }
}

void emit(const Expr& e, std::string& out);

// N-ary nodes flatten on parse, so a child of the same kind must keep its
// parentheses to survive a round trip.
void emit_operand(const Expr& child, int parent_prec, std::string& out) {
  if (precedence(child) <= parent_prec) {
    out += '(';
    emit(child, out);
    out += ')';
  } else {
    emit(child, out);
  }
}

void emit(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Literal: out += e.value; break;
    case Expr::Kind::VarRef: out += e.name; break;
    case Expr::Kind::Equals: out += e.name + " = " + e.value; break;
    case Expr::Kind::NotEquals: out += e.name + " != " + e.value; break;
    case Expr::Kind::Not:
      out += '!';
      // `!X = 1` would parse the same, but reads ambiguously.
      emit_operand(e.operands.front(),
                   e.operands.front().kind == Expr::Kind::Equals ||
                           e.operands.front().kind == Expr::Kind::NotEquals
                       ? precedence(e.operands.front())
                       : precedence(e) - 1,
                   out);
      break;
    case Expr::Kind::And:
    case Expr::Kind::Or: {
      const char* op = e.kind == Expr::Kind::And ? " & " : " | ";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) out += op;
        emit_operand(e.operands[i], precedence(e), out);
      }
      break;
    }
    case Expr::Kind::Case:
      out += "case { ";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        out += "when ";
        emit(e.operands[i], out);
        out += " -> " + e.arms[i] + "; ";
      }
      out += "else -> " + e.arms.back() + " }";
      break;
  }
}

}  // namespace

std::vector<std::string> referenced_names(const Expr& e) {
  std::vector<std::string> out;
  collect(e, out);
  return out;
}

std::string to_source(const Expr& e) {
  std::string out;
  emit(e, out);
  return out;
}

bool is_integer_label(const std::string& label) {
  if (label.empty()) return false;
  std::size_t i = label[0] == '-' ? 1 : 0;
  if (i == label.size()) return false;
  return std::all_of(label.begin() + static_cast<std::ptrdiff_t>(i), label.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace hcm
