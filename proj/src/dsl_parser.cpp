#include "dsl_lexer.hpp"

#include "hcm/dsl.hpp"

#include <map>
#include <algorithm>
#include <cctype>
#include <set>

namespace hcm {

using detail::Tok;
using detail::Token;

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::LexError: return "LexError";
    case DiagnosticKind::ParseError: return "ParseError";
    case DiagnosticKind::SemanticError: return "SemanticError";
  }
  return "Error";
}

std::string Diagnostic::format() const {
  std::string out = std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                    std::string(to_string(kind)) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

DslError::DslError(Diagnostic d) : std::runtime_error(d.format()), diag_(std::move(d)) {}

const Context& ModelDocument::context(std::string_view name) const {
  for (const auto& c : contexts) {
    if (c.name == name) return c.resolved;
  }
  throw QueryError(QueryErrorKind::UnknownContext, "no context named '" + std::string(name) + "'");
}

bool ModelDocument::has_context(std::string_view name) const {
  return std::any_of(contexts.begin(), contexts.end(), [&](const NamedContext& c) { return c.name == name; });
}

namespace {

constexpr std::size_t kMaxDepth = 200;

// Recursive-descent parser over a token vector. One token of lookahead.
class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(detail::lex(text)) {}

  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }

  Token take() {
    Token t = tokens_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  [[noreturn]] void unexpected(std::vector<std::string> expected, const std::string& message = {}) const {
    const Token& t = peek();
    Diagnostic d;
    d.kind = DiagnosticKind::ParseError;
    d.span = t.span;
    d.token = t.text;
    d.expected = std::move(expected);
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    d.message = message.empty() ? "unexpected " + found : message + ", found " + found;
    throw DslError(std::move(d));
  }

  Token expect(Tok kind) {
    if (!at(kind)) unexpected({std::string(detail::describe(kind))});
    return take();
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) unexpected({"'" + std::string(kw) + "'"});
    take();
  }

  // A name that is not a keyword.
  Token name(const char* what) {
    if (!at(Tok::Ident) || detail::is_keyword(peek().text)) unexpected({what});
    return take();
  }

  // Integer or non-keyword identifier.
  Token value() {
    if (at(Tok::Int)) return take();
    if (at(Tok::Ident) && !detail::is_keyword(peek().text)) return take();
    unexpected({"value"});
  }

  Token rational(Rational& out) {
    Token first = expect(Tok::Int);
    std::string text = first.text;
    if (at(Tok::Slash)) {
      take();
      Token den = expect(Tok::Int);
      text += "/" + den.text;
      if (den.text == "0") {
        Diagnostic d;
        d.kind = DiagnosticKind::ParseError;
        d.span = den.span;
        d.token = den.text;
        d.message = "zero denominator";
        throw DslError(std::move(d));
      }
    }
    auto r = parse_rational(text);
    if (!r) {
      Diagnostic d;
      d.kind = DiagnosticKind::ParseError;
      d.span = first.span;
      d.token = text;
      d.message = "malformed rational '" + text + "'";
      throw DslError(std::move(d));
    }
    out = *r;
    return first;
  }

  void enter() {
    if (++depth_ > kMaxDepth) unexpected({}, "expression nested too deeply");
  }
  void leave() { --depth_; }

  // ---- equation expressions ----

  Expr expr() {
    if (at_keyword("case")) return case_expr();
    return or_expr();
  }

  Expr case_expr() {
    expect_keyword("case");
    expect(Tok::LBrace);
    std::vector<Expr> guards;
    std::vector<std::string> values;
    while (at_keyword("when")) {
      take();
      guards.push_back(or_expr());
      expect(Tok::Arrow);
      values.push_back(value().text);
      expect(Tok::Semi);
    }
    if (!at_keyword("else")) unexpected({"'when'", "'else'"});
    take();
    expect(Tok::Arrow);
    std::string otherwise = value().text;
    if (at(Tok::Semi)) take();
    expect(Tok::RBrace);
    return Expr::cases(std::move(guards), std::move(values), std::move(otherwise));
  }

  Expr or_expr() {
    std::vector<Expr> parts{and_expr()};
    while (at(Tok::Pipe)) {
      take();
      parts.push_back(and_expr());
    }
    return Expr::disj(std::move(parts));
  }

  Expr and_expr() {
    std::vector<Expr> parts{unary()};
    while (at(Tok::Amp)) {
      take();
      parts.push_back(unary());
    }
    return Expr::conj(std::move(parts));
  }

  Expr unary() {
    enter();
    Expr out;
    if (at(Tok::Bang)) {
      take();
      out = Expr::negate(unary());
    } else if (at(Tok::LParen)) {
      take();
      out = or_expr();
      expect(Tok::RParen);
    } else if (at(Tok::Int)) {
      out = Expr::literal(take().text);
    } else if (at(Tok::Ident) && !detail::is_keyword(peek().text)) {
      Token ref = take();
      references_.emplace(ref.text, ref.span);
      std::string var = ref.text;
      if (at(Tok::Assign)) {
        take();
        out = Expr::equals(std::move(var), value().text);
      } else if (at(Tok::NotEq)) {
        take();
        out = Expr::not_equals(std::move(var), value().text);
      } else {
        out = Expr::var(std::move(var));
      }
    } else {
      unexpected({"'!'", "'('", "integer", "identifier"});
    }
    leave();
    return out;
  }

  // ---- model documents ----

  struct ContextSource {
    NamedContext ctx;
    SourceSpan span;
    std::vector<SourceSpan> value_spans;
  };

  ModelDocument document(const Limits& limits) {
    ModelDocument doc;
    if (at_keyword("version")) {
      take();
      Token v = expect(Tok::Int);
      if (v.text != "1") {
        Diagnostic d;
        d.kind = DiagnosticKind::ParseError;
        d.span = v.span;
        d.token = v.text;
        d.message = "unsupported format version " + v.text;
        throw DslError(std::move(d));
      }
    }
    expect_keyword("model");
    Token model_name = name("model name");
    doc.decl.name = model_name.text;
    doc.spans[""] = model_name.span;
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) declaration(doc);
    take();

    std::vector<ContextSource> contexts;
    while (!at(Tok::End)) {
      if (!at_keyword("context")) unexpected({"'context'", "end of input"});
      contexts.push_back(context_block());
    }

    try {
      doc.model = build_model(doc.decl, limits);
    } catch (const ModelError& e) {
      SourceSpan where = model_name.span;
      if (doc.spans.count(e.entity())) {
        where = doc.spans.at(e.entity());
      } else if (references_.count(e.entity())) {
        where = references_.at(e.entity());
      }
      semantic(doc, e, where);
    }

    std::set<std::string> names;
    for (auto& c : contexts) {
      if (!names.insert(c.ctx.name).second) {
        Diagnostic d;
        d.kind = DiagnosticKind::SemanticError;
        d.span = c.span;
        d.token = c.ctx.name;
        d.message = "context '" + c.ctx.name + "' declared twice";
        throw DslError(std::move(d));
      }
      try {
        c.ctx.resolved = Context::from_labels(doc.model, c.ctx.values);
      } catch (const ModelError& e) {
        SourceSpan where = c.span;
        for (std::size_t i = 0; i < c.ctx.values.size(); ++i) {
          if (c.ctx.values[i].first == e.entity()) where = c.value_spans[i];
        }
        semantic(doc, e, where);
      }
      doc.spans["context " + c.ctx.name] = c.span;
      doc.contexts.push_back(std::move(c.ctx));
    }
    return doc;
  }

  [[noreturn]] void semantic(const ModelDocument&, const ModelError& e, SourceSpan where) {
    Diagnostic d;
    d.kind = DiagnosticKind::SemanticError;
    d.span = where;
    d.token = e.entity();
    d.message = e.what();
    d.model_error = e.kind();
    throw DslError(std::move(d));
  }

  std::vector<std::string> range() {
    expect(Tok::LBrace);
    std::vector<std::string> values{value().text};
    while (at(Tok::Comma)) {
      take();
      values.push_back(value().text);
    }
    expect(Tok::RBrace);
    return values;
  }

  void declaration(ModelDocument& doc) {
    if (at_keyword("exo") || at_keyword("var") || at_keyword("outcome")) {
      const std::string kw = take().text;
      Token var_name = name("variable name");
      VariableDecl v;
      v.name = var_name.text;
      v.kind = kw == "exo" ? VarKind::Exogenous : VarKind::Endogenous;
      v.outcome = kw == "outcome";
      expect(Tok::Colon);
      v.range = range();
      if (kw != "exo") {
        expect(Tok::Assign);
        v.equation = expr();
      }
      if (!doc.spans.count(v.name)) doc.spans[v.name] = var_name.span;
      doc.decl.variables.push_back(std::move(v));
      return;
    }
    if (at_keyword("utility")) {
      doc.spans["utility"] = take().span;
      expect(Tok::LBrace);
      while (true) {
        Token label = value();
        expect(Tok::Colon);
        Rational u;
        rational(u);
        doc.decl.utility.emplace_back(label.text, u);
        if (!at(Tok::Comma)) break;
        take();
      }
      expect(Tok::RBrace);
      return;
    }
    if (at_keyword("default")) {
      Token kw = take();
      if (doc.decl.default_utility) {
        Diagnostic d;
        d.kind = DiagnosticKind::SemanticError;
        d.span = kw.span;
        d.token = kw.text;
        d.message = "default declared twice";
        throw DslError(std::move(d));
      }
      doc.spans["default"] = kw.span;
      Rational d;
      rational(d);
      doc.decl.default_utility = d;
      return;
    }
    unexpected({"'exo'", "'var'", "'outcome'", "'utility'", "'default'", "'}'"});
  }

  ContextSource context_block() {
    expect_keyword("context");
    ContextSource src;
    Token ctx_name = name("context name");
    src.ctx.name = ctx_name.text;
    src.span = ctx_name.span;
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      Token var = name("variable name");
      expect(Tok::Assign);
      src.ctx.values.emplace_back(var.text, value().text);
      src.value_spans.push_back(var.span);
      if (!at(Tok::Comma)) break;
      take();
    }
    expect(Tok::RBrace);
    return src;
  }

  // ---- formulas ----

  struct Binder {
    const Model& m;

    [[noreturn]] void fail(const Token& at, const std::string& message) const {
      Diagnostic d;
      d.kind = DiagnosticKind::SemanticError;
      d.span = at.span;
      d.token = at.text;
      d.message = message;
      throw DslError(std::move(d));
    }

    PrimitiveEvent event(const Token& var, const Token& value) const {
      auto v = m.find(var.text);
      if (!v) fail(var, "unknown variable '" + var.text + "'");
      auto id = m.variable(*v).find_value(value.text);
      if (!id) fail(value, "'" + value.text + "' is not a value of '" + var.text + "'");
      return {*v, *id};
    }
  };

  Formula f_or(const Binder& b) {
    std::vector<Formula> parts{f_and(b)};
    while (at(Tok::Pipe)) {
      take();
      parts.push_back(f_and(b));
    }
    return Formula::disj(std::move(parts));
  }

  Formula f_and(const Binder& b) {
    std::vector<Formula> parts{f_unary(b)};
    while (at(Tok::Amp)) {
      take();
      parts.push_back(f_unary(b));
    }
    return Formula::conj(std::move(parts));
  }

  Formula f_unary(const Binder& b) {
    enter();
    Formula out;
    if (at(Tok::Bang)) {
      take();
      out = Formula::negate(f_unary(b));
    } else if (at(Tok::LParen)) {
      take();
      out = f_or(b);
      expect(Tok::RParen);
    } else if (at(Tok::Ident)) {
      Token var = take();
      if (!at(Tok::Assign) && !at(Tok::NotEq)) unexpected({"'='", "'!='"});
      const bool negated = take().kind == Tok::NotEq;
      Token val = value();
      const auto e = b.event(var, val);
      out = Formula::primitive(e.var, e.value);
      if (negated) out = Formula::negate(std::move(out));
    } else {
      unexpected({"'!'", "'('", "identifier"});
    }
    leave();
    return out;
  }

  CausalFormula causal_formula(const Model& m) {
    const Binder b{m};
    CausalFormula f;
    if (at(Tok::LBracket)) {
      take();
      if (!at(Tok::RBracket)) f.prefix = assignments(b);
      expect(Tok::RBracket);
    }
    f.body = f_or(b);
    expect(Tok::End);
    return f;
  }

  Intervention intervention(const Model& m) {
    const Binder b{m};
    Intervention iv;
    if (!at(Tok::End)) iv = assignments(b);
    expect(Tok::End);
    return iv;
  }

  // X<-v (, Y<-w)*
  Intervention assignments(const Binder& b) {
    Intervention iv;
    while (true) {
      Token var = name("variable name");
      expect(Tok::LeftArrow);
      Token val = value();
      const auto e = b.event(var, val);
      if (b.m.variable(e.var).kind != VarKind::Endogenous) {
        b.fail(var, "cannot intervene on exogenous variable '" + var.text + "'");
      }
      if (iv.find(e.var)) b.fail(var, "'" + var.text + "' intervened on twice");
      iv.set(e.var, e.value);
      if (!at(Tok::Comma)) break;
      take();
    }
    return iv;
  }

  Conjunction conjunction(const Model& m) {
    const Binder b{m};
    Conjunction c;
    while (true) {
      Token var = name("variable name");
      expect(Tok::Assign);
      Token val = value();
      c.push_back(b.event(var, val));
      if (!at(Tok::Amp)) break;
      take();
    }
    expect(Tok::End);
    return c;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  // First use of each name inside an equation.
  std::map<std::string, SourceSpan> references_;
};

}  // namespace

ModelDocument parse_model(std::string_view text, const Limits& limits) {
  Parser p(text);
  return p.document(limits);
}

CausalFormula parse_formula(std::string_view text, const Model& m) {
  Parser p(text);
  return p.causal_formula(m);
}

Intervention parse_intervention(std::string_view text, const Model& m) {
  Parser p(text);
  return p.intervention(m);
}

Conjunction parse_event(std::string_view text, const Model& m) {
  Parser p(text);
  return p.conjunction(m);
}

std::vector<ValueId> parse_contrast(std::string_view text, const Model& m, const Conjunction& event) {
  const Conjunction c = parse_event(text, m);
  std::vector<ValueId> out;
  for (const auto& e : event) {
    auto it = std::find_if(c.begin(), c.end(), [&](const PrimitiveEvent& x) { return x.var == e.var; });
    if (it == c.end()) {
      throw QueryError(QueryErrorKind::InvalidContrast,
                       "contrast does not set event variable '" + m.variable(e.var).name + "'");
    }
    out.push_back(it->value);
  }
  if (c.size() != event.size()) {
    throw QueryError(QueryErrorKind::InvalidContrast, "contrast mentions variables outside the event");
  }
  return out;
}

// ---- query expressions ----

std::string_view to_string(QueryExpression::Kind kind) {
  switch (kind) {
    case QueryExpression::Kind::Solve: return "solve";
    case QueryExpression::Kind::Evaluate: return "evaluate";
    case QueryExpression::Kind::Cause: return "cause";
    case QueryExpression::Kind::PlainCause: return "plain";
    case QueryExpression::Kind::Harm: return "harm";
    case QueryExpression::Kind::Alternative: return "alternative";
  }
  return "?";
}

std::optional<std::string> QueryExpression::arg(const std::string& key) const {
  auto it = args.find(key);
  if (it == args.end()) return std::nullopt;
  return it->second;
}

namespace {

[[noreturn]] void query_error(std::size_t column, const std::string& token, const std::string& message) {
  Diagnostic d;
  d.kind = DiagnosticKind::ParseError;
  d.span = {1, column, token.size()};
  d.token = token;
  d.message = message;
  throw DslError(std::move(d));
}

}  // namespace

QueryExpression parse_query(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> words;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    std::string word;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      if (text[i] == '"') {
        const std::size_t close = text.find('"', i + 1);
        if (close == std::string_view::npos) query_error(i + 1, "\"", "unterminated quoted value");
        word += text.substr(i + 1, close - i - 1);
        i = close + 1;
      } else {
        word += text[i++];
      }
    }
    words.emplace_back(start + 1, std::move(word));
  }
  if (words.empty()) query_error(1, "", "empty query");

  QueryExpression q;
  const std::string& kind = words.front().second;
  if (kind == "solve") q.kind = QueryExpression::Kind::Solve;
  else if (kind == "evaluate") q.kind = QueryExpression::Kind::Evaluate;
  else if (kind == "cause") q.kind = QueryExpression::Kind::Cause;
  else if (kind == "plain") q.kind = QueryExpression::Kind::PlainCause;
  else if (kind == "harm") q.kind = QueryExpression::Kind::Harm;
  else if (kind == "alternative") q.kind = QueryExpression::Kind::Alternative;
  else query_error(words.front().first, kind, "unknown query kind '" + kind + "'");

  for (std::size_t w = 1; w < words.size(); ++w) {
    const auto& [col, word] = words[w];
    const auto eq = word.find('=');
    if (eq == std::string::npos || eq == 0) query_error(col, word, "expected key=value");
    const std::string key = word.substr(0, eq);
    if (!q.args.emplace(key, word.substr(eq + 1)).second) {
      query_error(col, word, "argument '" + key + "' given twice");
    }
  }
  return q;
}

std::string to_string(const QueryExpression& q) {
  std::string out(to_string(q.kind));
  for (const auto& [key, value] : q.args) {
    out += " " + key + "=";
    const bool quote = value.empty() || value.find(' ') != std::string::npos;
    out += quote ? "\"" + value + "\"" : value;
  }
  return out;
}

}  // namespace hcm
