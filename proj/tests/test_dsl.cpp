#include "bridge.hpp"
#include "doctest.h"

#include <filesystem>
#include <random>

using namespace hcm;

namespace {

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(HCM_CORPUS_DIR)) {
    if (e.path().extension() == ".hcm") out.push_back(e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Diagnostic diagnose(std::string_view text) {
  try {
    parse_model(text);
  } catch (const DslError& e) {
    return e.diagnostic();
  }
  FAIL("parsed: " << text);
  return {};
}

Diagnostic diagnose_formula(std::string_view text, const Model& m) {
  try {
    parse_formula(text, m);
  } catch (const DslError& e) {
    return e.diagnostic();
  }
  FAIL("parsed: " << text);
  return {};
}

std::size_t line_count(std::string_view s) { return std::count(s.begin(), s.end(), '\n') + 1; }

std::string mutate(std::mt19937_64& rng, std::string s) {
  static const std::string alphabet = "{}()[],;:=&|!<->/ \n\tabcXYZ0129_\"#@";
  const int edits = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < edits; ++i) {
    if (s.empty()) s = "x";
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
    const char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: s.erase(at, 1); break;
      case 1: s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), c); break;
      case 2: s[at] = c; break;
      default: s.resize(at); break;
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("dsl") {

TEST_CASE("late preemption parses") {
  const auto doc = bridge::corpus_doc("late_preemption.hcm");
  std::size_t endo = 0;
  for (const auto& v : doc.decl.variables) endo += v.kind == VarKind::Endogenous;
  CHECK(endo == 6);
  CHECK(doc.model.variable(*doc.model.outcome()).name == "O");
  CHECK(doc.model.default_utility() == Rational(1));
  CHECK(doc.has_context("main"));
  CHECK_FALSE(doc.has_context("other"));
}

TEST_CASE("empty input is a parse error at 1:1") {
  for (const char* text : {"", "   ", "// only a comment\n"}) {
    const auto d = diagnose(text);
    CHECK(d.kind == DiagnosticKind::ParseError);
    if (std::string_view(text).empty()) {
      CHECK(d.span.line == 1);
      CHECK(d.span.column == 1);
    }
    CHECK_FALSE(d.expected.empty());
  }
}

TEST_CASE("undeclared variable is a semantic error naming it") {
  const auto d = diagnose("model m {\n  exo U : {0,1}\n  var X : {0,1} = Ghost\n}");
  CHECK(d.kind == DiagnosticKind::SemanticError);
  CHECK(d.message.find("Ghost") != std::string::npos);
  CHECK(d.span.line == 3);
  CHECK(d.model_error == ModelErrorKind::UndefinedVariable);
}

TEST_CASE("build errors carry spans") {
  const auto cyc = diagnose("model m {\n  var A : {0,1} = B\n  var B : {0,1} = A\n}");
  CHECK(cyc.kind == DiagnosticKind::SemanticError);
  CHECK(cyc.model_error == ModelErrorKind::CyclicModel);
  CHECK(cyc.span.line >= 2);
  const auto dup = diagnose("model m {\n  exo U : {0,1}\n  exo U : {0,1}\n}");
  CHECK(dup.model_error == ModelErrorKind::DuplicateVariable);
  CHECK(diagnose("model m { exo U : {0,1} } context c { U = 1 } context c { U = 0 }").kind ==
        DiagnosticKind::SemanticError);
  CHECK(diagnose("model m { exo U : {0,1} } context c { U = 7 }").kind == DiagnosticKind::SemanticError);
}

TEST_CASE("lexical errors") {
  const auto d = diagnose("model m {\n  exo U : {0,1} $\n}");
  CHECK(d.kind == DiagnosticKind::LexError);
  CHECK(d.span.line == 2);
  CHECK(d.span.column == 17);
  CHECK(d.token == "$");
  CHECK(d.format().starts_with("2:17:"));
}

TEST_CASE("comments and CRLF") {
  const std::string lf = "version 1\nmodel m { // head\n  exo U : {0, 1}\n  var X : {0, 1} = U // tail\n}\n";
  std::string crlf;
  for (char c : lf) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  CHECK(parse_model(lf) == parse_model(crlf));
  const auto d = diagnose("model m {\r\n  exo U : {0,1}\r\n  var X : {0,1} = \r\n}");
  CHECK(d.span.line == 4);
}

TEST_CASE("version header") {
  CHECK_NOTHROW(parse_model("version 1 model m { exo U : {0,1} }"));
  const auto d = diagnose("version 2 model m { exo U : {0,1} }");
  CHECK(d.span.line == 1);
  CHECK(d.span.column == 9);
}

TEST_CASE("nesting depth is bounded") {
  std::string deep = "model m { exo U : {0,1} var X : {0,1} = ";
  for (int i = 0; i < 5000; ++i) deep += "(";
  deep += "U";
  for (int i = 0; i < 5000; ++i) deep += ")";
  deep += " }";
  CHECK(diagnose(deep).kind == DiagnosticKind::ParseError);
  std::string nots = "model m { exo U : {0,1} var X : {0,1} = ";
  for (int i = 0; i < 5000; ++i) nots += "!";
  nots += "U }";
  CHECK(diagnose(nots).kind == DiagnosticKind::ParseError);
}

TEST_CASE("size limits surface as semantic errors") {
  Limits small;
  small.max_range = 2;
  try {
    parse_model("model m { exo U : {0,1,2} }", small);
    FAIL("accepted");
  } catch (const DslError& e) {
    CHECK(e.diagnostic().kind == DiagnosticKind::SemanticError);
  }
}

TEST_CASE("formulas") {
  const auto doc = bridge::corpus_doc("late_preemption.hcm");
  const Model& m = doc.model;
  const auto f = parse_formula("[H<-0, K<-0] D=0", m);
  CHECK(f.prefix.size() == 2);
  CHECK(to_string(m, f.body) == "D=0");
  CHECK(evaluate(m, doc.context("main"), f));
  const auto g = parse_formula("D=1 & H=1", m);
  CHECK(g.prefix.empty());
  CHECK(evaluate(m, doc.context("main"), g));
  CHECK(evaluate(m, doc.context("main"), parse_formula("!(D=0 | C!=1)", m)));

  const auto missing = diagnose_formula("[H<-]", m);
  CHECK(missing.kind == DiagnosticKind::ParseError);
  CHECK(missing.span.column == 5);
  CHECK(diagnose_formula("D=", m).kind == DiagnosticKind::ParseError);
  CHECK(diagnose_formula("Nope=1", m).kind == DiagnosticKind::SemanticError);
  CHECK(diagnose_formula("D=7", m).kind == DiagnosticKind::SemanticError);
  CHECK(diagnose_formula("[H<-0, H<-1] D=1", m).kind == DiagnosticKind::SemanticError);
  CHECK(diagnose_formula("[UH<-0] D=1", m).kind == DiagnosticKind::SemanticError);
  CHECK(diagnose_formula("D=1 D=0", m).kind == DiagnosticKind::ParseError);
}

TEST_CASE("interventions, events, contrasts") {
  const auto doc = bridge::corpus_doc("late_preemption.hcm");
  const Model& m = doc.model;
  CHECK(parse_intervention("", m).empty());
  CHECK(parse_intervention("H<-0, K<-1", m).size() == 2);
  const auto e = parse_event("H=1 & C=1", m);
  REQUIRE(e.size() == 2);
  CHECK(parse_contrast("C=0 & H=0", m, e) == std::vector<ValueId>{0, 0});
  CHECK_THROWS_AS(parse_event("H=1 | C=1", m), DslError);
  CHECK_THROWS_AS(parse_contrast("H=0", m, e), QueryError);
  CHECK_THROWS_AS(parse_contrast("H=0 & C=0 & K=0", m, e), QueryError);
}

TEST_CASE("serialization round trip on the corpus") {
  for (const auto& file : corpus_files()) {
    CAPTURE(file);
    const auto doc = bridge::corpus_doc(file);
    const std::string text = serialize_model(doc);
    const auto again = parse_model(text);
    CHECK(again == doc);
    CHECK(serialize_model(again) == text);
  }
}

TEST_CASE("serializer output") {
  const auto doc = bridge::corpus_doc("autonomous_car_2.hcm");
  const std::string text = serialize_model(doc);
  CHECK(text.starts_with("version 1\nmodel "));
  CHECK(text.find("1/2") != std::string::npos);
  const auto two = parse_model("model m { exo U : {a, b} } context z { U = a } context y { U = b }");
  const std::string s = serialize_model(two);
  CHECK(s.find("context y") < s.find("context z"));
  const auto swapped = parse_model("model m { exo U : {a, b} } context y { U = b } context z { U = a }");
  CHECK(two == swapped);
}

TEST_CASE("query expressions") {
  const auto q = parse_query(R"(harm event="H=1 & C=1" context=main default=1/2)");
  CHECK(q.kind == QueryExpression::Kind::Harm);
  CHECK(q.arg("event") == "H=1 & C=1");
  CHECK(q.arg("default") == "1/2");
  CHECK_FALSE(q.arg("contrast"));
  CHECK(parse_query(to_string(q)) == q);
  const auto e = parse_query(R"(evaluate formula="" context=c)");
  CHECK(parse_query(to_string(e)) == e);
  CHECK_THROWS_AS(parse_query("harm event=H=1 event=H=0"), DslError);
  CHECK_THROWS_AS(parse_query("frobnicate"), DslError);
  CHECK_THROWS_AS(parse_query(""), DslError);
  CHECK_THROWS_AS(parse_query("cause event=\"H=1"), DslError);
}

TEST_CASE("mutated sources always yield spanned diagnostics") {
  std::vector<std::string> sources;
  for (const auto& f : corpus_files()) sources.push_back(bridge::read(bridge::corpus_path(f)));
  std::mt19937_64 rng(31337);
  int rejected = 0;
  for (int i = 0; i < 1500; ++i) {
    const std::string text = mutate(rng, sources[static_cast<std::size_t>(i) % sources.size()]);
    try {
      parse_model(text);
    } catch (const DslError& e) {
      ++rejected;
      const auto& s = e.diagnostic().span;
      CHECK(s.line >= 1);
      CHECK(s.column >= 1);
      CHECK(s.line <= line_count(text));
    } catch (const std::exception& e) {
      FAIL("unexpected exception: " << e.what() << "\n" << text);
    }
  }
  CHECK(rejected > 1000);
}

}  // TEST_SUITE
