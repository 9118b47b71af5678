// hcm: command-line front end for causal utility models.
//
// Exit codes: 0 the queried property holds (or every corpus entry passes),
// 1 it does not, 2 input error, 3 semantic query error.

#include "hcm/corpus.hpp"
#include "hcm/query.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;
constexpr int kQueryError = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  std::optional<std::size_t> max_witness;
  bool all_witnesses = false;
  std::optional<std::uint64_t> seed;  // reserved; no randomized modes yet
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hcm::ModelDocument load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    hcm::ModelDocument doc = hcm::parse_model(text);
    for (const auto& w : doc.model.warnings()) std::cerr << path << ": warning: " << w << "\n";
    return doc;
  } catch (const hcm::DslError& e) {
    throw InputError(path + ":" + e.diagnostic().format());
  }
}

int run(const std::string& model_path, hcm::QueryExpression q, const Globals& g) {
  const hcm::ModelDocument doc = load_model(model_path);
  if (g.max_witness) q.args["max_witness"] = std::to_string(*g.max_witness);
  if (!q.arg("context")) {
    // Pin the context actually used so the echoed query is self-contained.
    if (doc.has_context("main")) q.args["context"] = "main";
    else if (doc.contexts.size() == 1) q.args["context"] = doc.contexts.front().name;
  }
  hcm::QueryOptions opts;
  opts.all_witnesses = g.all_witnesses;
  hcm::QueryResult r = hcm::run_query(doc, q, opts);
  if (g.json) {
    r.report["modelPath"] = std::filesystem::absolute(model_path).string();
    std::cout << r.report.dump(2) << "\n";
  } else {
    std::cout << r.text;
  }
  return r.holds ? kHolds : kFails;
}

int run_corpus(const std::string& dir, const std::string& filter, const Globals& g) {
  const auto entries = hcm::load_corpus(dir, true);
  hcm::QueryOptions opts;
  opts.all_witnesses = g.all_witnesses;
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  std::size_t ran = 0, passed = 0;
  for (const auto& e : entries) {
    if (!filter.empty() && !hcm::name_matches(filter, e.name)) continue;
    if (e.documentation_only) {
      if (!g.json) std::cout << "DOC   " << e.name << "\n";
      continue;
    }
    ++ran;
    const hcm::EntryResult r = hcm::run_entry(e, opts);
    if (r.pass) ++passed;
    if (g.json) {
      nlohmann::ordered_json row = {{"name", r.name}, {"pass", r.pass}};
      if (!r.error.empty()) row["error"] = r.error;
      row["checks"] = nlohmann::ordered_json::array();
      for (const auto& c : r.checks) {
        nlohmann::ordered_json check = {{"query", hcm::to_string(c.expectation->query)},
                                        {"pass", c.pass}};
        for (const auto& [k, v] : c.expectation->flags) check["expected"][k] = v;
        for (const auto& [k, v] : c.actual) check["actual"][k] = v;
        if (!c.error.empty()) check["error"] = c.error;
        row["checks"].push_back(check);
      }
      report.push_back(row);
      continue;
    }
    std::size_t ok = 0;
    for (const auto& c : r.checks) ok += c.pass;
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  " << ok << "/" << r.checks.size()
              << " checks\n";
    if (!r.error.empty()) std::cout << "      error: " << r.error << "\n";
    for (const auto& c : r.checks) {
      if (c.pass) continue;
      std::cout << "      " << hcm::to_string(c.expectation->query) << "\n        expected:";
      for (const auto& [k, v] : c.expectation->flags) std::cout << " " << k << "=" << (v ? "true" : "false");
      std::cout << "\n        actual:  ";
      for (const auto& [k, v] : c.actual) std::cout << " " << k << "=" << (v ? "true" : "false");
      if (!c.error.empty()) std::cout << " (" << c.error << ")";
      std::cout << "\n";
    }
  }
  if (g.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << passed << "/" << ran << " entries pass\n";
  }
  if (ran == 0) {
    std::cerr << "no corpus entry matches '" << filter << "'\n";
    return kFails;
  }
  return passed == ran ? kHolds : kFails;
}

int replay(const std::string& report_path, const Globals& g) {
  nlohmann::ordered_json report;
  try {
    report = nlohmann::ordered_json::parse(read_file(report_path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(report_path + ": " + e.what());
  }
  if (!report.contains("query") || !report.contains("modelPath") || !report.contains("flags")) {
    throw InputError(report_path + ": report lacks query, modelPath, or flags");
  }
  const hcm::ModelDocument doc = load_model(report["modelPath"].get<std::string>());
  const hcm::QueryResult r = hcm::run_query(doc, hcm::parse_query(report["query"].get<std::string>()));
  std::map<std::string, bool> recorded;
  for (const auto& [k, v] : report["flags"].items()) recorded[k] = v.get<bool>();
  const bool same = recorded == r.flags;
  if (g.json) {
    std::cout << nlohmann::ordered_json{{"match", same}, {"flags", r.report["flags"]}}.dump(2) << "\n";
  } else {
    std::cout << (same ? "replay: flags match\n" : "replay: flags differ\n") << r.text;
  }
  return same ? kHolds : kFails;
}

std::string default_corpus_dir() {
  if (const char* env = std::getenv("HCM_CORPUS_DIR")) return env;
  return HCM_DEFAULT_CORPUS_DIR;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Actual causation and harm over causal utility models"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json, "Print a machine-readable report");
  app.add_option("--max-witness", g.max_witness, "Largest witness set tried (0: but-for only)");
  app.add_flag("--all-witnesses", g.all_witnesses, "List every witness set for cause queries");
  app.add_option("--seed", g.seed, "Accepted and ignored");

  std::string model, context, event, contrast, effect, contrast_effect, formula, intervention;
  std::string alternative, default_utility, filter, dir = default_corpus_dir(), report_path;
  bool strict = false, counterfactual = false, below_default = false;

  auto model_arg = [&](CLI::App* sub) {
    sub->add_option("model", model, "Model file (.hcm)")->required();
    sub->add_option("--context", context, "Context name");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Print the solved assignment");
  model_arg(solve_cmd);
  solve_cmd->add_option("--do", intervention, "Intervention, e.g. \"H<-0, K<-0\"");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a causal formula");
  model_arg(eval_cmd);
  eval_cmd->add_option("--formula", formula, "e.g. \"[H<-0] D=1\"")->required();

  auto* cause_cmd = app.add_subcommand("cause", "Check a contrastive actual cause");
  model_arg(cause_cmd);
  cause_cmd->add_option("--event", event)->required();
  cause_cmd->add_option("--contrast", contrast)->required();
  cause_cmd->add_option("--effect", effect)->required();
  cause_cmd->add_option("--contrast-effect", contrast_effect)->required();

  auto* plain_cmd = app.add_subcommand("plain", "Check a non-contrastive actual cause");
  model_arg(plain_cmd);
  plain_cmd->add_option("--event", event)->required();
  plain_cmd->add_option("--effect", effect)->required();

  auto* harm_cmd = app.add_subcommand("harm", "Check harm, strict harm, or counterfactual harm");
  model_arg(harm_cmd);
  harm_cmd->add_option("--event", event)->required();
  harm_cmd->add_option("--contrast", contrast, "Restrict the search to one contrast");
  harm_cmd->add_option("--default", default_utility, "Override the default utility");
  auto* strict_opt = harm_cmd->add_flag("--strict", strict);
  auto* cf_opt = harm_cmd->add_flag("--counterfactual", counterfactual);
  auto* below_opt = harm_cmd->add_flag("--below-default", below_default);
  auto* alt_opt = harm_cmd->add_option("--alternative", alternative,
                                       "Would this alternative, e.g. \"F=0\", have strictly harmed?");
  for (auto* a : {strict_opt, cf_opt, below_opt, alt_opt}) {
    for (auto* b : {strict_opt, cf_opt, below_opt, alt_opt}) {
      if (a != b) a->excludes(b);
    }
  }

  auto* corpus_cmd = app.add_subcommand("corpus", "Run the worked-example corpus");
  corpus_cmd->add_option("--filter", filter, "Entry name glob");
  corpus_cmd->add_option("--dir", dir, "Corpus directory");

  auto* graph_cmd = app.add_subcommand("graph", "Print the dependency graph as DOT");
  graph_cmd->add_option("model", model, "Model file (.hcm)")->required();

  auto* replay_cmd = app.add_subcommand("replay", "Re-run the query in a JSON report");
  replay_cmd->add_option("report", report_path, "Report written with --json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    hcm::QueryExpression q;
    if (!context.empty()) q.args["context"] = context;
    if (*solve_cmd) {
      q.kind = hcm::QueryExpression::Kind::Solve;
      if (!intervention.empty()) q.args["do"] = intervention;
      return run(model, q, g);
    }
    if (*eval_cmd) {
      q.kind = hcm::QueryExpression::Kind::Evaluate;
      q.args["formula"] = formula;
      return run(model, q, g);
    }
    if (*cause_cmd) {
      q.kind = hcm::QueryExpression::Kind::Cause;
      q.args["event"] = event;
      q.args["contrast"] = contrast;
      q.args["effect"] = effect;
      q.args["contrast_effect"] = contrast_effect;
      return run(model, q, g);
    }
    if (*plain_cmd) {
      q.kind = hcm::QueryExpression::Kind::PlainCause;
      q.args["event"] = event;
      q.args["effect"] = effect;
      return run(model, q, g);
    }
    if (*harm_cmd) {
      q.args["event"] = event;
      if (!default_utility.empty()) q.args["default"] = default_utility;
      if (!alternative.empty()) {
        q.kind = hcm::QueryExpression::Kind::Alternative;
        q.args["alternative"] = alternative;
      } else {
        q.kind = hcm::QueryExpression::Kind::Harm;
        if (!contrast.empty()) q.args["contrast"] = contrast;
        q.args["flag"] = strict ? "strict" : counterfactual ? "counterfactual" : below_default ? "below-default" : "harm";
      }
      return run(model, q, g);
    }
    if (*corpus_cmd) return run_corpus(dir, filter, g);
    if (*graph_cmd) {
      const hcm::ModelDocument doc = load_model(model);
      std::cout << hcm::to_dot(doc.model, hcm::dependency_graph(doc.model));
      return kHolds;
    }
    if (*replay_cmd) return replay(report_path, g);
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const hcm::DslError& e) {
    std::cerr << "query: " << e.diagnostic().format() << "\n";
    return kInputError;
  } catch (const hcm::QueryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kQueryError;
  } catch (const hcm::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const hcm::CorpusError& e) {
    std::cerr << "corpus: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
