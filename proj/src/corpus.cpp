#include "hcm/corpus.hpp"

#include <fnmatch.h>

#include <fstream>
#include <sstream>

namespace hcm {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RawRecord {
  std::size_t line = 0;
  std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> fields;
};

std::vector<RawRecord> split_records(const std::string& text) {
  std::vector<RawRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  RawRecord cur;
  auto flush = [&] {
    if (!cur.fields.empty()) out.push_back(std::move(cur));
    cur = {};
  };
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw CorpusError("manifest", "line " + std::to_string(n) + ": expected 'key: value'");
    }
    if (cur.fields.empty()) cur.line = n;
    cur.fields.push_back({n, {trim(line.substr(0, colon)), trim(line.substr(colon + 1))}});
  }
  flush();
  return out;
}

Expectation parse_expectation(const std::string& text, std::size_t line, const std::string& context) {
  const auto arrow = text.rfind("->");
  if (arrow == std::string::npos) throw std::runtime_error("expectation needs '-> flag=value'");
  Expectation e;
  e.line = line;
  e.query = parse_query(text.substr(0, arrow));
  if (!context.empty() && !e.query.arg("context")) e.query.args["context"] = context;
  std::istringstream flags(text.substr(arrow + 2));
  std::string item;
  while (flags >> item) {
    const auto eq = item.find('=');
    const std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
    if (eq == 0 || (value != "true" && value != "false")) {
      throw std::runtime_error("malformed expected flag '" + item + "'");
    }
    e.flags[item.substr(0, eq)] = value == "true";
  }
  if (e.flags.empty()) throw std::runtime_error("expectation lists no flags");
  return e;
}

CorpusEntry build_entry(const RawRecord& rec, const std::filesystem::path& dir) {
  CorpusEntry e;
  std::string model;
  std::vector<std::pair<std::size_t, std::string>> expects;
  for (const auto& [line, kv] : rec.fields) {
    const auto& [key, value] = kv;
    if (key == "name") e.name = value;
    else if (key == "model") model = value;
    else if (key == "context") e.context = value;
    else if (key == "note") e.notes.push_back(value);
    else if (key == "kind") e.documentation_only = value == "documentation";
    else if (key == "expect") expects.emplace_back(line, value);
    else throw CorpusError(e.name.empty() ? "line " + std::to_string(line) : e.name, "unknown key '" + key + "'");
  }
  if (e.name.empty()) throw CorpusError("line " + std::to_string(rec.line), "record has no name");
  if (e.documentation_only) return e;
  if (model.empty()) throw CorpusError(e.name, "no model file");
  e.model_path = dir / model;
  for (const auto& [line, text] : expects) e.expectations.push_back(parse_expectation(text, line, e.context));
  if (e.expectations.empty()) throw CorpusError(e.name, "no expectations");
  e.source = read_file(e.model_path);
  e.document = parse_model(e.source);
  return e;
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, bool tolerant) {
  const auto records = split_records(read_file(dir / "manifest.txt"));
  std::vector<CorpusEntry> out;
  for (const auto& rec : records) {
    std::string name;
    for (const auto& [line, kv] : rec.fields) {
      if (kv.first == "name") name = kv.second;
    }
    try {
      out.push_back(build_entry(rec, dir));
    } catch (const CorpusError& ex) {
      if (!tolerant) throw;
      CorpusEntry broken;
      broken.name = name.empty() ? "line " + std::to_string(rec.line) : name;
      broken.load_error = ex.what();
      out.push_back(std::move(broken));
    } catch (const std::exception& ex) {
      if (!tolerant) throw CorpusError(name, ex.what());
      CorpusEntry broken;
      broken.name = name;
      broken.load_error = ex.what();
      out.push_back(std::move(broken));
    }
  }
  return out;
}

EntryResult run_entry(const CorpusEntry& entry, const QueryOptions& opts) {
  EntryResult r;
  r.name = entry.name;
  if (!entry.load_error.empty()) {
    r.error = entry.load_error;
    return r;
  }
  if (!entry.document) {
    r.error = "entry has no model";
    return r;
  }
  r.pass = true;
  for (const auto& exp : entry.expectations) {
    CheckResult c;
    c.expectation = &exp;
    try {
      const QueryResult q = run_query(*entry.document, exp.query, opts);
      c.actual = q.flags;
      c.pass = true;
      for (const auto& [flag, want] : exp.flags) {
        auto it = q.flags.find(flag);
        if (it == q.flags.end()) {
          c.pass = false;
          c.error = "query has no flag '" + flag + "'";
        } else if (it->second != want) {
          c.pass = false;
        }
      }
    } catch (const std::exception& ex) {
      c.error = ex.what();
    }
    r.pass = r.pass && c.pass;
    r.checks.push_back(std::move(c));
  }
  return r;
}

bool name_matches(const std::string& pattern, const std::string& name) {
  return fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

}  // namespace hcm
