#pragma once

// Worked-example fixtures: `.hcm` models plus a line-oriented manifest.
//
//   name: golf_clubs
//   model: golf_clubs.hcm
//   context: main
//   note: free text, may repeat
//   expect: harm event="GGC=0" default=0 -> harms=false
//
// Records are separated by blank lines; `#` starts a comment line. An entry
// with `kind: documentation` carries no model and is never run.

#include "hcm/query.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcm {

class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::string entry, const std::string& message)
      : std::runtime_error(entry + ": " + message), entry_(std::move(entry)) {}
  const std::string& entry() const { return entry_; }

 private:
  std::string entry_;
};

struct Expectation {
  QueryExpression query;  // context already filled in
  std::map<std::string, bool> flags;
  std::size_t line = 0;
};

struct CorpusEntry {
  std::string name;
  bool documentation_only = false;
  std::filesystem::path model_path;
  std::string source;
  std::optional<ModelDocument> document;
  std::string context;
  std::vector<std::string> notes;
  std::vector<Expectation> expectations;
  // Set instead of throwing when loaded tolerantly.
  std::string load_error;
};

// Reads `manifest.txt` in `dir`. Strict mode throws CorpusError naming the
// first broken entry; tolerant mode records the error on the entry.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, bool tolerant = false);

struct CheckResult {
  const Expectation* expectation = nullptr;
  std::map<std::string, bool> actual;
  bool pass = false;
  std::string error;
};

struct EntryResult {
  std::string name;
  bool pass = false;
  std::vector<CheckResult> checks;
  std::string error;
};

EntryResult run_entry(const CorpusEntry& entry, const QueryOptions& opts = {});

// Shell-style glob (`*`, `?`, `[...]`) against an entry name.
bool name_matches(const std::string& pattern, const std::string& name);

}  // namespace hcm
