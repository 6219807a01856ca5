#pragma once

// Scenario files, deterministic reports, command dispatch and the property suite.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pi01/functional.hpp"
#include "pi01/strings.hpp"

namespace pi01 {

struct Scenario {
  std::map<std::string, FunctionalTable> functionals;
  std::map<std::string, FiniteTree> trees;
  std::map<std::string, StagedTree> staged;
  std::map<std::string, std::int64_t> params;
  std::uint64_t seed = 0;

  /// not_a_member error for a dangling name.
  const FunctionalTable& functional(const std::string& name) const;
  const FiniteTree& tree(const std::string& name) const;
  const StagedTree& staged_tree(const std::string& name) const;
};

/// Line-oriented format with [functional N], [tree N], [staged N] and [params] sections.
/// Format errors carry the line number; clashing axioms name both lines.
Scenario parse_scenario(std::string_view text);
/// Canonical form: params first (seed, then keys sorted), then sections by kind and name.
std::string serialize_scenario(const Scenario& s);

enum class Status { pass, fail, error };
const char* to_string(Status s);

struct ReportLine {
  Status status = Status::pass;
  std::string check_id;
  std::string witness;
  friend bool operator==(const ReportLine&, const ReportLine&) = default;
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<ReportLine> lines;

  void add(Status status, std::string check_id, std::string witness = {});
  void check(bool ok, std::string check_id, std::string witness = {});
  bool ok() const;
  int exit_code() const { return ok() ? 0 : 1; }
  /// Header with command and seed, then one tab-separated line per check.
  std::string render() const;
};

std::string tokens(const FiniteTree& t);

/// cmd is the command line after the program name, e.g. "verify twocol --n 1 --exhaustive".
/// Unknown commands raise a protocol error; failures inside a check become ERROR lines.
Report run_command(const std::string& cmd, const Scenario& scenario);

enum class SuiteLevel { fast, full };

struct SuiteOptions {
  std::uint64_t seed = 1;
  bool inject_mutant = false;  ///< flips one colour after every twocol extraction
};

/// Lines sorted by check id.
Report run_suite(SuiteLevel level, const SuiteOptions& opts);

}  // namespace pi01
