#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace hyg {

enum class VerdictStatus { kPass, kFail, kSkipped };

const char* verdict_name(VerdictStatus s);

/// A checked property. `id` is stable across releases: experiment checks use
/// "<kind>.<property>", acceptance criteria use "AC<n>".
struct Verdict {
  std::string id;
  std::string experiment;
  VerdictStatus status = VerdictStatus::kPass;
  std::string detail;
  double seconds = 0;
};

struct CsvTable {
  std::string name;  // file suffix; empty for the experiment's main table
  std::string text;
};

struct ExperimentResult {
  std::string name;
  std::string kind;
  std::vector<CsvTable> tables;
  std::optional<std::string> error;
  std::string error_kind;
  double seconds = 0;
};

struct RunReport {
  std::string config_echo;
  std::map<std::string, std::string> versions;
  std::vector<ExperimentResult> experiments;
  std::vector<Verdict> verdicts;

  /// 0 when nothing failed, 1 on a failed verdict or experiment error.
  int exit_code() const;
  std::string to_json() const;
  /// Writes <name>[-<table>].csv per table and report.json into dir.
  void write(const std::string& dir) const;
};

std::map<std::string, std::string> module_versions();

/// Runs the experiments sequentially; workers only parallelize inside one.
RunReport run(const ExperimentConfig& cfg);

/// Formats doubles so that identical inputs give identical bytes.
std::string format_double(double v);

}  // namespace hyg
