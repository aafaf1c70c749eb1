#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "janaka/llm.hpp"
#include "janaka/repair.hpp"
#include "janaka/semantics.hpp"
#include "janaka/template.hpp"
#include "janaka/trace.hpp"

namespace janaka {

struct RunConfig {
  std::string trace_path;
  std::string explanation_path;
  SemanticsParams params;
  double kappa = 0.5;
  int d = 2;
  int k = 1;
  /// Unset: try GTemp, Random, then WithGF until kappa is met.
  std::optional<Strategy> strategy;
  double hole_prob = 0.2;
  int templates_per_formula = 4;
  /// "mock" (replays fixture_dir) or "http".
  std::string provider = "mock";
  std::string fixture_dir;
  HttpConfig http;
  std::uint64_t seed = 1;
  SearchBudget budget;
  std::string output;
  int n_candidates = 5;
  PromptMode mode = PromptMode::OneShot;
  int max_retries = 2;
  /// Restrict repair to formulas that every trace satisfies.
  bool require_sat = true;
  std::string notes;

  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

enum class RunPath { LlmDirect, Repaired, Failed };
std::string to_string(RunPath p);

struct CandidateRow {
  std::string formula;
  double fitness;
  bool sat;
};

struct RunReport {
  std::optional<Formula> formula;
  RunPath path = RunPath::Failed;
  double fitness = 0.0;
  bool sat = false;
  std::vector<CandidateRow> candidates;
  std::optional<RepairOutcome> repair;
  std::string repair_template;
  std::string repair_strategy;
  std::vector<std::string> strategies_tried;
  std::string provider_id;
  std::size_t provider_calls = 0;
  double llm_s = 0.0;
  double repair_s = 0.0;
  double total_s = 0.0;
  RunConfig config;

  /// Timing fields are omitted when with_timings is false.
  nlohmann::json to_json(bool with_timings = true) const;
};

/// Algorithm body on an in-memory sample and an explicit provider.
RunReport janaka_run(const RunConfig& cfg, const Sample& sample, const std::string& explanation,
                     Provider& provider);
/// Reads the trace and explanation files and builds the configured provider.
RunReport janaka_run(const RunConfig& cfg);

std::unique_ptr<Provider> make_provider(const RunConfig& cfg);

struct EvalRow {
  double score;
  bool decisive;
  bool sat;
};

struct EvalResult {
  std::string formula;
  SemanticsKind kind;
  double fitness;
  double total;
  std::vector<EvalRow> rows;
};

/// Scores a formula under the given semantics (or both when `both`).
std::vector<EvalResult> eval_formula(const std::string& formula, const Sample& sample,
                                     const SemanticsParams& p, bool both = false);

struct BenchCase {
  std::string name;
  std::string ground_truth;
  std::vector<std::string> props;
  std::string explanation;
  GenerateOptions gen;
  RunConfig run;
  bool expect_sat = true;
  bool expect_improvement = true;
};

struct BenchRow {
  std::string name;
  std::string llm_formula;
  bool llm_sat = false;
  double llm_fit = 0.0;
  std::string repaired_formula;
  bool repaired_sat = false;
  double repaired_fit = 0.0;
  std::string path;
  double runtime_s = 0.0;
  bool claims_ok = false;
  std::string error;  // empty on success
  std::string error_code;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string markdown() const;
  nlohmann::json to_json(bool with_timings = true) const;
};

BenchCase load_bench_case(const std::string& dir);
/// Runs every case directory under `suite` (sorted by name). Per-case
/// failures are recorded in their row. Writes report.md, report.json and one
/// JSON file per case to `out` when non-empty.
BenchReport bench_run(const std::string& suite, const std::string& out, int threads = 1);

}  // namespace janaka
