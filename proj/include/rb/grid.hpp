#ifndef RB_GRID_HPP
#define RB_GRID_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

#include <json.hpp>

#include "rb/binar.hpp"
#include "rb/cnf.hpp"
#include "rb/solver.hpp"

namespace rb::grid {

/// Least fixpoint of the six derivation rules valid under LD:
/// {D4,D5}->D3, {D3,D6}->D4, {D1,D4}->D6, {D2,D3}->D5, {D5,D1}->D2, {D6,D2}->D1.
std::set<std::string> implication_closure(const std::set<std::string>& assumed);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class AssumptionPolicy { AllOthers, Explicit };
enum class LdMode { Assume, Omit, Both };

std::optional<LdMode> ld_mode_from_name(std::string_view s);  // "assume", "omit", "both"

inline constexpr int kDefaultSizeCeiling = 14;

struct GridConfig {
  std::vector<std::string> targets = {"D1", "D2", "D3", "D4", "D5", "D6"};
  AssumptionPolicy policy = AssumptionPolicy::AllOthers;
  /// Used with AssumptionPolicy::Explicit. Subsets containing the target
  /// are skipped for that target.
  std::vector<std::vector<std::string>> subsets;
  LdMode ld = LdMode::Omit;
  int min_size = 2;
  int max_size = 10;
  int size_ceiling = kDefaultSizeCeiling;
  int workers = 1;
  std::optional<double> timeout_seconds;
  SolverSpec solver;
  std::filesystem::path out_dir;

  /// Throws ConfigError.
  void validate() const;
};

struct GridTask {
  SearchTask task;
  /// Target lies in the implication closure of the assumptions (LD assumed).
  bool expect_unsat = false;
};

/// Everything but the size: one independence question.
std::string goal_key(const SearchTask& task);

/// targets x LD modes x assumption sets x sizes, ordered by target, then
/// goal, then ascending size.
std::vector<GridTask> build_grid(const GridConfig& config);

struct SearchResult {
  GridTask task;
  SolveStatus status = SolveStatus::Unknown;
  std::optional<FiniteBinar> model;
  double seconds = 0.0;
  std::string solver;
  std::string reason;
  std::optional<double> timeout_seconds;

  /// Whether a resumed run may skip this task.
  bool is_final() const;
};

nlohmann::json task_to_json(const GridTask& task);
GridTask task_from_json(const nlohmann::json& j);
nlohmann::json result_to_json(const SearchResult& r);
SearchResult result_from_json(const nlohmann::json& j);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnverifiedModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kResultsFile = "results.jsonl";

/// Appends one JSON line. SAT results are re-verified first; a model that
/// fails (or is missing) raises UnverifiedModel and nothing is written.
void persist_result(std::ostream& out, const SearchResult& r);

struct LoadedResults {
  std::vector<SearchResult> results;
  std::vector<std::string> warnings;
};

/// Reads `<dir>/results.jsonl`. A malformed final line is dropped with a
/// warning; malformed lines elsewhere raise IoError. Missing file: empty.
LoadedResults load_results(const std::filesystem::path& dir);

/// Encode, solve, decode and verify a single task. Solver failures become
/// UNKNOWN results whose reason starts with "error:".
SearchResult run_task(const GridTask& task, const SolverSpec& solver, std::optional<double> timeout_seconds,
                      std::stop_token stop = {}, const EncodeOptions& encoding = {});

struct RunSummary {
  std::vector<SearchResult> results;  // produced by this run, in write order
  std::size_t solver_invocations = 0;
  std::size_t resumed = 0;  // tasks skipped because a final record existed
  std::size_t expect_unsat_violations = 0;
  std::size_t internal_errors = 0;

  int exit_code() const { return expect_unsat_violations == 0 && internal_errors == 0 ? 0 : 1; }
};

/// Goals run in parallel on `config.workers` threads; within a goal sizes
/// run in ascending order and stop at the first SAT (remaining sizes get
/// "skipped" records). Results are appended to config.out_dir as they
/// arrive, by the calling thread only.
RunSummary run_grid(const std::vector<GridTask>& tasks, const GridConfig& config,
                    const std::function<void(const SearchResult&)>& on_result = {}, std::stop_token stop = {});

}  // namespace rb::grid

#endif  // RB_GRID_HPP
