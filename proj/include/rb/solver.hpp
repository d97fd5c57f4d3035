#ifndef RB_SOLVER_HPP
#define RB_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "rb/cnf.hpp"

namespace rb {

enum class SolveStatus { Sat, Unsat, Unknown };

std::string_view status_name(SolveStatus s);  // "SAT", "UNSAT", "UNKNOWN"
std::optional<SolveStatus> status_from_name(std::string_view s);

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  double seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  /// On SAT: assignment[v] for v in 1..V; index 0 unused.
  std::vector<bool> assignment;
  SolveStats stats;
  /// Why the answer is UNKNOWN ("timeout", "decision limit", "cancelled", ...).
  std::string reason;
};

struct SolveBudget {
  std::optional<std::uint64_t> max_decisions;
  std::optional<double> timeout_seconds;
};

/// DPLL: two-watched-literal unit propagation, chronological backtracking,
/// branching on the lowest-numbered unassigned variable (true first).
/// Meant for small instances.
SolveResult solve_builtin(const CnfInstance& cnf, const SolveBudget& budget = {}, std::stop_token stop = {});

class SolverSpawnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a solver claims SAT with an assignment that falsifies a clause.
class BogusModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SAT-competition output: "s SATISFIABLE" / "s UNSATISFIABLE" /
/// "s UNKNOWN" plus "v ..." lines terminated by 0. `num_vars` sizes the
/// assignment (unmentioned variables are false).
SolveResult parse_solver_output(std::string_view text, int num_vars = 0);

/// Runs `command_template` through /bin/sh with "{file}" replaced by a
/// temporary DIMACS path (appended when the placeholder is absent).
/// Exit codes 10/20 are honored when no status line is printed.
SolveResult solve_external(const CnfInstance& cnf, const std::string& command_template,
                           std::optional<double> timeout_seconds, std::stop_token stop = {});

/// "builtin" or an external command template.
struct SolverSpec {
  std::string command;  // empty means builtin

  static SolverSpec builtin() { return {}; }
  static SolverSpec parse(std::string_view text);
  bool is_builtin() const { return command.empty(); }
  std::string describe() const { return is_builtin() ? "builtin" : command; }
};

/// Dispatches on the spec. Every SAT answer is re-checked against all clauses.
SolveResult solve(const CnfInstance& cnf, const SolverSpec& spec, std::optional<double> timeout_seconds,
                  std::stop_token stop = {});

/// True iff `assignment` satisfies every clause.
bool satisfies(const CnfInstance& cnf, const std::vector<bool>& assignment);

}  // namespace rb

#endif  // RB_SOLVER_HPP
