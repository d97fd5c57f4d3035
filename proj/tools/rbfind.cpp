// rbfind: finite model search for residuated binars.
//
// Exit codes: 0 success / pass, 1 verification failure or internal error,
// 2 usage or validation error. `search` exits 10 on SAT and 20 on UNSAT
// (0 when the answer is UNKNOWN), mirroring SAT-competition conventions.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rb/binar.hpp"
#include "rb/cnf.hpp"
#include "rb/grid.hpp"
#include "rb/model_io.hpp"
#include "rb/oracle.hpp"
#include "rb/report.hpp"
#include "rb/solver.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

rb::SolverSpec default_solver(const std::string& flag) {
  if (!flag.empty()) return rb::SolverSpec::parse(flag);
  if (const char* env = std::getenv("RB_SOLVER"); env && *env) return rb::SolverSpec::parse(env);
  return rb::SolverSpec::builtin();
}

std::optional<double> timeout_flag(double seconds) {
  if (seconds < 0) return std::nullopt;
  return seconds;
}

struct TaskFlags {
  int size = 0;
  std::string assume;
  std::string refute;
  bool distributive = false;

  rb::SearchTask build() const {
    std::optional<std::string> refute_name;
    if (!refute.empty() && refute != "none") refute_name = refute;
    return rb::make_task(size, split_list(assume), refute_name, distributive);
  }
};

void add_task_flags(CLI::App* cmd, TaskFlags& f, bool size_required) {
  auto* size = cmd->add_option("--size", f.size, "Carrier size");
  if (size_required) size->required();
  cmd->add_option("--assume", f.assume, "Comma-separated identities assumed (D1..D6, LD)");
  cmd->add_option("--refute", f.refute, "Identity that must fail (D1..D6, LD)");
  cmd->add_flag("--distributive", f.distributive, "Also assume lattice distributivity (LD)");
}

int cmd_check(const std::string& path, const TaskFlags& flags) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  const rb::FiniteBinar b = rb::binar_from_json(j);
  TaskFlags sized = flags;
  sized.size = b.size();
  const rb::SearchTask task = sized.build();
  const auto lattice = rb::check_lattice(b);
  std::cout << "lattice: " << lattice.summary() << "\n";
  if (!lattice.pass()) return kExitFail;
  const auto res = rb::check_residuation(b);
  std::cout << "residuation: " << res.summary() << "\n";
  bool ok = res.pass();
  for (const auto& id : task.assumed_identities()) {
    const auto cex = rb::check_identity(b, id);
    std::cout << id.name << ": " << (cex ? "fails" : "holds");
    if (cex) {
      for (const auto& [v, e] : *cex) std::cout << " " << v << "=" << e;
    }
    std::cout << "\n";
    ok = ok && !cex;
  }
  if (task.refute) {
    const auto cex = rb::check_identity(b, *task.refute);
    std::cout << task.refute->name << " (refuted): " << (cex ? "fails as required" : "holds, should fail") << "\n";
    ok = ok && cex;
  }
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite model finder for residuated binars"};
  app.require_subcommand(1);

  std::string solver_flag;
  double timeout = -1;

  auto* check = app.add_subcommand("check", "Verify a model file");
  std::string check_path;
  TaskFlags check_flags;
  check->add_option("model", check_path, "Model JSON")->required();
  add_task_flags(check, check_flags, false);

  auto* search = app.add_subcommand("search", "Search for one countermodel");
  TaskFlags search_flags;
  std::string search_out;
  bool search_no_sym = false;
  add_task_flags(search, search_flags, true);
  search->add_option("--solver", solver_flag, "\"builtin\" or a command template with {file}");
  search->add_option("--timeout", timeout, "Seconds");
  search->add_option("--out", search_out, "Append the result record (JSONL) to this file");
  search->add_flag("--no-symmetry", search_no_sym, "Disable symmetry-breaking clauses");

  auto* grid = app.add_subcommand("grid", "Run the independence experiment grid");
  rb::grid::GridConfig config;
  std::string ld_mode = "omit", grid_out, targets, subsets;
  grid->add_option("--min-size", config.min_size, "Smallest size (default 2)");
  grid->add_option("--max-size", config.max_size, "Largest size (default 10)");
  grid->add_option("--workers", config.workers, "Parallel workers");
  grid->add_option("--ld", ld_mode, "assume | omit | both");
  grid->add_option("--out", grid_out, "Output directory (results.jsonl, resumable)");
  grid->add_option("--solver", solver_flag, "\"builtin\" or a command template with {file}");
  grid->add_option("--timeout", timeout, "Seconds per task");
  grid->add_option("--targets", targets, "Comma-separated targets (default D1..D6)");
  grid->add_option("--subsets", subsets, "Explicit assumption sets, e.g. \"D1,D2;D4\" (default: all others)");
  grid->add_option("--size-ceiling", config.size_ceiling, "Largest permitted size (default 14)");

  auto* encode = app.add_subcommand("encode", "Emit the CNF of one task");
  TaskFlags encode_flags;
  std::string dimacs_path;
  bool encode_no_sym = false;
  add_task_flags(encode, encode_flags, true);
  encode->add_option("--dimacs", dimacs_path, "Output DIMACS file")->required();
  encode->add_flag("--no-symmetry", encode_no_sym, "Disable symmetry-breaking clauses");

  auto* report = app.add_subcommand("report", "Render LaTeX/DOT for a result directory");
  std::string report_in, report_out;
  report->add_option("--in", report_in, "Result directory")->required();
  report->add_option("--out", report_out, "Report directory")->required();

  auto* enumerate = app.add_subcommand("enumerate", "Exhaustive oracle enumeration");
  int enum_size = 0;
  bool count_only = false, up_to_iso = false, lattices_only = false;
  enumerate->add_option("--size", enum_size, "Carrier size")->required();
  enumerate->add_flag("--count-only", count_only, "Print only the total");
  enumerate->add_flag("--up-to-iso", up_to_iso, "One representative per isomorphism class");
  enumerate->add_flag("--lattices", lattices_only, "Enumerate lattices instead of residuated binars");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*check) return cmd_check(check_path, check_flags);

    if (*search) {
      const rb::SearchTask task = search_flags.build();
      const rb::SolverSpec spec = default_solver(solver_flag);
      const rb::grid::SearchResult r =
          rb::grid::run_task(rb::grid::GridTask{task, false}, spec, timeout_flag(timeout), {}, {!search_no_sym});
      std::cout << task.key() << " " << rb::status_name(r.status);
      if (!r.reason.empty()) std::cout << " (" << r.reason << ")";
      std::cout << " " << r.seconds << "s\n";
      if (r.model) std::cout << rb::to_json(*r.model).dump() << "\n";
      if (!search_out.empty()) {
        std::ofstream out(search_out, std::ios::app);
        rb::grid::persist_result(out, r);
      }
      if (r.reason.rfind("error:", 0) == 0) return kExitFail;
      if (r.status == rb::SolveStatus::Sat) return 10;
      if (r.status == rb::SolveStatus::Unsat) return 20;
      return 0;
    }

    if (*grid) {
      const auto mode = rb::grid::ld_mode_from_name(ld_mode);
      if (!mode) throw UsageError("--ld must be assume, omit or both");
      config.ld = *mode;
      if (!targets.empty()) config.targets = split_list(targets);
      if (!subsets.empty()) {
        config.policy = rb::grid::AssumptionPolicy::Explicit;
        config.subsets.clear();
        for (const auto& s : split_list(subsets, ';')) config.subsets.push_back(split_list(s));
      }
      config.out_dir = grid_out;
      config.solver = default_solver(solver_flag);
      config.timeout_seconds = timeout_flag(timeout);
      const auto tasks = rb::grid::build_grid(config);
      std::cerr << "grid: " << tasks.size() << " tasks, solver " << config.solver.describe() << "\n";
      const auto summary = rb::grid::run_grid(tasks, config, [](const rb::grid::SearchResult& r) {
        std::cout << r.task.task.key() << (r.task.expect_unsat ? " [expect UNSAT] " : " ")
                  << rb::status_name(r.status);
        if (!r.reason.empty()) std::cout << " (" << r.reason << ")";
        std::cout << " " << r.seconds << "s" << std::endl;
      });
      std::cerr << "grid: " << summary.results.size() << " records, " << summary.solver_invocations
                << " solver invocations, " << summary.resumed << " resumed, " << summary.expect_unsat_violations
                << " expect-UNSAT violations, " << summary.internal_errors << " errors\n";
      return summary.exit_code();
    }

    if (*encode) {
      const rb::SearchTask task = encode_flags.build();
      const rb::CnfInstance cnf = rb::encode_search(task, {!encode_no_sym});
      std::ofstream out(dimacs_path, std::ios::binary);
      if (!out) throw UsageError("cannot write " + dimacs_path);
      rb::write_dimacs(cnf, out);
      std::cout << "p cnf " << cnf.num_vars() << " " << cnf.num_clauses() << "\n";
      return 0;
    }

    if (*report) {
      const auto loaded = rb::grid::load_results(report_in);
      for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
      const auto files = rb::report::report_bundle(loaded.results, report_out);
      std::cout << files.size() << " files written to " << report_out << "\n";
      return 0;
    }

    if (*enumerate) {
      if (lattices_only) {
        const auto cat = rb::oracle::enumerate_lattices(enum_size, up_to_iso);
        if (count_only) {
          std::cout << cat.lattices.size() << "\n";
          return 0;
        }
        for (const auto& l : cat.lattices) {
          nlohmann::json j = {{"size", enum_size}};
          for (auto [name, t] : {std::pair{"meet", &l.meet}, std::pair{"join", &l.join}}) {
            nlohmann::json rows = nlohmann::json::array();
            for (int a = 0; a < enum_size; ++a) {
              nlohmann::json row = nlohmann::json::array();
              for (int c = 0; c < enum_size; ++c) row.push_back(t->at(a, c));
              rows.push_back(row);
            }
            j[name] = rows;
          }
          std::cout << j.dump() << "\n";
        }
        return 0;
      }
      std::vector<rb::FiniteBinar> kept;
      std::uint64_t count = 0;
      rb::oracle::for_each_residuated_binar(enum_size, [&](const rb::FiniteBinar& b) {
        if (up_to_iso) {
          for (const auto& k : kept) {
            if (rb::are_isomorphic(k, b)) return true;
          }
          kept.push_back(b);
        }
        ++count;
        if (!count_only) std::cout << rb::to_json(b).dump() << "\n";
        return true;
      });
      if (count_only) std::cout << count << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rb::TaskError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rb::UnknownName& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rb::grid::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rb::SizeOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rb::oracle::BoundExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rb::InvalidModel& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}
