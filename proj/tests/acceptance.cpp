// Acceptance suite: one PASS/FAIL line per criterion on stdout, details on stderr.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "rb/cnf.hpp"
#include "rb/grid.hpp"
#include "rb/oracle.hpp"
#include "rb/report.hpp"
#include "rb/solver.hpp"
#include "support.hpp"

using namespace rb;

namespace {

// Pinned tolerances and budgets.
constexpr std::size_t kAllowedMismatches = 0;
constexpr int kDerivableMaxSize = 5;
constexpr int kRefuteOthersMaxSize = 12;
constexpr double kRefuteOthersBudgetSeconds = 4 * 3600.0;
constexpr int kIndependenceMaxSize = 6;
constexpr double kIndependenceBudgetSeconds = 600.0;
constexpr std::size_t kRoundTripTasks = 100;
constexpr int kRoundTripMaxSize = 4;
constexpr int kParserRoundTrips = 1000;
constexpr std::uint64_t kSeed = 20240611;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

void report_line(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << o.detail << ")"
            << std::endl;
}

std::vector<std::string> others(const std::string& t) {
  std::vector<std::string> out;
  for (const auto& n : distributivity_names())
    if (n != t) out.push_back(n);
  return out;
}

std::vector<std::string> pick(const std::vector<std::string>& pool, unsigned mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (mask & (1u << i)) out.push_back(pool[i]);
  return out;
}

// Every target in D1..D6 or none, every subset of the remaining
// distributivity identities, with and without LD.
std::vector<SearchTask> equivalence_tasks(int n) {
  std::vector<SearchTask> tasks;
  std::vector<std::optional<std::string>> targets{std::nullopt};
  for (const auto& t : distributivity_names()) targets.emplace_back(t);
  for (const auto& target : targets) {
    const auto pool = target ? others(*target) : distributivity_names();
    for (unsigned mask = 0; mask < (1u << pool.size()); ++mask)
      for (bool ld : {false, true}) tasks.push_back(make_task(n, pick(pool, mask), target, ld));
  }
  return tasks;
}

bool independently_verified(const FiniteBinar& m, const SearchTask& task) {
  return naive::is_countermodel(m, task.assumed_identities(), task.refute) &&
         verify_model(m, task.assumed_identities(), task.refute).pass();
}

struct EquivalenceRun {
  std::size_t tasks = 0, mismatches_sym = 0, mismatches_plain = 0, flips = 0, unverified = 0, unknown = 0;
  double seconds = 0;
};

// Criteria 1 and 6 share one sweep.
EquivalenceRun run_equivalence() {
  EquivalenceRun run;
  const auto start = Clock::now();
  for (int n = 2; n <= 3; ++n) {
    for (const SearchTask& task : equivalence_tasks(n)) {
      ++run.tasks;
      const bool exists = oracle::oracle_search(task).has_value();
      for (bool symmetry : {true, false}) {
        const CnfInstance cnf = encode_search(task, EncodeOptions{symmetry});
        const SolveResult r = solve_builtin(cnf);
        if (r.status == SolveStatus::Unknown) {
          ++run.unknown;
          continue;
        }
        const bool sat = r.status == SolveStatus::Sat;
        if (sat && !independently_verified(decode_model(r.assignment, cnf.varmap), task)) ++run.unverified;
        if (sat != exists) {
          ++(symmetry ? run.mismatches_sym : run.mismatches_plain);
          if (symmetry && exists) ++run.flips;
          std::cerr << "mismatch: " << task.key() << " symmetry=" << symmetry << " oracle=" << exists
                    << " solver=" << status_name(r.status) << "\n";
        }
      }
    }
  }
  run.seconds = since(start);
  return run;
}

Outcome criterion1(const EquivalenceRun& run) {
  std::ostringstream d;
  d << run.tasks << " tasks at n=2,3, " << run.mismatches_sym << " mismatches, " << run.unverified
    << " unverified models, " << run.unknown << " unknown, " << static_cast<int>(run.seconds) << " s";
  return {run.mismatches_sym <= kAllowedMismatches && run.unverified == 0 && run.unknown == 0, d.str()};
}

Outcome criterion6(const EquivalenceRun& run) {
  std::ostringstream d;
  d << run.flips << " SAT->UNSAT flips with symmetry clauses, " << run.mismatches_plain
    << " mismatches without them, over " << run.tasks << " tasks";
  return {run.flips <= kAllowedMismatches && run.mismatches_plain <= kAllowedMismatches && run.unknown == 0,
          d.str()};
}

Outcome criterion2(const SolverSpec& solver) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> items{
      {{"D4", "D5"}, "D3"}, {{"D3", "D6"}, "D4"}, {{"D1", "D4"}, "D6"},
      {{"D2", "D3"}, "D5"}, {{"D1", "D5"}, "D2"}, {{"D2", "D6"}, "D1"}};
  std::size_t unsat = 0, sat = 0, unknown = 0;
  const auto start = Clock::now();
  for (const auto& [assume, target] : items) {
    for (int n = 2; n <= kDerivableMaxSize; ++n) {
      const grid::GridTask task{make_task(n, assume, target, true), true};
      const auto r = grid::run_task(task, solver, std::nullopt);
      if (r.status == SolveStatus::Unsat) ++unsat;
      else if (r.status == SolveStatus::Sat) ++sat;
      else ++unknown;
      if (r.status != SolveStatus::Unsat)
        std::cerr << "derivable " << task.task.key() << ": " << status_name(r.status) << " " << r.reason << "\n";
    }
  }
  std::ostringstream d;
  d << unsat << " UNSAT, " << sat << " SAT, " << unknown << " unknown over 6 items x sizes 2.."
    << kDerivableMaxSize << ", " << static_cast<int>(since(start)) << " s";
  return {sat == 0 && unknown == 0, d.str()};
}

Outcome criterion3(const SolverSpec& solver) {
  std::ostringstream d;
  bool all = true;
  for (const auto& target : distributivity_names()) {
    const auto start = Clock::now();
    std::optional<int> found;
    std::string failure;
    for (int n = 2; n <= kRefuteOthersMaxSize && !found; ++n) {
      const double left = kRefuteOthersBudgetSeconds - since(start);
      if (left <= 0) {
        failure = "budget exhausted before size " + std::to_string(n);
        break;
      }
      const grid::GridTask task{make_task(n, others(target), target, false), false};
      const auto r = grid::run_task(task, solver, left);
      std::cerr << "refute from others " << target << " n=" << n << ": " << status_name(r.status) << " "
                << static_cast<int>(r.seconds) << " s " << r.reason << "\n";
      if (r.status == SolveStatus::Sat) {
        if (r.model && independently_verified(*r.model, task.task)) {
          found = n;
        } else {
          failure = "unverified model at size " + std::to_string(n);
          break;
        }
      } else if (r.status == SolveStatus::Unknown) {
        failure = "unknown at size " + std::to_string(n) + ": " + r.reason;
        break;
      }
    }
    d << (d.tellp() > 0 ? ", " : "") << target << ": ";
    if (found) {
      d << "size " << *found << " in " << static_cast<int>(since(start)) << " s";
    } else {
      d << (failure.empty() ? "none up to size " + std::to_string(kRefuteOthersMaxSize) : failure);
      all = false;
    }
  }
  return {all, d.str()};
}

Outcome criterion4(const SolverSpec& solver) {
  std::vector<FiniteBinar> found;  // reusable witnesses
  std::size_t pairs = 0, witnessed = 0, reused = 0;
  std::map<int, std::size_t> by_size;
  const auto start = Clock::now();
  for (const auto& target : distributivity_names()) {
    const auto pool = others(target);
    for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
      const auto assume = pick(pool, mask);
      if (grid::implication_closure({assume.begin(), assume.end()}).count(target)) continue;
      ++pairs;
      const auto task_at = [&](int n) { return make_task(n, assume, target, true); };

      bool ok = false;
      for (const FiniteBinar& m : found) {
        const SearchTask candidate = task_at(m.size());
        if (independently_verified(m, candidate)) {
          ok = true;
          ++reused;
          ++by_size[m.size()];
          break;
        }
      }
      const auto pair_start = Clock::now();
      for (int n = 2; n <= kIndependenceMaxSize && !ok; ++n) {
        const double left = kIndependenceBudgetSeconds - since(pair_start);
        if (left <= 0) break;
        const grid::GridTask task{task_at(n), false};
        const auto r = grid::run_task(task, solver, left);
        if (r.status == SolveStatus::Sat && r.model && independently_verified(*r.model, task.task)) {
          ok = true;
          ++by_size[n];
          found.push_back(*r.model);
        } else if (r.status != SolveStatus::Unsat) {
          std::cerr << "independence " << task.task.key() << ": " << status_name(r.status) << " " << r.reason
                    << "\n";
          break;
        }
      }
      if (ok) ++witnessed;
      else std::cerr << "independence: no countermodel for " << task_at(kIndependenceMaxSize).key() << "\n";
    }
  }
  std::ostringstream d;
  d << witnessed << "/" << pairs << " pairs witnessed (" << reused << " by earlier models); sizes";
  for (const auto& [n, c] : by_size) d << " " << n << ":" << c;
  d << ", " << static_cast<int>(since(start)) << " s";
  return {witnessed == pairs, d.str()};
}

Outcome criterion5(const SolverSpec& solver) {
  std::mt19937_64 rng(kSeed);
  std::vector<std::string> refutable = distributivity_names();
  refutable.push_back("LD");
  std::size_t accepted = 0, draws = 0, bad = 0;
  std::map<int, std::size_t> sizes;
  while (accepted < kRoundTripTasks && draws < 50 * kRoundTripTasks) {
    ++draws;
    const int n = std::uniform_int_distribution<int>(2, kRoundTripMaxSize)(rng);
    std::optional<std::string> refute;
    if (rng() % 4 != 0) refute = refutable[rng() % refutable.size()];
    std::vector<std::string> assume;
    for (const auto& name : refutable)
      if (name != refute && rng() % 3 == 0) assume.push_back(name);
    const SearchTask task = make_task(n, assume, refute, false);
    const CnfInstance cnf = encode_search(task);
    const SolveResult r = solve(cnf, solver, 60.0);
    if (r.status != SolveStatus::Sat) continue;
    ++accepted;
    ++sizes[n];
    const FiniteBinar m = decode_model(r.assignment, cnf.varmap);
    const bool lattice = check_lattice(m).pass() && naive::is_lattice(m);
    const bool residuated = check_residuation(m).pass() && naive::is_residuated(m);
    bool assumed = true;
    for (const auto& id : task.assumed_identities()) assumed = assumed && naive::holds(m, id) && !check_identity(m, id);
    const bool refuted = !task.refute || (!naive::holds(m, *task.refute) && check_identity(m, *task.refute));
    if (!(lattice && residuated && assumed && refuted)) {
      ++bad;
      std::cerr << "round trip failed: " << task.key() << "\n";
    }
  }
  std::ostringstream d;
  d << accepted << " satisfiable tasks from " << draws << " draws, " << bad << " failures; sizes";
  for (const auto& [n, c] : sizes) d << " " << n << ":" << c;
  return {accepted == kRoundTripTasks && bad <= kAllowedMismatches, d.str()};
}

Outcome criterion7() {
  const std::size_t expected[] = {0, 1, 1, 1, 2, 5};
  std::ostringstream d;
  bool ok = true;
  d << "lattices up to iso:";
  for (int n = 1; n <= 5; ++n) {
    const std::size_t got = oracle::enumerate_lattices(n, true).lattices.size();
    d << " " << got;
    ok = ok && got == expected[n];
  }
  const auto refute_ld = oracle::count_models(make_task(3, {}, std::string("LD"), false));
  d << "; n=3 refute-LD models: " << refute_ld;
  return {ok && refute_ld == 0, d.str()};
}

Term random_term(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"x", "y", "z", "w", "ab"};
  if (depth == 0 || rng() % 4 == 0) return Term::variable(names[rng() % 5]);
  const Op op = kAllOps[rng() % std::size(kAllOps)];
  return Term::apply(op, random_term(rng, depth - 1), random_term(rng, depth - 1));
}

Outcome criterion8() {
  const std::filesystem::path golden(RB_GOLDEN_DIR);
  std::vector<std::string> failed;
  const auto same = [&](const std::string& file, const std::string& actual) {
    if (testutil::slurp(golden / file) != actual) failed.push_back(file);
  };
  same("base_n2.cnf", write_dimacs(encode_search(make_task(2, {}, std::nullopt, false))));
  for (const auto& [prefix, model] :
       {std::pair{std::string("chain2"), models::chain_with_meet(2)}, std::pair{std::string("m3"), models::m3_with_zero_mult()}}) {
    std::string tables;
    for (Op op : kAllOps) tables += report::cayley_latex(model, op_name(op));
    same(prefix + "_tables.tex", tables);
    same(prefix + "_hasse.dot", report::hasse_dot(model));
    same(prefix + "_hasse.tex", report::hasse_tikz(model));
  }
  std::mt19937_64 rng(kSeed);
  int round_trip_failures = 0;
  for (int i = 0; i < kParserRoundTrips; ++i) {
    const Term t = random_term(rng, 5);
    try {
      if (!(parse_term(format_term(t)) == t)) ++round_trip_failures;
    } catch (const SyntaxError&) {
      ++round_trip_failures;
    }
  }
  std::ostringstream d;
  d << "7 golden files, " << failed.size() << " differ";
  for (const auto& f : failed) d << " " << f;
  d << "; " << kParserRoundTrips << " parser round trips, " << round_trip_failures << " failures";
  return {failed.empty() && round_trip_failures == 0, d.str()};
}

SolverSpec default_solver() {
  if (const char* env = std::getenv("RB_SOLVER"); env && *env) return SolverSpec::parse(env);
  if (std::system("python3 -c 'import pysat' >/dev/null 2>&1") == 0)
    return SolverSpec::parse(std::string("python3 ") + RB_PYSAT_SCRIPT + " {file}");
  return SolverSpec::builtin();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rb_acceptance: acceptance criteria 1-8"};
  std::vector<int> only;
  std::string solver_text;
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 8));
  app.add_option("--solver", solver_text, "External solver for criteria 2-5 (default: RB_SOLVER, then pysat)");
  CLI11_PARSE(app, argc, argv);

  const SolverSpec solver = solver_text.empty() ? default_solver() : SolverSpec::parse(solver_text);
  std::cerr << "solver: " << solver.describe() << "\n";
  const std::set<int> wanted = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8} : std::set<int>(only.begin(), only.end());

  bool all = true;
  const auto emit = [&](int id, const std::string& title, const Outcome& o) {
    report_line(id, title, o);
    all = all && o.pass;
  };

  std::optional<EquivalenceRun> eq;
  if (wanted.count(1) || wanted.count(6)) eq = run_equivalence();
  if (wanted.count(1)) emit(1, "oracle-encoder equivalence", criterion1(*eq));
  if (wanted.count(2)) emit(2, "derivable laws stay UNSAT", criterion2(solver));
  if (wanted.count(3)) emit(3, "each law fails in a model of the other five", criterion3(solver));
  if (wanted.count(4)) emit(4, "independence with LD", criterion4(solver));
  if (wanted.count(5)) emit(5, "decoded models verify", criterion5(solver));
  if (wanted.count(6)) emit(6, "symmetry breaking is sound", criterion6(*eq));
  if (wanted.count(7)) emit(7, "oracle regression constants", criterion7());
  if (wanted.count(8)) emit(8, "golden outputs and parser round trip", criterion8());
  return all ? 0 : 1;
}
