#include <algorithm>
#include <chrono>
#include <cstdlib>

#include "rb/solver.hpp"

namespace rb {

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<SolveStatus> status_from_name(std::string_view s) {
  if (s == "SAT") return SolveStatus::Sat;
  if (s == "UNSAT") return SolveStatus::Unsat;
  if (s == "UNKNOWN") return SolveStatus::Unknown;
  return std::nullopt;
}

bool satisfies(const CnfInstance& cnf, const std::vector<bool>& assignment) {
  for (std::size_t i = 0; i < cnf.num_clauses(); ++i) {
    bool sat = false;
    for (int l : cnf.clause(i)) {
      const auto v = static_cast<std::size_t>(std::abs(l));
      if (v < assignment.size() && assignment[v] == (l > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

namespace {

// Literal codes: 2*var for the positive literal, 2*var+1 for the negative.
inline int code(int lit) { return lit > 0 ? 2 * lit : 2 * -lit + 1; }
inline int neg(int c) { return c ^ 1; }
inline int var_of(int c) { return c >> 1; }

class Dpll {
 public:
  Dpll(const CnfInstance& cnf, const SolveBudget& budget, std::stop_token stop)
      : budget_(budget), stop_(std::move(stop)), num_vars_(cnf.num_vars()),
        value_(num_vars_ + 1, kUnassigned), watches_(2 * (num_vars_ + 1)) {
    load(cnf);
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    result.status = search(start, result.reason);
    result.stats = stats_;
    result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.status == SolveStatus::Sat) {
      result.assignment.assign(num_vars_ + 1, false);
      for (int v = 1; v <= num_vars_; ++v) result.assignment[v] = value_[v] == kTrue;
    }
    return result;
  }

 private:
  static constexpr signed char kUnassigned = -1, kFalse = 0, kTrue = 1;

  signed char lit_value(int c) const {
    const signed char v = value_[var_of(c)];
    if (v == kUnassigned) return kUnassigned;
    return (c & 1) ? static_cast<signed char>(1 - v) : v;
  }

  void load(const CnfInstance& cnf) {
    std::vector<int> lits;
    for (std::size_t i = 0; i < cnf.num_clauses(); ++i) {
      lits.clear();
      bool tautology = false;
      for (int l : cnf.clause(i)) lits.push_back(code(l));
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      for (std::size_t k = 1; k < lits.size(); ++k) tautology |= (lits[k] == neg(lits[k - 1]));
      if (tautology) continue;
      if (lits.size() == 1) {
        units_.push_back(lits[0]);
        continue;
      }
      const int idx = static_cast<int>(starts_.size());
      starts_.push_back(static_cast<int>(store_.size()));
      sizes_.push_back(static_cast<int>(lits.size()));
      store_.insert(store_.end(), lits.begin(), lits.end());
      watches_[lits[0]].push_back(idx);
      watches_[lits[1]].push_back(idx);
    }
  }

  bool enqueue(int c) {
    const signed char v = lit_value(c);
    if (v == kTrue) return true;
    if (v == kFalse) return false;
    value_[var_of(c)] = (c & 1) ? kFalse : kTrue;
    trail_.push_back(c);
    return true;
  }

  // false on conflict
  bool propagate() {
    while (qhead_ < trail_.size()) {
      const int false_lit = neg(trail_[qhead_++]);
      ++stats_.propagations;
      auto& ws = watches_[false_lit];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const int ci = ws[i];
        if (conflict) {
          ws[keep++] = ci;
          continue;
        }
        int* c = &store_[starts_[ci]];
        const int size = sizes_[ci];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == kTrue) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (int k = 2; k < size; ++k) {
          if (lit_value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (!enqueue(c[0])) conflict = true;
      }
      ws.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  void undo_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
      const int v = var_of(trail_.back());
      value_[v] = kUnassigned;
      scan_from_ = std::min(scan_from_, v);
      trail_.pop_back();
    }
    qhead_ = trail_.size();
  }

  struct Level {
    int decision;
    std::size_t trail_start;
    bool flipped;
  };

  SolveStatus search(std::chrono::steady_clock::time_point start, std::string& reason) {
    for (int u : units_) {
      if (!enqueue(u)) return SolveStatus::Unsat;
    }
    if (!propagate()) return SolveStatus::Unsat;
    while (true) {
      if ((stats_.decisions & 255) == 0) {
        if (stop_.stop_requested()) {
          reason = "cancelled";
          return SolveStatus::Unknown;
        }
        if (budget_.timeout_seconds &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
                *budget_.timeout_seconds) {
          reason = "timeout";
          return SolveStatus::Unknown;
        }
      }
      if (budget_.max_decisions && stats_.decisions >= *budget_.max_decisions) {
        reason = "decision limit";
        return SolveStatus::Unknown;
      }
      while (scan_from_ <= num_vars_ && value_[scan_from_] != kUnassigned) ++scan_from_;
      if (scan_from_ > num_vars_) return SolveStatus::Sat;

      ++stats_.decisions;
      const int decision = 2 * scan_from_;
      levels_.push_back({decision, trail_.size(), false});
      enqueue(decision);
      while (!propagate()) {
        while (!levels_.empty() && levels_.back().flipped) {
          undo_to(levels_.back().trail_start);
          levels_.pop_back();
        }
        if (levels_.empty()) return SolveStatus::Unsat;
        Level& top = levels_.back();
        undo_to(top.trail_start);
        top.flipped = true;
        top.decision = neg(top.decision);
        enqueue(top.decision);
      }
    }
  }

  SolveBudget budget_;
  std::stop_token stop_;
  int num_vars_;
  std::vector<signed char> value_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> store_, starts_, sizes_, units_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  std::vector<Level> levels_;
  int scan_from_ = 1;
  SolveStats stats_;
};

}  // namespace

SolveResult solve_builtin(const CnfInstance& cnf, const SolveBudget& budget, std::stop_token stop) {
  SolveResult result = Dpll(cnf, budget, std::move(stop)).run();
  if (result.status == SolveStatus::Sat && !satisfies(cnf, result.assignment)) {
    throw BogusModel("builtin solver produced a non-satisfying assignment");
  }
  return result;
}

}  // namespace rb
