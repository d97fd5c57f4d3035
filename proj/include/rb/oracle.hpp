#ifndef RB_ORACLE_HPP
#define RB_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "rb/binar.hpp"
#include "rb/cnf.hpp"

// Exhaustive ground truth for small sizes. Nothing here touches the CNF
// encoding or any SAT solver.
namespace rb::oracle {

class BoundExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxLatticeSize = 6;
inline constexpr int kMaxExhaustiveBinarSize = 3;
inline constexpr int kMaxSampledBinarSize = 4;

struct LatticeTables {
  Table meet;
  Table join;
  friend auto operator<=>(const LatticeTables&, const LatticeTables&) = default;
};

struct LatticeCatalogue {
  int size = 0;
  bool up_to_iso = false;
  std::vector<LatticeTables> lattices;
};

/// All lattices on {0..n-1}: every labeling when `up_to_iso` is false,
/// one representative per isomorphism class otherwise. Sorted by tables.
LatticeCatalogue enumerate_lattices(int n, bool up_to_iso);

/// Streams every residuated binar on {0..n-1} (all labeled lattices, all
/// mult tables, residuals derived). `visit` returns false to stop early.
/// With `up_to_iso_lattices` only one labeling per lattice is used, which
/// preserves existence but not counts.
void for_each_residuated_binar(int n, const std::function<bool(const FiniteBinar&)>& visit,
                               bool up_to_iso_lattices = false);

/// Non-exhaustive: `count` random residuated binars. Each draw picks a
/// labeled lattice and a random monotone mult with bottom absorbing, and is
/// kept when the residuals exist. For n <= 4.
std::vector<FiniteBinar> sample_residuated_binars(int n, std::size_t count, std::mt19937_64& rng);

/// First algebra of task.size elements satisfying the task, or nullopt when
/// none exists. size <= 3.
std::optional<FiniteBinar> oracle_search(const SearchTask& task);

/// Exact number of labeled residuated binars satisfying the task's
/// constraints (task.refute may be empty). size <= 3.
std::uint64_t count_models(const SearchTask& task);

}  // namespace rb::oracle

#endif  // RB_ORACLE_HPP
