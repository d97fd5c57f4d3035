#include "rb/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace rb::oracle {

namespace {

// Meet and join of a partial order given as a leq matrix, or nullopt when
// some pair lacks a glb or lub.
std::optional<LatticeTables> tables_from_order(const std::vector<std::vector<bool>>& leq) {
  const int n = static_cast<int>(leq.size());
  Table meet(n), join(n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      int glb = -1, lub = -1;
      for (int c = 0; c < n; ++c) {
        if (leq[c][a] && leq[c][b] && (glb < 0 || leq[glb][c])) glb = c;
        if (leq[a][c] && leq[b][c] && (lub < 0 || leq[c][lub])) lub = c;
      }
      if (glb < 0 || lub < 0) return std::nullopt;
      for (int c = 0; c < n; ++c) {
        if (leq[c][a] && leq[c][b] && !leq[c][glb]) return std::nullopt;
        if (leq[a][c] && leq[b][c] && !leq[lub][c]) return std::nullopt;
      }
      meet.set(a, b, glb);
      join.set(a, b, lub);
    }
  }
  return LatticeTables{std::move(meet), std::move(join)};
}

// Lattices whose labeling is a linear extension of the order. Every
// isomorphism class is represented at least once.
std::vector<LatticeTables> naturally_labeled_lattices(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<LatticeTables> out;
  const std::uint64_t limit = std::uint64_t{1} << pairs.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    for (int i = 0; i < n; ++i) std::fill(leq[i].begin(), leq[i].end(), false);
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1) leq[pairs[k].first][pairs[k].second] = true;
    }
    bool transitive = true;
    for (int a = 0; a < n && transitive; ++a)
      for (int b = 0; b < n && transitive; ++b)
        if (leq[a][b])
          for (int c = 0; c < n && transitive; ++c) transitive = !(leq[b][c] && !leq[a][c]);
    if (!transitive) continue;
    if (auto t = tables_from_order(leq)) out.push_back(std::move(*t));
  }
  return out;
}

bool isomorphic_lattices(const LatticeTables& a, const LatticeTables& b) {
  const Table ta[] = {a.meet, a.join};
  const Table tb[] = {b.meet, b.join};
  return find_isomorphism(ta, tb).has_value();
}

LatticeTables relabel(const LatticeTables& l, const std::vector<Element>& perm) {
  const int n = l.meet.size();
  Table meet(n), join(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      meet.set(perm[a], perm[b], perm[l.meet.at(a, b)]);
      join.set(perm[a], perm[b], perm[l.join.at(a, b)]);
    }
  return {std::move(meet), std::move(join)};
}

struct CompiledTask {
  explicit CompiledTask(const SearchTask& task) {
    for (const Identity& id : task.assumed_identities()) assume.emplace_back(id);
    if (task.refute) refute.emplace(*task.refute);
  }
  bool accepts(const FiniteBinar& b) const {
    for (const auto& id : assume) {
      if (!id.holds(b)) return false;
    }
    return !refute || !refute->holds(b);
  }
  std::vector<CompiledIdentity> assume;
  std::optional<CompiledIdentity> refute;
};

}  // namespace

LatticeCatalogue enumerate_lattices(int n, bool up_to_iso) {
  if (n < 1) throw std::invalid_argument("lattice size must be positive");
  if (n > kMaxLatticeSize) {
    throw BoundExceeded("lattice enumeration is bounded by n <= " + std::to_string(kMaxLatticeSize));
  }
  std::vector<LatticeTables> reps;
  for (auto& l : naturally_labeled_lattices(n)) {
    const bool seen = std::any_of(reps.begin(), reps.end(), [&](const auto& r) { return isomorphic_lattices(r, l); });
    if (!seen) reps.push_back(std::move(l));
  }
  LatticeCatalogue cat{n, up_to_iso, {}};
  if (up_to_iso) {
    cat.lattices = std::move(reps);
  } else {
    std::set<LatticeTables> all;
    std::vector<Element> perm(n);
    for (const auto& r : reps) {
      std::iota(perm.begin(), perm.end(), 0);
      do {
        all.insert(relabel(r, perm));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    cat.lattices.assign(all.begin(), all.end());
  }
  std::sort(cat.lattices.begin(), cat.lattices.end());
  return cat;
}

void for_each_residuated_binar(int n, const std::function<bool(const FiniteBinar&)>& visit,
                               bool up_to_iso_lattices) {
  if (n > kMaxExhaustiveBinarSize) {
    throw BoundExceeded("exhaustive binar enumeration is bounded by n <= " +
                        std::to_string(kMaxExhaustiveBinarSize));
  }
  const LatticeCatalogue cat = enumerate_lattices(n, up_to_iso_lattices);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  for (const auto& lat : cat.lattices) {
    const OrderRelation order = derive_order(lat.meet, lat.join);
    std::vector<Element> mult(cells, 0);
    while (true) {
      Table table(n, mult);
      if (auto res = try_derive_residuals(order, table)) {
        FiniteBinar b(n, lat.meet, lat.join, std::move(table), std::move(res->first), std::move(res->second));
        if (!visit(b)) return;
      }
      std::size_t i = cells;
      while (i > 0 && ++mult[i - 1] == n) mult[--i] = 0;
      if (i == 0) break;
    }
  }
}

std::vector<FiniteBinar> sample_residuated_binars(int n, std::size_t count, std::mt19937_64& rng) {
  if (n > kMaxSampledBinarSize) {
    throw BoundExceeded("sampled binar enumeration is bounded by n <= " + std::to_string(kMaxSampledBinarSize));
  }
  const LatticeCatalogue cat = enumerate_lattices(n, false);
  std::uniform_int_distribution<std::size_t> pick_lattice(0, cat.lattices.size() - 1);
  std::uniform_int_distribution<Element> pick_value(0, n - 1);
  std::vector<FiniteBinar> out;
  while (out.size() < count) {
    const auto& lat = cat.lattices[pick_lattice(rng)];
    const OrderRelation order = derive_order(lat.meet, lat.join);
    std::vector<Element> by_height(n);
    std::vector<int> below(n, 0);
    for (Element x = 0; x < n; ++x) {
      by_height[x] = x;
      for (Element y = 0; y < n; ++y) below[x] += order.lt(y, x);
    }
    std::sort(by_height.begin(), by_height.end(), [&](Element a, Element b) { return below[a] < below[b]; });
    const Element bottom = by_height.front();

    // Fill in a linear extension order so each cell dominates the cells below it.
    Table mult(n, bottom);
    for (Element x : by_height) {
      for (Element y : by_height) {
        if (x == bottom || y == bottom) continue;
        Element v = pick_value(rng);
        for (Element u = 0; u < n; ++u) {
          if (order.lt(u, x)) v = lat.join.at(v, mult.at(u, y));
          if (order.lt(u, y)) v = lat.join.at(v, mult.at(x, u));
        }
        mult.set(x, y, v);
      }
    }
    if (auto res = try_derive_residuals(order, mult)) {
      out.emplace_back(n, lat.meet, lat.join, std::move(mult), std::move(res->first), std::move(res->second));
    }
  }
  return out;
}

std::optional<FiniteBinar> oracle_search(const SearchTask& task) {
  task.validate();
  const CompiledTask compiled(task);
  std::optional<FiniteBinar> found;
  for_each_residuated_binar(
      task.size,
      [&](const FiniteBinar& b) {
        if (!compiled.accepts(b)) return true;
        found.emplace(b);
        return false;
      },
      true);
  return found;
}

std::uint64_t count_models(const SearchTask& task) {
  task.validate();
  const CompiledTask compiled(task);
  std::uint64_t count = 0;
  for_each_residuated_binar(task.size, [&](const FiniteBinar& b) {
    count += compiled.accepts(b);
    return true;
  });
  return count;
}

}  // namespace rb::oracle
