// Naive reference checks used as oracles by the tests. Deliberately
// written from the definitions without touching the library's evaluator.
#ifndef RB_TESTS_SUPPORT_HPP
#define RB_TESTS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rb/binar.hpp"
#include "rb/term.hpp"

namespace naive {

inline bool leq(const rb::FiniteBinar& b, int x, int y) { return b.meet().at(x, y) == x; }

inline int eval(const rb::Term& t, const std::map<std::string, int>& env, const rb::FiniteBinar& b) {
  if (t.is_variable()) return env.at(t.name());
  const int l = eval(t.left(), env, b);
  const int r = eval(t.right(), env, b);
  switch (t.op()) {
    case rb::Op::Meet: return b.meet().at(l, r);
    case rb::Op::Join: return b.join().at(l, r);
    case rb::Op::Mult: return b.mult().at(l, r);
    case rb::Op::LRes: return b.lres().at(l, r);
    case rb::Op::RRes: return b.rres().at(l, r);
  }
  return -1;
}

inline bool holds(const rb::FiniteBinar& b, const rb::Identity& id) {
  const auto vars = id.variables();
  const int n = b.size();
  std::vector<int> val(vars.size(), 0);
  for (;;) {
    std::map<std::string, int> env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = val[i];
    if (eval(id.lhs, env, b) != eval(id.rhs, env, b)) return false;
    std::size_t k = 0;
    while (k < val.size() && ++val[k] == n) val[k++] = 0;
    if (k == val.size()) return true;
  }
}

inline bool is_lattice(const rb::FiniteBinar& b) {
  const int n = b.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (b.meet().at(x, y) != b.meet().at(y, x) || b.join().at(x, y) != b.join().at(y, x)) return false;
      if (b.meet().at(x, b.join().at(x, y)) != x || b.join().at(x, b.meet().at(x, y)) != x) return false;
      for (int z = 0; z < n; ++z) {
        if (b.meet().at(b.meet().at(x, y), z) != b.meet().at(x, b.meet().at(y, z))) return false;
        if (b.join().at(b.join().at(x, y), z) != b.join().at(x, b.join().at(y, z))) return false;
      }
    }
  return true;
}

// x*y <= z  iff  y <= x\z  iff  x <= z/y
inline bool is_residuated(const rb::FiniteBinar& b) {
  if (!is_lattice(b)) return false;
  const int n = b.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const bool a = leq(b, b.mult().at(x, y), z);
        if (a != leq(b, y, b.lres().at(x, z)) || a != leq(b, x, b.rres().at(z, y))) return false;
      }
  return true;
}

inline bool is_countermodel(const rb::FiniteBinar& b, const std::vector<rb::Identity>& assume,
                            const std::optional<rb::Identity>& refute) {
  if (!is_residuated(b)) return false;
  for (const auto& id : assume)
    if (!holds(b, id)) return false;
  return !refute || !holds(b, *refute);
}

}  // namespace naive

namespace testutil {

inline std::filesystem::path fresh_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("rb-test-" + tag + "-" + std::to_string(rng() % 1000000007));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

}  // namespace testutil

#endif  // RB_TESTS_SUPPORT_HPP
