#ifndef RB_CNF_HPP
#define RB_CNF_HPP

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rb/binar.hpp"
#include "rb/term.hpp"

namespace rb {

class TaskError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One model-search question: is there a residuated binar of `size` elements
/// satisfying every assumed identity (and LD when `distributive`) in which
/// `refute` fails?
struct SearchTask {
  int size = 1;
  std::vector<Identity> assume;
  std::optional<Identity> refute;
  bool distributive = false;

  /// `assume` plus LD when distributive, without duplicates.
  std::vector<Identity> assumed_identities() const;
  /// Stable textual key, e.g. "n=3;assume=D1,D2;refute=D3;ld=1".
  std::string key() const;
  /// Throws TaskError.
  void validate() const;
};

/// Builds a task from catalogue names (D1..D6, LD). Throws TaskError or UnknownName.
SearchTask make_task(int size, const std::vector<std::string>& assume, const std::optional<std::string>& refute,
                     bool distributive);

/// Propositional variable layout. Base variables come first:
/// var(op, row, col, value) = 1 + ((op * n + row) * n + col) * n + value.
class VarMap {
 public:
  struct AuxBlock {
    std::string kind;
    int first;
    int count;
  };

  VarMap() = default;
  explicit VarMap(int n) : n_(n) {}

  int size() const { return n_; }
  int num_base() const { return static_cast<int>(kNumOps) * n_ * n_ * n_; }
  int base(Op op, Element row, Element col, Element value) const {
    return 1 + ((static_cast<int>(op) * n_ + row) * n_ + col) * n_ + value;
  }
  /// leq(x, y) is the literal meet(x, y) = x.
  int leq(Element x, Element y) const { return base(Op::Meet, x, y, x); }

  const std::vector<AuxBlock>& aux_blocks() const { return aux_; }
  void note_aux(const std::string& kind, int var);

 private:
  int n_ = 0;
  std::vector<AuxBlock> aux_;
};

class CnfInstance {
 public:
  CnfInstance() = default;
  explicit CnfInstance(int num_vars) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return starts_.size(); }
  std::span<const int> clause(std::size_t i) const;
  std::size_t num_literals() const { return lits_.size(); }

  int new_var() { return ++num_vars_; }
  void add_clause(std::span<const int> lits);
  void add_clause(std::initializer_list<int> lits) { add_clause(std::span<const int>(lits.begin(), lits.size())); }

  VarMap varmap;
  std::vector<std::string> comments;

 private:
  int num_vars_ = 0;
  std::vector<int> lits_;
  std::vector<std::size_t> starts_;
};

class SizeOverflow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kMaxEncodableSize = 32;

struct EncodeOptions {
  bool symmetry = true;
};

CnfInstance encode_search(const SearchTask& task, const EncodeOptions& opts = {});

/// Static symmetry reduction: 0 is bottom, n-1 is top, and the numeric
/// labeling is a linear extension of the order.
std::vector<std::vector<int>> symmetry_clauses(int n, const std::function<int(Element, Element)>& leq_literal);

class IllFormedAssignment : public std::runtime_error {
 public:
  IllFormedAssignment(Op op, Element row, Element col, int true_count);
  Op op;
  Element row, col;
};

/// `assignment[v]` is the truth value of variable v (index 0 unused).
FiniteBinar decode_model(const std::vector<bool>& assignment, const VarMap& varmap);

/// DIMACS CNF: comment lines (including "c map " varmap records) precede
/// "p cnf V C"; each clause on one line terminated by 0.
std::string write_dimacs(const CnfInstance& cnf);
void write_dimacs(const CnfInstance& cnf, std::ostream& out);

}  // namespace rb

#endif  // RB_CNF_HPP
