#ifndef RB_BINAR_HPP
#define RB_BINAR_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rb/term.hpp"

namespace rb {

using Element = int;

/// n x n operation table, row-major: at(a, b) is the value of a (op) b.
class Table {
 public:
  Table() = default;
  explicit Table(int n, Element fill = 0) : n_(n), cells_(static_cast<std::size_t>(n) * n, fill) {}
  Table(int n, std::vector<Element> cells);

  /// Builds a table from a function of (row, column).
  template <class F>
  static Table generate(int n, F&& f) {
    Table t(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) t.set(a, b, f(a, b));
    return t;
  }

  int size() const { return n_; }
  Element at(Element a, Element b) const { return cells_[static_cast<std::size_t>(a) * n_ + b]; }
  void set(Element a, Element b, Element v) { cells_[static_cast<std::size_t>(a) * n_ + b] = v; }
  std::span<const Element> cells() const { return cells_; }

  friend bool operator==(const Table&, const Table&) = default;
  friend auto operator<=>(const Table&, const Table&) = default;

 private:
  int n_ = 0;
  std::vector<Element> cells_;
};

class InvalidModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite algebra (A, meet, join, mult, lres, rres) on A = {0..n-1}.
/// lres.at(x, z) is x\z and rres.at(z, y) is z/y.
class FiniteBinar {
 public:
  FiniteBinar(int n, Table meet, Table join, Table mult, Table lres, Table rres);

  int size() const { return n_; }
  const Table& table(Op op) const { return ops_[static_cast<std::size_t>(op)]; }
  const Table& meet() const { return table(Op::Meet); }
  const Table& join() const { return table(Op::Join); }
  const Table& mult() const { return table(Op::Mult); }
  const Table& lres() const { return table(Op::LRes); }
  const Table& rres() const { return table(Op::RRes); }
  Element apply(Op op, Element a, Element b) const { return table(op).at(a, b); }

  /// Same algebra with element i renamed to perm[i].
  FiniteBinar relabeled(std::span<const Element> perm) const;

  friend bool operator==(const FiniteBinar&, const FiniteBinar&) = default;

 private:
  int n_;
  std::array<Table, kNumOps> ops_;
};

class OrderRelation {
 public:
  explicit OrderRelation(int n) : n_(n), leq_(static_cast<std::size_t>(n) * n, false) {}
  int size() const { return n_; }
  bool leq(Element a, Element b) const { return leq_[static_cast<std::size_t>(a) * n_ + b]; }
  bool lt(Element a, Element b) const { return a != b && leq(a, b); }
  void set(Element a, Element b, bool v) { leq_[static_cast<std::size_t>(a) * n_ + b] = v; }

  friend bool operator==(const OrderRelation&, const OrderRelation&) = default;

 private:
  int n_;
  std::vector<bool> leq_;
};

class OrderInconsistent : public std::runtime_error {
 public:
  OrderInconsistent(Element x, Element y, const std::string& why);
  Element x, y;
};

/// Variable name -> element, in alphabetical variable order.
using Assignment = std::vector<std::pair<std::string, Element>>;

struct Violation {
  std::string axiom;
  Assignment assignment;
  Element lhs = 0;
  Element rhs = 0;
};

struct VerificationReport {
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
  void merge(VerificationReport other);
  std::string summary(std::size_t max_items = 5) const;
};

/// leq(x, y) iff meet(x, y) = x, cross-checked against join.
OrderRelation derive_order(const Table& meet, const Table& join);
OrderRelation derive_order(const FiniteBinar& b);

VerificationReport check_lattice(const FiniteBinar& b);
VerificationReport check_residuation(const FiniteBinar& b);

class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable: " + name), name(name) {}
  std::string name;
};

Element eval_term(const Term& t, const std::map<std::string, Element>& env, const FiniteBinar& b);

/// Identity compiled to a flat program over variable slots; evaluation is
/// allocation-free.
class CompiledIdentity {
 public:
  explicit CompiledIdentity(const Identity& id);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& variables() const { return vars_; }
  /// values[i] is the element bound to variables()[i].
  std::pair<Element, Element> eval(const FiniteBinar& b, std::span<const Element> values) const;
  /// Lexicographically first violating assignment, if any.
  std::optional<Assignment> first_violation(const FiniteBinar& b) const;
  bool holds(const FiniteBinar& b) const { return !first_violation(b).has_value(); }

 private:
  struct Instr {
    bool is_var;
    int slot;  // variable slot or op index
  };
  Element run(const std::vector<Instr>& prog, const FiniteBinar& b, std::span<const Element> values) const;

  std::string name_;
  std::vector<std::string> vars_;
  std::vector<Instr> lhs_, rhs_;
};

/// nullopt when the identity holds; otherwise the first counterexample in
/// lexicographic order of (alphabetically sorted) variables.
std::optional<Assignment> check_identity(const FiniteBinar& b, const Identity& id);

/// Every failing tuple of `id` becomes a violation entry.
VerificationReport check_identity_report(const FiniteBinar& b, const Identity& id);

class NotResiduated : public std::runtime_error {
 public:
  enum class Side { Left, Right };
  NotResiduated(Element x, Element z, Side side);
  Element x, z;
  Side side;
};

/// Greatest solutions of mult(x, y) <= z in y (lres) and in x (rres).
/// Throws NotResiduated at the first (x, z) whose solution set is not a
/// principal down-set, scanning lres before rres.
std::pair<Table, Table> derive_residuals(const OrderRelation& order, const Table& mult);
/// Non-throwing variant for enumeration loops.
std::optional<std::pair<Table, Table>> try_derive_residuals(const OrderRelation& order, const Table& mult);

class SizeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A permutation p with p(op_a(x, y)) = op_b(p(x), p(y)) for every table
/// pair, or nullopt. Tables in `a` and `b` must correspond index-wise.
std::optional<std::vector<Element>> find_isomorphism(std::span<const Table> a, std::span<const Table> b);
std::optional<std::vector<Element>> are_isomorphic(const FiniteBinar& a, const FiniteBinar& b);

/// Pairs (x, y) with x covered by y, sorted.
std::vector<std::pair<Element, Element>> covering_relation(const OrderRelation& order);

/// Full check of a candidate countermodel: lattice, residuation, every
/// assumed identity, and (if given) failure of `refute`.
VerificationReport verify_model(const FiniteBinar& b, std::span<const Identity> assume,
                                const std::optional<Identity>& refute);

// Frequently used small algebras.
namespace models {
/// n-element chain 0 < 1 < ... < n-1 with mult = meet and the matching residuals.
FiniteBinar chain_with_meet(int n);
Table m3_meet();
Table m3_join();
/// M3 (bottom 0, atoms 1..3, top 4) with constant-bottom mult; both
/// residuals are then constantly top.
FiniteBinar m3_with_zero_mult();
}  // namespace models

}  // namespace rb

#endif  // RB_BINAR_HPP
