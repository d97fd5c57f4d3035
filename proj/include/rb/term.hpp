#ifndef RB_TERM_HPP
#define RB_TERM_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rb {

/// The five fundamental operations of a residuated binar.
enum class Op { Meet = 0, Join = 1, Mult = 2, LRes = 3, RRes = 4 };

inline constexpr std::size_t kNumOps = 5;
inline constexpr Op kAllOps[kNumOps] = {Op::Meet, Op::Join, Op::Mult, Op::LRes, Op::RRes};

/// "meet", "join", "mult", "lres", "rres".
std::string_view op_name(Op op);
/// ASCII surface symbol: ^ v * \ /
std::string_view op_symbol(Op op);
std::optional<Op> op_from_name(std::string_view name);

/// Immutable term over {meet, join, mult, lres, rres}. Copies share structure.
class Term {
 public:
  static Term variable(std::string name);
  static Term apply(Op op, Term left, Term right);

  bool is_variable() const { return node_->is_var; }
  const std::string& name() const { return node_->name; }
  Op op() const { return node_->op; }
  const Term& left() const { return *node_->left; }
  const Term& right() const { return *node_->right; }

  std::size_t depth() const;
  void collect_variables(std::set<std::string>& out) const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    bool is_var = false;
    std::string name;
    Op op = Op::Meet;
    std::shared_ptr<const Term> left, right;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Universally quantified equation lhs = rhs.
struct Identity {
  std::string name;
  Term lhs;
  Term rhs;

  /// Variables of both sides, sorted alphabetically.
  std::vector<std::string> variables() const;
};

bool operator==(const Identity& a, const Identity& b);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownName : public std::runtime_error {
 public:
  explicit UnknownName(const std::string& name)
      : std::runtime_error("unknown identity name: " + name) {}
};

/// Parses `^` (meet), `v` (join), `*` (mult), `\` (lres), `/` (rres).
/// Chains of one operator associate to the left; mixing different operators
/// without parentheses is rejected.
Term parse_term(std::string_view text);

/// Parses "lhs = rhs". The identity gets `name`.
Identity parse_identity(std::string_view text, std::string name = {});

/// Fully parenthesized rendering, e.g. "(x * (y ^ z))".
std::string format_term(const Term& t);
std::string format_identity(const Identity& id);

/// Axiom file: one identity per line, `name: lhs = rhs`, `#` comments.
/// Unnamed lines are called eq1, eq2, ... by line order.
std::vector<Identity> parse_axiom_file(std::string_view text);

/// D1..D6 and LD.
Identity builtin_identity(std::string_view name);
/// The eight lattice equations (commutativity, associativity, idempotence,
/// absorption for meet and join).
std::vector<Identity> lattice_axioms();
/// Accepts D1..D6, LD, LATTICE. RES is not an equation and raises
/// UnknownName here; encoder and verifier treat it separately.
std::vector<Identity> builtin(std::string_view name);

/// Names D1..D6 in order.
const std::vector<std::string>& distributivity_names();

}  // namespace rb

#endif  // RB_TERM_HPP
