#include "rb/binar.hpp"

#include <algorithm>
#include <sstream>

namespace rb {

Table::Table(int n, std::vector<Element> cells) : n_(n), cells_(std::move(cells)) {
  if (n < 0 || cells_.size() != static_cast<std::size_t>(n) * n) {
    throw InvalidModel("table of size " + std::to_string(n) + " needs " + std::to_string(n * n) +
                       " cells, got " + std::to_string(cells_.size()));
  }
}

FiniteBinar::FiniteBinar(int n, Table meet, Table join, Table mult, Table lres, Table rres)
    : n_(n), ops_{std::move(meet), std::move(join), std::move(mult), std::move(lres), std::move(rres)} {
  if (n < 1) throw InvalidModel("carrier must be nonempty");
  for (Op op : kAllOps) {
    const Table& t = table(op);
    if (t.size() != n) {
      throw InvalidModel(std::string(op_name(op)) + " table has size " + std::to_string(t.size()));
    }
    for (Element v : t.cells()) {
      if (v < 0 || v >= n) {
        throw InvalidModel(std::string(op_name(op)) + " table entry " + std::to_string(v) + " out of range");
      }
    }
  }
}

FiniteBinar FiniteBinar::relabeled(std::span<const Element> perm) const {
  std::array<Table, kNumOps> out;
  for (std::size_t k = 0; k < kNumOps; ++k) {
    out[k] = Table(n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) out[k].set(perm[a], perm[b], perm[ops_[k].at(a, b)]);
  }
  return FiniteBinar(n_, out[0], out[1], out[2], out[3], out[4]);
}

void VerificationReport::merge(VerificationReport other) {
  violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                    std::make_move_iterator(other.violations.end()));
}

std::string VerificationReport::summary(std::size_t max_items) const {
  if (pass()) return "pass";
  std::ostringstream out;
  out << "fail (" << violations.size() << " violations)";
  for (std::size_t i = 0; i < violations.size() && i < max_items; ++i) {
    const auto& v = violations[i];
    out << "; " << v.axiom;
    if (!v.assignment.empty()) {
      out << " at {";
      for (std::size_t k = 0; k < v.assignment.size(); ++k) {
        out << (k ? "," : "") << v.assignment[k].first << "=" << v.assignment[k].second;
      }
      out << "} " << v.lhs << " vs " << v.rhs;
    }
  }
  return out.str();
}

OrderInconsistent::OrderInconsistent(Element x, Element y, const std::string& why)
    : std::runtime_error("order inconsistent at (" + std::to_string(x) + "," + std::to_string(y) + "): " + why),
      x(x),
      y(y) {}

OrderRelation derive_order(const Table& meet, const Table& join) {
  const int n = meet.size();
  OrderRelation order(n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const bool by_meet = meet.at(x, y) == x;
      const bool by_join = join.at(x, y) == y;
      if (by_meet != by_join) throw OrderInconsistent(x, y, "meet and join disagree");
      order.set(x, y, by_meet);
    }
  }
  for (int x = 0; x < n; ++x) {
    if (!order.leq(x, x)) throw OrderInconsistent(x, x, "not reflexive");
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && order.leq(x, y) && order.leq(y, x)) throw OrderInconsistent(x, y, "not antisymmetric");
      if (!order.leq(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (order.leq(y, z) && !order.leq(x, z)) throw OrderInconsistent(x, z, "not transitive");
      }
    }
  }
  return order;
}

OrderRelation derive_order(const FiniteBinar& b) { return derive_order(b.meet(), b.join()); }

VerificationReport check_lattice(const FiniteBinar& b) {
  VerificationReport report;
  for (const Identity& axiom : lattice_axioms()) report.merge(check_identity_report(b, axiom));
  return report;
}

VerificationReport check_residuation(const FiniteBinar& b) {
  VerificationReport report = check_lattice(b);
  if (!report.pass()) return report;
  const OrderRelation order = derive_order(b);
  const int n = b.size();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int z = 0; z < n; ++z) {
        const bool prod = order.leq(b.mult().at(x, y), z);
        const bool left = order.leq(y, b.lres().at(x, z));
        const bool right = order.leq(x, b.rres().at(z, y));
        const Assignment at{{"x", x}, {"y", y}, {"z", z}};
        if (prod != left) report.violations.push_back({"residuation-left", at, prod, left});
        if (prod != right) report.violations.push_back({"residuation-right", at, prod, right});
      }
    }
  }
  return report;
}

namespace {

Element eval_rec(const Term& t, const std::map<std::string, Element>& env, const FiniteBinar& b) {
  if (t.is_variable()) {
    auto it = env.find(t.name());
    if (it == env.end()) throw UnboundVariable(t.name());
    if (it->second < 0 || it->second >= b.size()) {
      throw InvalidModel("value of " + t.name() + " out of range");
    }
    return it->second;
  }
  const Element l = eval_rec(t.left(), env, b);
  const Element r = eval_rec(t.right(), env, b);
  return b.apply(t.op(), l, r);
}

// Advances a little-endian odometer; false when it wraps around.
bool next_tuple(std::vector<Element>& values, int n) {
  for (std::size_t i = values.size(); i-- > 0;) {
    if (++values[i] < n) return true;
    values[i] = 0;
  }
  return false;
}

}  // namespace

Element eval_term(const Term& t, const std::map<std::string, Element>& env, const FiniteBinar& b) {
  return eval_rec(t, env, b);
}

CompiledIdentity::CompiledIdentity(const Identity& id) : name_(id.name), vars_(id.variables()) {
  auto compile = [this](const Term& t, std::vector<Instr>& prog, auto&& self) -> void {
    if (t.is_variable()) {
      const auto it = std::find(vars_.begin(), vars_.end(), t.name());
      prog.push_back({true, static_cast<int>(it - vars_.begin())});
      return;
    }
    self(t.left(), prog, self);
    self(t.right(), prog, self);
    prog.push_back({false, static_cast<int>(t.op())});
  };
  compile(id.lhs, lhs_, compile);
  compile(id.rhs, rhs_, compile);
}

Element CompiledIdentity::run(const std::vector<Instr>& prog, const FiniteBinar& b,
                              std::span<const Element> values) const {
  Element small[64]{};
  std::vector<Element> large;
  Element* stack = small;
  if (prog.size() > 64) {
    large.resize(prog.size());
    stack = large.data();
  }
  int top = 0;
  for (const Instr& ins : prog) {
    if (ins.is_var) {
      stack[top++] = values[ins.slot];
    } else {
      const Element r = stack[--top];
      const Element l = stack[--top];
      stack[top++] = b.apply(static_cast<Op>(ins.slot), l, r);
    }
  }
  return stack[0];
}

std::pair<Element, Element> CompiledIdentity::eval(const FiniteBinar& b, std::span<const Element> values) const {
  return {run(lhs_, b, values), run(rhs_, b, values)};
}

std::optional<Assignment> CompiledIdentity::first_violation(const FiniteBinar& b) const {
  std::vector<Element> values(vars_.size(), 0);
  do {
    const auto [l, r] = eval(b, values);
    if (l != r) {
      Assignment a;
      for (std::size_t i = 0; i < vars_.size(); ++i) a.emplace_back(vars_[i], values[i]);
      return a;
    }
  } while (next_tuple(values, b.size()));
  return std::nullopt;
}

std::optional<Assignment> check_identity(const FiniteBinar& b, const Identity& id) {
  return CompiledIdentity(id).first_violation(b);
}

VerificationReport check_identity_report(const FiniteBinar& b, const Identity& id) {
  const CompiledIdentity compiled(id);
  VerificationReport report;
  std::vector<Element> values(compiled.variables().size(), 0);
  do {
    const auto [l, r] = compiled.eval(b, values);
    if (l != r) {
      Assignment a;
      for (std::size_t i = 0; i < values.size(); ++i) a.emplace_back(compiled.variables()[i], values[i]);
      report.violations.push_back({id.name, std::move(a), l, r});
    }
  } while (next_tuple(values, b.size()));
  return report;
}

NotResiduated::NotResiduated(Element x, Element z, Side side)
    : std::runtime_error("not residuated at (" + std::to_string(x) + "," + std::to_string(z) + ") on the " +
                         (side == Side::Left ? "left" : "right")),
      x(x),
      z(z),
      side(side) {}

namespace {

// The greatest element m of `members` such that members is exactly the
// down-set of m; -1 otherwise.
Element principal_top(const OrderRelation& order, const std::vector<bool>& members) {
  const int n = order.size();
  for (int m = 0; m < n; ++m) {
    if (!members[m]) continue;
    bool ok = true;
    for (int y = 0; y < n && ok; ++y) ok = (members[y] == order.leq(y, m));
    if (ok) return m;
  }
  return -1;
}

}  // namespace

namespace {

struct ResidualFailure {
  Element x, z;
  NotResiduated::Side side;
};

std::optional<ResidualFailure> residuals_into(const OrderRelation& order, const Table& mult, Table& lres,
                                              Table& rres) {
  const int n = order.size();
  lres = Table(n);
  rres = Table(n);
  std::vector<bool> members(n);
  for (int x = 0; x < n; ++x) {
    for (int z = 0; z < n; ++z) {
      for (int y = 0; y < n; ++y) members[y] = order.leq(mult.at(x, y), z);
      const Element m = principal_top(order, members);
      if (m < 0) return ResidualFailure{x, z, NotResiduated::Side::Left};
      lres.set(x, z, m);
    }
  }
  for (int z = 0; z < n; ++z) {
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) members[x] = order.leq(mult.at(x, y), z);
      const Element m = principal_top(order, members);
      if (m < 0) return ResidualFailure{z, y, NotResiduated::Side::Right};
      rres.set(z, y, m);
    }
  }
  return std::nullopt;
}

}  // namespace

std::pair<Table, Table> derive_residuals(const OrderRelation& order, const Table& mult) {
  Table lres, rres;
  if (auto failure = residuals_into(order, mult, lres, rres)) {
    throw NotResiduated(failure->x, failure->z, failure->side);
  }
  return {std::move(lres), std::move(rres)};
}

std::optional<std::pair<Table, Table>> try_derive_residuals(const OrderRelation& order, const Table& mult) {
  Table lres, rres;
  if (residuals_into(order, mult, lres, rres)) return std::nullopt;
  return std::pair<Table, Table>{std::move(lres), std::move(rres)};
}

namespace {

using Signature = std::vector<int>;

std::vector<Signature> element_signatures(std::span<const Table> tables, int n) {
  std::vector<Signature> sig(n);
  for (const Table& t : tables) {
    for (int x = 0; x < n; ++x) {
      int row_fixed = 0, col_fixed = 0, hits = 0;
      for (int y = 0; y < n; ++y) {
        row_fixed += t.at(x, y) == x;
        col_fixed += t.at(y, x) == x;
        for (int z = 0; z < n; ++z) hits += t.at(y, z) == x;
      }
      sig[x].insert(sig[x].end(), {t.at(x, x) == x, row_fixed, col_fixed, hits});
    }
  }
  return sig;
}

class IsoSearch {
 public:
  IsoSearch(std::span<const Table> a, std::span<const Table> b, int n)
      : a_(a), b_(b), n_(n), perm_(n, -1), used_(n, false),
        sig_a_(element_signatures(a, n)), sig_b_(element_signatures(b, n)) {}

  std::optional<std::vector<Element>> run() {
    if (extend(0)) return perm_;
    return std::nullopt;
  }

 private:
  bool consistent(int x) const {
    for (std::size_t k = 0; k < a_.size(); ++k) {
      const Table& ta = a_[k];
      const Table& tb = b_[k];
      for (int u = 0; u <= x; ++u) {
        for (int pass = 0; pass < 2; ++pass) {
          const int l = pass == 0 ? u : x;
          const int r = pass == 0 ? x : u;
          const Element res = ta.at(l, r);
          const Element img = tb.at(perm_[l], perm_[r]);
          if (res <= x) {
            if (perm_[res] != img) return false;
          } else if (used_[img]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  bool extend(int x) {
    if (x == n_) return true;
    for (int c = 0; c < n_; ++c) {
      if (used_[c] || sig_a_[x] != sig_b_[c]) continue;
      perm_[x] = c;
      used_[c] = true;
      if (consistent(x) && extend(x + 1)) return true;
      used_[c] = false;
      perm_[x] = -1;
    }
    return false;
  }

  std::span<const Table> a_, b_;
  int n_;
  std::vector<Element> perm_;
  std::vector<bool> used_;
  std::vector<Signature> sig_a_, sig_b_;
};

}  // namespace

std::optional<std::vector<Element>> find_isomorphism(std::span<const Table> a, std::span<const Table> b) {
  if (a.size() != b.size()) throw SizeMismatch("different numbers of tables");
  if (a.empty()) return std::nullopt;
  const int n = a.front().size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != n || b[k].size() != n) throw SizeMismatch("table sizes differ");
  }
  return IsoSearch(a, b, n).run();
}

std::optional<std::vector<Element>> are_isomorphic(const FiniteBinar& a, const FiniteBinar& b) {
  if (a.size() != b.size()) {
    throw SizeMismatch("sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  std::vector<Table> ta, tb;
  for (Op op : kAllOps) {
    ta.push_back(a.table(op));
    tb.push_back(b.table(op));
  }
  return find_isomorphism(ta, tb);
}

std::vector<std::pair<Element, Element>> covering_relation(const OrderRelation& order) {
  const int n = order.size();
  std::vector<std::pair<Element, Element>> edges;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (!order.lt(x, y)) continue;
      bool covers = true;
      for (int z = 0; z < n && covers; ++z) covers = !(order.lt(x, z) && order.lt(z, y));
      if (covers) edges.emplace_back(x, y);
    }
  }
  return edges;
}

VerificationReport verify_model(const FiniteBinar& b, std::span<const Identity> assume,
                                const std::optional<Identity>& refute) {
  VerificationReport report = check_residuation(b);
  if (!report.pass()) return report;
  for (const Identity& id : assume) report.merge(check_identity_report(b, id));
  if (refute && !check_identity(b, *refute)) {
    report.violations.push_back({"refuted " + refute->name + " holds", {}, 0, 0});
  }
  return report;
}

namespace models {

FiniteBinar chain_with_meet(int n) {
  const int top = n - 1;
  Table meet = Table::generate(n, [](int a, int b) { return std::min(a, b); });
  Table join = Table::generate(n, [](int a, int b) { return std::max(a, b); });
  Table lres = Table::generate(n, [top](int x, int z) { return x <= z ? top : z; });
  Table rres = Table::generate(n, [top](int z, int y) { return y <= z ? top : z; });
  return FiniteBinar(n, meet, join, meet, lres, rres);
}

Table m3_meet() {
  return Table::generate(5, [](int a, int b) {
    if (a == b || b == 4) return a;
    if (a == 4) return b;
    return 0;
  });
}

Table m3_join() {
  return Table::generate(5, [](int a, int b) {
    if (a == b || b == 0) return a;
    if (a == 0) return b;
    return 4;
  });
}

FiniteBinar m3_with_zero_mult() {
  return FiniteBinar(5, m3_meet(), m3_join(), Table(5, 0), Table(5, 4), Table(5, 4));
}

}  // namespace models

}  // namespace rb
