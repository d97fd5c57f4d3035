#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rb/cnf.hpp"

namespace rb {

std::vector<Identity> SearchTask::assumed_identities() const {
  std::vector<Identity> out;
  std::set<std::string> seen;
  for (const Identity& id : assume) {
    if (seen.insert(id.name).second) out.push_back(id);
  }
  if (distributive && seen.insert("LD").second) out.push_back(builtin_identity("LD"));
  return out;
}

std::string SearchTask::key() const {
  std::vector<std::string> names;
  for (const Identity& id : assume) names.push_back(id.name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::string out = "n=" + std::to_string(size) + ";assume=";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  out += ";refute=" + (refute ? refute->name : std::string("none"));
  out += ";ld=" + std::string(distributive ? "1" : "0");
  return out;
}

void SearchTask::validate() const {
  if (size < 1) throw TaskError("size must be at least 1");
  if (!refute) return;
  for (const Identity& id : assumed_identities()) {
    if (id.name == refute->name) throw TaskError("refuted identity " + id.name + " is also assumed");
  }
}

SearchTask make_task(int size, const std::vector<std::string>& assume, const std::optional<std::string>& refute,
                     bool distributive) {
  SearchTask task;
  task.size = size;
  task.distributive = distributive;
  for (const std::string& name : assume) {
    if (name == "LD") {
      task.distributive = true;
      continue;
    }
    task.assume.push_back(builtin_identity(name));
  }
  if (refute) task.refute = builtin_identity(*refute);
  task.validate();
  return task;
}

void VarMap::note_aux(const std::string& kind, int var) {
  if (!aux_.empty() && aux_.back().kind == kind && aux_.back().first + aux_.back().count == var) {
    ++aux_.back().count;
    return;
  }
  aux_.push_back({kind, var, 1});
}

std::span<const int> CnfInstance::clause(std::size_t i) const {
  const std::size_t begin = starts_[i];
  const std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] : lits_.size();
  return std::span<const int>(lits_).subspan(begin, end - begin);
}

void CnfInstance::add_clause(std::span<const int> lits) {
  if (lits.empty()) throw std::logic_error("empty clause");
  starts_.push_back(lits_.size());
  for (int l : lits) {
    if (l == 0 || std::abs(l) > num_vars_) throw std::logic_error("literal out of range");
    lits_.push_back(l);
  }
}

std::vector<std::vector<int>> symmetry_clauses(int n, const std::function<int(Element, Element)>& leq_literal) {
  std::vector<std::vector<int>> out;
  if (n < 2) return out;
  for (int y = 0; y < n; ++y) out.push_back({leq_literal(0, y)});
  for (int x = 0; x < n; ++x) out.push_back({leq_literal(x, n - 1)});
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < x; ++y) out.push_back({-leq_literal(x, y)});
  }
  return out;
}

namespace {

// The value of a ground subterm: a known element, or n one-hot literals.
struct Value {
  Element constant = -1;
  std::vector<int> lits;

  bool is_const() const { return constant >= 0; }
};

class Encoder {
 public:
  Encoder(const SearchTask& task, const EncodeOptions& opts) : task_(task), opts_(opts), n_(task.size) {
    cnf_ = CnfInstance(VarMap(n_).num_base());
    cnf_.varmap = VarMap(n_);
  }

  CnfInstance run() {
    cnf_.comments.push_back("residuated binar search " + task_.key() +
                            (opts_.symmetry ? " symmetry=on" : " symmetry=off"));
    encode_tables();
    for (const Identity& axiom : lattice_axioms()) assert_identity(axiom);
    encode_residuation();
    for (const Identity& id : task_.assumed_identities()) assert_identity(id);
    if (task_.refute) refute_identity(*task_.refute);
    if (opts_.symmetry) {
      for (const auto& c : symmetry_clauses(n_, [this](Element x, Element y) { return cnf_.varmap.leq(x, y); })) {
        cnf_.add_clause(c);
      }
    }
    return std::move(cnf_);
  }

 private:
  const VarMap& vm() const { return cnf_.varmap; }

  int aux(const char* kind) {
    const int v = cnf_.new_var();
    cnf_.varmap.note_aux(kind, v);
    return v;
  }

  void exactly_one(const std::vector<int>& lits) {
    cnf_.add_clause(lits);
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j) cnf_.add_clause({-lits[i], -lits[j]});
  }

  void contradiction() {
    const int f = aux("false");
    cnf_.add_clause({f});
    cnf_.add_clause({-f});
  }

  void encode_tables() {
    std::vector<int> lits(n_);
    for (Op op : kAllOps)
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
          for (int v = 0; v < n_; ++v) lits[v] = vm().base(op, a, b, v);
          exactly_one(lits);
        }
  }

  // Ground term evaluation with structural sharing across all identities.
  Value eval(const Term& t, const std::map<std::string, Element>& env, std::string& key) {
    if (t.is_variable()) {
      const Element c = env.at(t.name());
      key = std::to_string(c);
      return Value{c, {}};
    }
    std::string lkey, rkey;
    Value l = eval(t.left(), env, lkey);
    Value r = eval(t.right(), env, rkey);
    key = std::string(op_symbol(t.op())) + "(" + lkey + "," + rkey + ")";
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    Value out;
    out.lits.resize(n_);
    if (l.is_const() && r.is_const()) {
      for (int v = 0; v < n_; ++v) out.lits[v] = vm().base(t.op(), l.constant, r.constant, v);
    } else {
      for (int v = 0; v < n_; ++v) out.lits[v] = aux("subterm");
      exactly_one(out.lits);
      const std::vector<int> la = domain(l), ra = domain(r);
      std::vector<int> clause;
      for (int a : la) {
        for (int b : ra) {
          for (int v = 0; v < n_; ++v) {
            const int cell = vm().base(t.op(), a, b, v);
            clause.clear();
            if (!l.is_const()) clause.push_back(-l.lits[a]);
            if (!r.is_const()) clause.push_back(-r.lits[b]);
            clause.push_back(-cell);
            clause.push_back(out.lits[v]);
            cnf_.add_clause(clause);
            clause.end()[-2] = cell;
            clause.end()[-1] = -out.lits[v];
            cnf_.add_clause(clause);
          }
        }
      }
    }
    cache_.emplace(key, out);
    return out;
  }

  std::vector<int> domain(const Value& v) const {
    if (v.is_const()) return {v.constant};
    std::vector<int> all(n_);
    for (int i = 0; i < n_; ++i) all[i] = i;
    return all;
  }

  template <class F>
  void for_each_tuple(const Identity& id, F&& f) {
    const auto vars = id.variables();
    std::vector<Element> values(vars.size(), 0);
    std::map<std::string, Element> env;
    while (true) {
      for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = values[i];
      f(env);
      std::size_t i = values.size();
      while (i > 0 && ++values[i - 1] == n_) values[--i] = 0;
      if (i == 0) break;
    }
  }

  void assert_identity(const Identity& id) {
    for_each_tuple(id, [&](const std::map<std::string, Element>& env) {
      std::string lk, rk;
      const Value l = eval(id.lhs, env, lk);
      const Value r = eval(id.rhs, env, rk);
      if (l.is_const() && r.is_const()) {
        if (l.constant != r.constant) contradiction();
      } else if (l.is_const() || r.is_const()) {
        const Value& c = l.is_const() ? l : r;
        const Value& other = l.is_const() ? r : l;
        cnf_.add_clause({other.lits[c.constant]});
      } else {
        for (int v = 0; v < n_; ++v) {
          if (l.lits[v] == r.lits[v]) continue;
          cnf_.add_clause({-l.lits[v], r.lits[v]});
          cnf_.add_clause({-r.lits[v], l.lits[v]});
        }
      }
    });
  }

  void refute_identity(const Identity& id) {
    std::vector<int> witnesses;
    for_each_tuple(id, [&](const std::map<std::string, Element>& env) {
      std::string lk, rk;
      const Value l = eval(id.lhs, env, lk);
      const Value r = eval(id.rhs, env, rk);
      if (l.is_const() && r.is_const()) {
        if (l.constant == r.constant) return;
        // Violated outright; a free selector records it.
        witnesses.push_back(aux("witness"));
        return;
      }
      const int w = aux("witness");
      witnesses.push_back(w);
      if (l.is_const() || r.is_const()) {
        const Value& c = l.is_const() ? l : r;
        const Value& other = l.is_const() ? r : l;
        cnf_.add_clause({-w, -other.lits[c.constant]});
        return;
      }
      for (int v = 0; v < n_; ++v) {
        if (l.lits[v] == r.lits[v]) {
          cnf_.add_clause({-w, -l.lits[v]});
        } else {
          cnf_.add_clause({-w, -l.lits[v], -r.lits[v]});
        }
      }
    });
    if (witnesses.empty()) {
      contradiction();
    } else {
      cnf_.add_clause(witnesses);
    }
  }

  // One link variable per triple stands for all three sides of
  // x*y <= z  <=>  y <= x\z  <=>  x <= z/y.
  void encode_residuation() {
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        for (int z = 0; z < n_; ++z) {
          const int p = aux("residuation");
          for (int v = 0; v < n_; ++v) {
            tie(p, vm().base(Op::Mult, x, y, v), vm().leq(v, z));
            tie(p, vm().base(Op::LRes, x, z, v), vm().leq(y, v));
            tie(p, vm().base(Op::RRes, z, y, v), vm().leq(x, v));
          }
        }
  }

  // cell -> (p <-> cond)
  void tie(int p, int cell, int cond) {
    cnf_.add_clause({-cell, -p, cond});
    cnf_.add_clause({-cell, p, -cond});
  }

  const SearchTask& task_;
  EncodeOptions opts_;
  int n_;
  CnfInstance cnf_;
  std::unordered_map<std::string, Value> cache_;
};

}  // namespace

CnfInstance encode_search(const SearchTask& task, const EncodeOptions& opts) {
  task.validate();
  if (task.size > kMaxEncodableSize) {
    throw SizeOverflow("size " + std::to_string(task.size) + " exceeds the encoding ceiling of " +
                       std::to_string(kMaxEncodableSize));
  }
  return Encoder(task, opts).run();
}

IllFormedAssignment::IllFormedAssignment(Op op, Element row, Element col, int true_count)
    : std::runtime_error("cell " + std::string(op_name(op)) + "(" + std::to_string(row) + "," +
                         std::to_string(col) + ") has " + std::to_string(true_count) + " true values"),
      op(op),
      row(row),
      col(col) {}

FiniteBinar decode_model(const std::vector<bool>& assignment, const VarMap& varmap) {
  const int n = varmap.size();
  if (assignment.size() <= static_cast<std::size_t>(varmap.num_base())) {
    throw std::invalid_argument("assignment shorter than the base variable block");
  }
  std::vector<Table> tables;
  for (Op op : kAllOps) {
    Table t(n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        int count = 0;
        for (int v = 0; v < n; ++v) {
          if (assignment[varmap.base(op, a, b, v)]) {
            ++count;
            t.set(a, b, v);
          }
        }
        if (count != 1) throw IllFormedAssignment(op, a, b, count);
      }
    }
    tables.push_back(std::move(t));
  }
  return FiniteBinar(n, tables[0], tables[1], tables[2], tables[3], tables[4]);
}

void write_dimacs(const CnfInstance& cnf, std::ostream& out) {
  for (const std::string& c : cnf.comments) out << "c " << c << '\n';
  const VarMap& vm = cnf.varmap;
  if (vm.size() > 0) {
    for (Op op : kAllOps) {
      out << "c map " << op_name(op) << " first=" << vm.base(op, 0, 0, 0) << " n=" << vm.size()
          << " var=first+(row*n+col)*n+value\n";
    }
    for (const auto& block : vm.aux_blocks()) {
      out << "c map aux " << block.kind << " first=" << block.first << " count=" << block.count << '\n';
    }
  }
  out << "p cnf " << cnf.num_vars() << ' ' << cnf.num_clauses() << '\n';
  std::string line;
  for (std::size_t i = 0; i < cnf.num_clauses(); ++i) {
    line.clear();
    for (int l : cnf.clause(i)) {
      line += std::to_string(l);
      line += ' ';
    }
    line += "0\n";
    out << line;
  }
}

std::string write_dimacs(const CnfInstance& cnf) {
  std::ostringstream out;
  write_dimacs(cnf, out);
  return out.str();
}

}  // namespace rb
