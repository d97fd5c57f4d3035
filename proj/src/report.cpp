#include "rb/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rb::report {

namespace {

const char* latex_symbol(Op op) {
  switch (op) {
    case Op::Meet: return "$\\wedge$";
    case Op::Join: return "$\\vee$";
    case Op::Mult: return "$\\cdot$";
    case Op::LRes: return "$\\backslash$";
    case Op::RRes: return "$/$";
  }
  return "?";
}

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace

std::string cayley_latex(const FiniteBinar& b, std::string_view name) {
  const auto op = op_from_name(name);
  if (!op) throw UnknownOp(name);
  const int n = b.size();
  std::ostringstream out;
  out << "% " << name << "\n";
  out << "\\begin{tabular}{c|" << std::string(n, 'c') << "}\n";
  out << latex_symbol(*op);
  for (int c = 0; c < n; ++c) out << " & " << c;
  out << " \\\\\n\\hline\n";
  for (int r = 0; r < n; ++r) {
    out << r;
    for (int c = 0; c < n; ++c) out << " & " << b.apply(*op, r, c);
    out << " \\\\\n";
  }
  out << "\\end{tabular}\n";
  return out.str();
}

std::vector<int> hasse_ranks(const OrderRelation& order) {
  const int n = order.size();
  std::vector<int> elems(n);
  for (int i = 0; i < n; ++i) elems[i] = i;
  auto below = [&](int x) {
    int c = 0;
    for (int y = 0; y < n; ++y) c += order.lt(y, x);
    return c;
  };
  std::stable_sort(elems.begin(), elems.end(), [&](int a, int b) { return below(a) < below(b); });
  std::vector<int> rank(n, 0);
  for (int x : elems)
    for (int y = 0; y < n; ++y)
      if (order.lt(y, x)) rank[x] = std::max(rank[x], rank[y] + 1);
  return rank;
}

namespace {

std::map<int, std::vector<int>> by_rank(const std::vector<int>& rank) {
  std::map<int, std::vector<int>> layers;
  for (int x = 0; x < static_cast<int>(rank.size()); ++x) layers[rank[x]].push_back(x);
  return layers;
}

}  // namespace

std::string hasse_dot(const FiniteBinar& b) {
  const OrderRelation order = derive_order(b);
  std::ostringstream out;
  out << "digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n";
  for (const auto& [r, xs] : by_rank(hasse_ranks(order))) {
    out << "  { rank=same;";
    for (int x : xs) out << ' ' << x << ';';
    out << " }\n";
  }
  for (const auto& [x, y] : covering_relation(order)) out << "  " << x << " -> " << y << ";\n";
  out << "}\n";
  return out.str();
}

std::string hasse_tikz_picture(const FiniteBinar& b) {
  const OrderRelation order = derive_order(b);
  std::ostringstream out;
  out << "\\begin{tikzpicture}[every node/.style={circle,draw,inner sep=1pt,minimum size=5mm}]\n";
  for (const auto& [r, xs] : by_rank(hasse_ranks(order))) {
    const double offset = (static_cast<double>(xs.size()) - 1.0) / 2.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << "  \\node (e" << xs[i] << ") at (" << fixed1(static_cast<double>(i) - offset) << "," << fixed1(r)
          << ") {" << xs[i] << "};\n";
    }
  }
  for (const auto& [x, y] : covering_relation(order)) out << "  \\draw (e" << x << ") -- (e" << y << ");\n";
  out << "\\end{tikzpicture}\n";
  return out.str();
}

std::string hasse_tikz(const FiniteBinar& b) {
  return "\\documentclass[tikz]{standalone}\n\\begin{document}\n" + hasse_tikz_picture(b) + "\\end{document}\n";
}

std::string goal_slug(const SearchTask& task) {
  std::vector<std::string> names;
  for (const Identity& id : task.assume) names.push_back(id.name);
  std::sort(names.begin(), names.end());
  std::string slug = "refute-" + (task.refute ? task.refute->name : std::string("none")) + "_assume";
  if (names.empty()) slug += "-none";
  for (const auto& n : names) slug += "-" + n;
  slug += task.distributive ? "_ld" : "_nold";
  return slug;
}

namespace {

struct GoalSummary {
  const grid::SearchResult* witness = nullptr;  // minimal SAT
  std::vector<const grid::SearchResult*> records;
};

std::string describe_goal(const SearchTask& task) {
  std::vector<std::string> names;
  for (const Identity& id : task.assume) names.push_back(id.name);
  std::sort(names.begin(), names.end());
  std::string s = "Refuting " + (task.refute ? task.refute->name : std::string("nothing")) + " from ";
  if (names.empty()) s += "no assumptions";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
  s += task.distributive ? " (LD assumed)" : " (LD not assumed)";
  return s;
}

std::string status_cell(const GoalSummary& g) {
  if (g.witness) return "SAT";
  const grid::SearchResult* unknown = nullptr;
  int max_unsat = 0;
  for (const auto* r : g.records) {
    if (r->status == SolveStatus::Unknown && !unknown) unknown = r;
    if (r->status == SolveStatus::Unsat) max_unsat = std::max(max_unsat, r->task.task.size);
  }
  if (unknown) {
    std::string s = "UNKNOWN (" + (unknown->reason.empty() ? std::string("no answer") : unknown->reason);
    if (unknown->timeout_seconds) s += ", timeout budget " + fixed1(*unknown->timeout_seconds) + " s";
    s += ", size " + std::to_string(unknown->task.task.size) + ")";
    return s;
  }
  return "UNSAT up to size " + std::to_string(max_unsat);
}

std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '_': out += "\\_"; break;
      case '%': out += "\\%"; break;
      case '&': out += "\\&"; break;
      case '#': out += "\\#"; break;
      case '$': out += "\\$"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      case '\\': out += "\\textbackslash{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text, std::vector<std::filesystem::path>& written) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw grid::IoError("cannot write " + path.string());
  written.push_back(path);
}

}  // namespace

std::vector<std::filesystem::path> report_bundle(const std::vector<grid::SearchResult>& results,
                                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw grid::IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::string> order;
  std::map<std::string, GoalSummary> goals;
  for (const auto& r : results) {
    const std::string key = grid::goal_key(r.task.task);
    auto [it, fresh] = goals.try_emplace(key);
    if (fresh) order.push_back(key);
    it->second.records.push_back(&r);
    if (r.status == SolveStatus::Sat && r.model &&
        (!it->second.witness || r.task.task.size < it->second.witness->task.task.size)) {
      it->second.witness = &r;
    }
  }

  std::vector<std::filesystem::path> written;
  std::ostringstream doc;
  doc << "\\documentclass{article}\n\\usepackage{tikz}\n\\begin{document}\n";
  doc << "\\section*{Summary}\n";
  if (order.empty()) {
    doc << "No results (empty result set).\n";
  } else {
    doc << "\\begin{tabular}{lll}\n Goal & Status & Witness size \\\\\n\\hline\n";
    for (const auto& key : order) {
      const GoalSummary& g = goals[key];
      const SearchTask& task = g.records.front()->task.task;
      doc << latex_escape(describe_goal(task)) << " & " << latex_escape(status_cell(g)) << " & "
          << (g.witness ? std::to_string(g.witness->task.task.size) : std::string("--")) << " \\\\\n";
    }
    doc << "\\end{tabular}\n";
  }

  for (const auto& key : order) {
    const GoalSummary& g = goals[key];
    const SearchTask& task = g.records.front()->task.task;
    doc << "\n\\section{" << latex_escape(describe_goal(task)) << "}\n";
    doc << "Status: " << latex_escape(status_cell(g)) << ".\n";
    if (!g.witness) continue;
    const FiniteBinar& m = *g.witness->model;
    doc << "Minimal witness size: " << m.size() << ".\n\n";
    const auto dir = out_dir / goal_slug(task);
    std::filesystem::create_directories(dir, ec);
    if (ec) throw grid::IoError("cannot create " + dir.string() + ": " + ec.message());
    for (Op op : kAllOps) {
      const std::string table = cayley_latex(m, op_name(op));
      write_file(dir / (std::string(op_name(op)) + ".tex"), table, written);
      doc << table << "\\quad\n";
    }
    write_file(dir / "hasse.dot", hasse_dot(m), written);
    write_file(dir / "hasse.tex", hasse_tikz(m), written);
    doc << "\n" << hasse_tikz_picture(m);
  }
  doc << "\\end{document}\n";
  write_file(out_dir / "summary.tex", doc.str(), written);
  return written;
}

}  // namespace rb::report
