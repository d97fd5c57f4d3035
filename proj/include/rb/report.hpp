#ifndef RB_REPORT_HPP
#define RB_REPORT_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rb/binar.hpp"
#include "rb/grid.hpp"

namespace rb::report {

class UnknownOp : public std::invalid_argument {
 public:
  explicit UnknownOp(std::string_view name) : std::invalid_argument("unknown operation: " + std::string(name)) {}
};

/// LaTeX tabular for one operation; `op_name` is meet, join, mult, lres or rres.
std::string cayley_latex(const FiniteBinar& b, std::string_view op_name);

/// Rank of each element: length of the longest chain from the bottom.
std::vector<int> hasse_ranks(const OrderRelation& order);

std::string hasse_dot(const FiniteBinar& b);
/// Bare tikzpicture environment.
std::string hasse_tikz_picture(const FiniteBinar& b);
/// Standalone LaTeX document wrapping hasse_tikz_picture.
std::string hasse_tikz(const FiniteBinar& b);

/// Directory name for a goal, e.g. "refute-D3_assume-D1-D2-D4-D5-D6_ld".
std::string goal_slug(const SearchTask& task);

/// Writes summary.tex plus, per goal with a model, <goal>/<op>.tex,
/// <goal>/hasse.dot and <goal>/hasse.tex. Returns the files written.
std::vector<std::filesystem::path> report_bundle(const std::vector<grid::SearchResult>& results,
                                                 const std::filesystem::path& out_dir);

}  // namespace rb::report

#endif  // RB_REPORT_HPP
