#include "rb/model_io.hpp"

namespace rb {

nlohmann::json to_json(const FiniteBinar& b) {
  nlohmann::json ops = nlohmann::json::object();
  const int n = b.size();
  for (Op op : kAllOps) {
    nlohmann::json rows = nlohmann::json::array();
    for (int a = 0; a < n; ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < n; ++c) row.push_back(b.apply(op, a, c));
      rows.push_back(std::move(row));
    }
    ops[std::string(op_name(op))] = std::move(rows);
  }
  return {{"size", n}, {"ops", std::move(ops)}};
}

FiniteBinar binar_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("ops")) {
    throw InvalidModel("model JSON needs \"size\" and \"ops\"");
  }
  if (!j["size"].is_number_integer()) throw InvalidModel("\"size\" must be an integer");
  const int n = j["size"].get<int>();
  if (n < 1) throw InvalidModel("\"size\" must be positive");
  std::vector<Table> tables;
  for (Op op : kAllOps) {
    const std::string key(op_name(op));
    if (!j["ops"].contains(key)) throw InvalidModel("missing table \"" + key + "\"");
    const auto& rows = j["ops"][key];
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
      throw InvalidModel("table \"" + key + "\" must have " + std::to_string(n) + " rows");
    }
    std::vector<Element> cells;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
        throw InvalidModel("table \"" + key + "\" has a ragged row");
      }
      for (const auto& v : row) {
        if (!v.is_number_integer()) throw InvalidModel("table \"" + key + "\" has a non-integer entry");
        cells.push_back(v.get<Element>());
      }
    }
    tables.emplace_back(n, std::move(cells));
  }
  return FiniteBinar(n, tables[0], tables[1], tables[2], tables[3], tables[4]);
}

}  // namespace rb
