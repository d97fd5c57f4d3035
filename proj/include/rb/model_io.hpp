#ifndef RB_MODEL_IO_HPP
#define RB_MODEL_IO_HPP

#include <json.hpp>

#include "rb/binar.hpp"

namespace rb {

// {"size": n, "ops": {"meet": [[...]], "join": ..., "mult": ..., "lres": ..., "rres": ...}}
// Rows are indexed by the first argument.
nlohmann::json to_json(const FiniteBinar& b);

/// Throws InvalidModel on missing keys, ragged rows or out-of-range entries.
FiniteBinar binar_from_json(const nlohmann::json& j);

}  // namespace rb

#endif  // RB_MODEL_IO_HPP
