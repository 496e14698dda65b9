#ifndef STORYLINE_SRC_JSON_UTIL_HPP
#define STORYLINE_SRC_JSON_UTIL_HPP

#include <string_view>

#include "json.hpp"

namespace storyline::detail {

/// Parses JSON text; syntax errors become storyline::parse_error with a position.
nlohmann::json parse_json(std::string_view text);

}  // namespace storyline::detail

#endif  // STORYLINE_SRC_JSON_UTIL_HPP
