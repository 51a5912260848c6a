#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

namespace confstrata {

// Element of a finite set. Integers order before strings.
using Label = std::variant<std::int64_t, std::string>;

std::string to_string(const Label& label);

// Integers are accepted in decimal; anything else becomes a string label.
Label parse_label(const std::string& text);

}  // namespace confstrata
