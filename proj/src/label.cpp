#include "confstrata/label.hpp"

#include <charconv>

namespace confstrata {

std::string to_string(const Label& label) {
    if (const auto* i = std::get_if<std::int64_t>(&label)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(label);
}

Label parse_label(const std::string& text) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (!text.empty() && ec == std::errc() && ptr == last) {
        return value;
    }
    return text;
}

}  // namespace confstrata
