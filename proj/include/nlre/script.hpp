#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace nlre {

struct ScriptError : std::runtime_error {
    explicit ScriptError(const std::string& what) : std::runtime_error(what) {}
};

/// Interprets the exported equation dialect: one `name = expr` per line,
/// `#` comments, integer expressions over | ^ & << >> + - * ~ and
/// parentheses with C precedence, decimal and 0x literals. Undefined
/// identifiers resolve through the callback; a nullopt resolution is an
/// error. Returns every assigned variable.
std::map<std::string, uint64_t> run_script(
    const std::string& text, const std::function<std::optional<uint64_t>(const std::string&)>& resolve);

} // namespace nlre
