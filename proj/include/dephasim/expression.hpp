#pragma once

#include <functional>
#include <memory>
#include <string>

namespace dephasim {

/// Parses an arithmetic expression in the single variable t.
///
/// Grammar: numbers, t, + - * / ^ (right-assoc), unary minus, parentheses,
/// and the functions exp(...) and sqrt(...). Nothing else; expressions come
/// from config files and must not be able to do anything but arithmetic.
///
/// Throws ConfigError with the offending position on any syntax error or
/// unknown identifier.
std::function<double(double)> parse_expression(const std::string& text);

}  // namespace dephasim
