#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

namespace gpf {

/// Shortest round-trip representation, locale independent ("nan" for NaN).
std::string format_number(double v);
std::string format_number(double v, int precision);

/// Joins fields with commas and terminates with '\n'.
std::string csv_row(std::initializer_list<std::string_view> fields);

}  // namespace gpf
