#include "gpf/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace gpf {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, precision);
  return {buf.data(), res.ptr};
}

std::string csv_row(std::initializer_list<std::string_view> fields) {
  std::string out;
  bool first = true;
  for (auto f : fields) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += '\n';
  return out;
}

}  // namespace gpf
