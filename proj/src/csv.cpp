#include "logdens/csv.hpp"

#include <charconv>
#include <cmath>

namespace logdens {

std::string format_number(double value)
{
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  if (value == 0.0)
    return "0";
  char buf[64];
  const auto res =
    std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view field)
{
  if (field.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields)
{
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0)
      out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << '\n';
}

} // namespace logdens
