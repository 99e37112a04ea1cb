#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace logdens {

//! 17 significant digits, '.' decimal point, independent of the locale.
//! Non-finite values print as "nan", "inf" or "-inf".
std::string format_number(double value);

//! RFC 4180 field quoting.
std::string csv_escape(std::string_view field);

//! Writes LF-terminated RFC 4180 rows.
class CsvWriter
{
public:
  explicit CsvWriter(std::ostream& out)
    : out_(out)
  {}

  void row(const std::vector<std::string>& fields);

private:
  std::ostream& out_;
};

} // namespace logdens
