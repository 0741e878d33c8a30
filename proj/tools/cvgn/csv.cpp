#include "csv.hpp"

#include <cmath>
#include <locale>
#include <sstream>

namespace cvgn::cli {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_number(double value, int precision) {
  if (std::isnan(value)) return {};
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(precision);
  os << (value == 0.0 ? 0.0 : value);
  return os.str();
}

void write_csv(std::ostream& out, const DataTable& table, int precision) {
  for (size_t j = 0; j < table.columns.size(); ++j) {
    out << (j ? "," : "") << csv_field(table.columns[j]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (size_t j = 0; j < row.size(); ++j) {
      out << (j ? "," : "") << csv_number(row[j], precision);
    }
    out << '\n';
  }
}

}  // namespace cvgn::cli
