#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cvgn/analysis.hpp"

namespace cvgn::cli {

/// Quotes a field when it contains a separator, quote or line break.
std::string csv_field(const std::string& text);

/// Formats a value with `precision` significant digits; NaN becomes empty.
std::string csv_number(double value, int precision);

void write_csv(std::ostream& out, const DataTable& table, int precision);

}  // namespace cvgn::cli
