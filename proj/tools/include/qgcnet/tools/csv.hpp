#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "qgcnet/core.hpp"

namespace qgc::tools {

/// Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line);

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(const std::string& text);

/// Shortest round-trip decimal form.
std::string format_double(double value);

/// Header `date,<id>...`, one row per time point. Errors: ParseError with
/// row/column coordinates, IoError, and every validate_panel error.
ReturnPanel parse_panel_csv(std::istream& in, const std::string& source);
ReturnPanel read_panel_csv(const std::filesystem::path& path);

/// Two-column `label,value` file with a header row.
std::vector<std::pair<std::string, double>> read_labeled_series(const std::filesystem::path& path);

struct DegreeTable {
  std::vector<std::string> window_labels;
  std::vector<double> average_degree;
};

/// Reads the window_end and average_degree columns of a degree CSV.
DegreeTable read_degree_csv(const std::filesystem::path& path);

/// One label per non-empty line.
std::vector<std::string> read_label_list(const std::filesystem::path& path);

}  // namespace qgc::tools
