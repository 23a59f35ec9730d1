#include "qgcnet/tools/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qgc::tools {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_number(const std::string& cell, const std::string& source, std::size_t row, std::size_t col) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last || first == last) {
    throw Error(Errc::ParseError, source + ": row " + std::to_string(row) + ", column " + std::to_string(col) +
                                      ": not a number: '" + cell + "'");
  }
  return value;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), end};
}

ReturnPanel parse_panel_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, source + ": empty file");
  strip_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  if (header.empty() || header.front() != "date") {
    throw Error(Errc::ParseError, source + ": row 1: first header must be 'date'");
  }
  if (header.size() < 2) throw Error(Errc::ParseError, source + ": row 1: no entity columns");
  std::vector<std::string> ids(header.begin() + 1, header.end());
  const std::size_t width = header.size();

  std::vector<std::string> stamps;
  std::vector<double> cells;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != width) {
      throw Error(Errc::ParseError, source + ": row " + std::to_string(row) + ": expected " + std::to_string(width) +
                                        " fields, found " + std::to_string(fields.size()));
    }
    stamps.push_back(fields.front());
    for (std::size_t c = 1; c < width; ++c) cells.push_back(parse_number(fields[c], source, row, c + 1));
  }
  if (stamps.empty()) throw Error(Errc::ParseError, source + ": no data rows");

  const auto t = static_cast<Index>(stamps.size());
  const auto p = static_cast<Index>(ids.size());
  Matrix values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      cells.data(), t, p);
  return validate_panel(std::move(values), std::move(stamps), std::move(ids));
}

ReturnPanel read_panel_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_panel_csv(in, path.filename().string());
}

std::vector<std::pair<std::string, double>> read_labeled_series(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string source = path.filename().string();
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<std::string, double>> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw Error(Errc::ParseError, source + ": row " + std::to_string(row) + ": expected label,value");
    }
    out.emplace_back(fields[0], parse_number(fields[1], source, row, 2));
  }
  return out;
}

DegreeTable read_degree_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string source = path.filename().string();
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, source + ": empty file");
  strip_cr(line);
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "window_end" || header[1] != "average_degree") {
    throw Error(Errc::ParseError, source + ": row 1: expected window_end,average_degree,...");
  }
  DegreeTable table;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::ParseError, source + ": row " + std::to_string(row) + ": ragged row");
    }
    table.window_labels.push_back(fields[0]);
    table.average_degree.push_back(parse_number(fields[1], source, row, 2));
  }
  return table;
}

std::vector<std::string> read_label_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace qgc::tools
