#include "cwrm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace cwrm {

namespace {

std::vector<std::vector<std::string>> parse_records(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_open = false;  // true once the current row has any content
  char ch;
  while (in.get(ch)) {
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_open = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        field_open = true;
        break;
      case '\r':
        break;
      case '\n':
        if (field_open || !field.empty() || !row.empty()) {
          row.push_back(field);
          records.push_back(row);
        }
        field.clear();
        row.clear();
        field_open = false;
        break;
      default:
        field += ch;
        field_open = true;
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::ParseError, "unterminated quote in CSV input");
  }
  if (field_open || !field.empty() || !row.empty()) {
    row.push_back(field);
    records.push_back(row);
  }
  return records;
}

double parse_double(const std::string& cell, int row, int col) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || begin == end) {
    throw Error(ErrorCode::ParseError,
                "row " + std::to_string(row + 1) + ", column " +
                    std::to_string(col + 1) + ": not a number: '" + cell +
                    "'");
  }
  return value;
}

int parse_label(const std::string& cell, int row, int col) {
  const double v = parse_double(cell, row, col);
  const int label = static_cast<int>(v);
  if (label < 0 || label != v) {
    throw Error(ErrorCode::ParseError,
                "row " + std::to_string(row + 1) +
                    ": true_label must be a nonnegative integer");
  }
  return label;
}

}  // namespace

CsvTable read_csv(std::istream& in, bool has_header) {
  auto records = parse_records(in);
  CsvTable table;
  if (records.empty()) return table;
  std::size_t next = 0;
  if (has_header) {
    table.header = records[0];
    next = 1;
  }
  table.rows.assign(records.begin() + next, records.end());
  return table;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << csv_quote(row[j]);
    }
    out << '\n';
  };
  if (!table.header.empty()) write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
}

Dataset read_dataset_csv(std::istream& in, bool has_header,
                         const std::string& response) {
  const CsvTable table = read_csv(in, has_header);
  if (table.rows.empty()) {
    throw Error(ErrorCode::ParseError, "no data rows in CSV input");
  }
  const int n_cols = static_cast<int>(
      has_header ? table.header.size() : table.rows[0].size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (static_cast<int>(table.rows[i].size()) != n_cols) {
      throw Error(ErrorCode::ParseError,
                  "row " + std::to_string(i + 1) + " has " +
                      std::to_string(table.rows[i].size()) +
                      " fields, expected " + std::to_string(n_cols));
    }
  }

  int label_col = -1;
  if (has_header) {
    for (int j = 0; j < n_cols; ++j) {
      if (table.header[j] == "true_label") label_col = j;
    }
  }

  int response_col = -1;
  if (response.empty()) {
    for (int j = n_cols - 1; j >= 0; --j) {
      if (j != label_col) {
        response_col = j;
        break;
      }
    }
  } else {
    if (has_header) {
      for (int j = 0; j < n_cols; ++j) {
        if (table.header[j] == response) response_col = j;
      }
    }
    if (response_col < 0) {
      int idx = -1;
      const auto result = std::from_chars(
          response.data(), response.data() + response.size(), idx);
      if (result.ec == std::errc{} &&
          result.ptr == response.data() + response.size() && idx >= 0 &&
          idx < n_cols) {
        response_col = idx;
      }
    }
    if (response_col < 0) {
      throw Error(ErrorCode::ParseError,
                  "response column '" + response + "' not found");
    }
    if (response_col == label_col) {
      throw Error(ErrorCode::ParseError,
                  "response column cannot be the true_label column");
    }
  }
  if (response_col < 0) {
    throw Error(ErrorCode::ParseError, "no usable response column");
  }

  std::vector<int> x_cols;
  for (int j = 0; j < n_cols; ++j) {
    if (j != response_col && j != label_col) x_cols.push_back(j);
  }
  if (x_cols.empty()) {
    throw Error(ErrorCode::ParseError, "no covariate columns left");
  }

  const int n = static_cast<int>(table.rows.size());
  Dataset out;
  out.x.resize(n, static_cast<int>(x_cols.size()));
  out.y.resize(n);
  if (label_col >= 0) out.true_labels.resize(n);
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < x_cols.size(); ++j) {
      out.x(i, static_cast<int>(j)) =
          parse_double(table.rows[i][x_cols[j]], i, x_cols[j]);
    }
    out.y[i] = parse_double(table.rows[i][response_col], i, response_col);
    if (label_col >= 0) {
      out.true_labels[i] = parse_label(table.rows[i][label_col], i, label_col);
    }
  }
  return out;
}

Dataset read_dataset_csv_file(const std::string& path, bool has_header,
                              const std::string& response) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  }
  return read_dataset_csv(in, has_header, response);
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
  std::ostringstream line;
  line.precision(17);
  for (int j = 0; j < dataset.d(); ++j) {
    out << "x_" << (j + 1) << ',';
  }
  out << 'y';
  if (!dataset.true_labels.empty()) out << ",true_label";
  out << '\n';
  for (int i = 0; i < dataset.n(); ++i) {
    line.str("");
    for (int j = 0; j < dataset.d(); ++j) {
      line << dataset.x(i, j) << ',';
    }
    line << dataset.y[i];
    if (!dataset.true_labels.empty()) {
      line << ',' << dataset.true_labels[i];
    }
    out << line.str() << '\n';
  }
}

void write_dataset_csv_file(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  }
  write_dataset_csv(out, dataset);
}

}  // namespace cwrm
