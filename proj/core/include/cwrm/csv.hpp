#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cwrm/types.hpp"

namespace cwrm {

// Minimal RFC-4180-style CSV: comma separated, '.' decimal separator,
// fields quoted when they contain comma/quote/newline, quotes doubled.
struct CsvTable {
  std::vector<std::string> header;  // empty for headerless tables
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in, bool has_header);
void write_csv(std::ostream& out, const CsvTable& table);

std::string csv_quote(const std::string& field);

// Reads a regression dataset. With a header, the response column is chosen
// by `response` (a column name or 0-based index as text; empty means the
// last non-label column) and a column named "true_label" is picked up as
// ground truth. Headerless files use index selection only. Ragged rows and
// non-numeric cells throw ParseError.
Dataset read_dataset_csv(std::istream& in, bool has_header,
                         const std::string& response = "");
Dataset read_dataset_csv_file(const std::string& path, bool has_header,
                              const std::string& response = "");

// Writes x_1..x_d, y and (when present) true_label with a header row.
void write_dataset_csv(std::ostream& out, const Dataset& dataset);
void write_dataset_csv_file(const std::string& path, const Dataset& dataset);

}  // namespace cwrm
