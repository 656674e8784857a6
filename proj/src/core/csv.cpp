// Copyright 2026 The robustjde Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "core/error.hpp"

namespace rjde {

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header)
    : os_(os), columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) os_ << ',';
    os_ << header[k];
  }
  os_ << '\n';
}

void CsvWriter::begin_row() { written_ = 0; }

void CsvWriter::end_row() {
  require(written_ == columns_, "csv row width does not match header");
  os_ << '\n';
}

void CsvWriter::field(double v) { field(std::string_view(format_double(v))); }
void CsvWriter::field(int v) { field(std::string_view(std::to_string(v))); }
void CsvWriter::field(long v) { field(std::string_view(std::to_string(v))); }
void CsvWriter::field(long long v) {
  field(std::string_view(std::to_string(v)));
}
void CsvWriter::field(unsigned long v) {
  field(std::string_view(std::to_string(v)));
}
void CsvWriter::field(unsigned long long v) {
  field(std::string_view(std::to_string(v)));
}

void CsvWriter::field(std::string_view v) {
  if (written_) os_ << ',';
  os_ << v;
  ++written_;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  fail(ErrorKind::kIo, "csv column '" + std::string(name) + "' not found");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) {
    fail(ErrorKind::kIo, "csv cell '" + cell + "' is not a number");
  }
  return v;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

CsvTable read_csv(std::istream& is, const std::string& source) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) {
    fail(ErrorKind::kIo, "csv '" + source + "' is empty");
  }
  table.header = split_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      fail(ErrorKind::kIo, "csv '" + source + "' has a ragged row");
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open '" + path + "'");
  return read_csv(in, path);
}

}  // namespace rjde
