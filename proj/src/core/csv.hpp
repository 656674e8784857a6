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

#ifndef RJDE_CORE_CSV_HPP_
#define RJDE_CORE_CSV_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rjde {

// Minimal comma-separated writer. Doubles are printed with 17 significant
// digits so that files round-trip exactly and reruns are byte-identical.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> header);

  template <typename... Fields>
  void row(const Fields&... fields) {
    begin_row();
    (field(fields), ...);
    end_row();
  }

  std::size_t columns() const { return columns_; }

 private:
  void begin_row();
  void end_row();
  void field(double v);
  void field(int v);
  void field(long v);
  void field(long long v);
  void field(unsigned long v);
  void field(unsigned long long v);
  void field(std::string_view v);
  void field(const char* v) { field(std::string_view(v)); }
  void field(const std::string& v) { field(std::string_view(v)); }

  std::ostream& os_;
  std::size_t columns_;
  std::size_t written_ = 0;
};

std::string format_double(double v);

// A parsed CSV file with a header row. Cells are kept as strings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws kIo if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(std::istream& is, const std::string& source);
CsvTable read_csv_file(const std::string& path);

}  // namespace rjde

#endif  // RJDE_CORE_CSV_HPP_
