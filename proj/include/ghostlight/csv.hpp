// Copyright 2026 The ghostlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ghostlight {

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double value);

using CsvCell = std::variant<double, std::int64_t, std::string>;

/// Small in-memory table; always written with a header row.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<CsvCell>> rows;

    void add_row(std::vector<CsvCell> row);
    void write(std::ostream& out) const;
    std::string str() const;
    /// Column index by name; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

}  // namespace ghostlight
