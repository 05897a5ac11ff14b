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

#include "ghostlight/csv.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace ghostlight {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

void CsvTable::add_row(std::vector<CsvCell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument(fmt::format("row has {} cells, table has {} columns", row.size(), columns.size()));
    }
    rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << (c ? "," : "") << columns[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) {
                out << ',';
            }
            std::visit(
                [&out](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out << format_double(v);
                    } else {
                        out << v;
                    }
                },
                row[c]);
        }
        out << '\n';
    }
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        throw std::out_of_range("no column " + name);
    }
    return static_cast<std::size_t>(it - columns.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    const CsvCell& cell = rows.at(row).at(column(name));
    if (const auto* d = std::get_if<double>(&cell)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return static_cast<double>(*i);
    }
    throw std::invalid_argument("column " + name + " is not numeric");
}

}  // namespace ghostlight
