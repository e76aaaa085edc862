/*
 * Copyright 2026 The isacdt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ISACDT_SIM_METRICS_TABLE_H_
#define ISACDT_SIM_METRICS_TABLE_H_

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace isacdt::sim {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double value);
  void Merge(const CompensatedSum& other);
  double Value() const { return sum_ + compensation_; }
  std::uint64_t count() const { return count_; }
  // Value() / count(); NaN when empty.
  double Mean() const;

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::uint64_t count_ = 0;
};

// std::monostate serializes as an empty field (e.g. a threshold that was
// never reached).
using MetricValue =
    std::variant<std::monostate, double, std::int64_t, std::string>;

// Named columns of equal length plus `# key=value` metadata lines.
class MetricsTable {
 public:
  MetricsTable() = default;
  explicit MetricsTable(std::vector<std::string> columns);

  void SetMetadata(const std::string& key, const std::string& value);
  // Throws kInternal when the row width differs from the column count.
  void AddRow(std::vector<MetricValue> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<MetricValue>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const {
    return metadata_;
  }
  // Throws kNotFound for an unknown column.
  std::size_t ColumnIndex(const std::string& name) const;
  // Numeric view of a column; empty fields become NaN.
  std::vector<double> NumericColumn(const std::string& name) const;

  // RFC-4180 CSV with '\n' line endings; doubles use %.17g.
  std::string ToCsv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<MetricValue>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

std::string FormatMetric(const MetricValue& value);

}  // namespace isacdt::sim

#endif  // ISACDT_SIM_METRICS_TABLE_H_
