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

#include "isacdt/sim/metrics_table.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "isacdt/common.h"

namespace isacdt::sim {
namespace {

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CompensatedSum::Add(double value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
  ++count_;
}

void CompensatedSum::Merge(const CompensatedSum& other) {
  const std::uint64_t count = count_ + other.count_;
  Add(other.sum_);
  Add(other.compensation_);
  count_ = count;
}

double CompensatedSum::Mean() const {
  if (count_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return Value() / static_cast<double>(count_);
}

MetricsTable::MetricsTable(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void MetricsTable::SetMetadata(const std::string& key,
                               const std::string& value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

void MetricsTable::AddRow(std::vector<MetricValue> row) {
  if (row.size() != columns_.size()) {
    Fail(ErrorCode::kInternal, "metrics table: row has " +
                                   std::to_string(row.size()) +
                                   " fields, expected " +
                                   std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(row));
}

std::size_t MetricsTable::ColumnIndex(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  Fail(ErrorCode::kNotFound, "metrics table: no column '" + name + "'");
}

std::vector<double> MetricsTable::NumericColumn(const std::string& name) const {
  const std::size_t c = ColumnIndex(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    const MetricValue& v = row[c];
    if (const auto* d = std::get_if<double>(&v)) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
      out.push_back(static_cast<double>(*i));
    } else {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

std::string FormatMetric(const MetricValue& value) {
  if (const auto* d = std::get_if<double>(&value)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return std::to_string(*i);
  }
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  return "";
}

std::string MetricsTable::ToCsv() const {
  std::string out;
  for (const auto& [k, v] : metadata_) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += Quote(columns_[i]);
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += Quote(FormatMetric(row[i]));
    }
    out += '\n';
  }
  return out;
}

}  // namespace isacdt::sim
