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
#include <limits>

#include "gtest/gtest.h"
#include "isacdt/common.h"

namespace isacdt::sim {
namespace {

TEST(CompensatedSumTest, RecoversSmallTerms) {
  CompensatedSum s;
  s.Add(1.0);
  for (int i = 0; i < 1000; ++i) s.Add(1e-16);
  s.Add(-1.0);
  EXPECT_NEAR(s.Value(), 1e-13, 1e-20);
  EXPECT_EQ(s.count(), 1002u);
}

TEST(CompensatedSumTest, MergeMatchesSequential) {
  CompensatedSum all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double v = 0.1 * i + 1e-9;
    all.Add(v);
    (i < 37 ? a : b).Add(v);
  }
  a.Merge(b);
  EXPECT_NEAR(a.Value(), all.Value(), 1e-12);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.Mean(), all.Value() / 100.0, 1e-14);
  EXPECT_TRUE(std::isnan(CompensatedSum{}.Mean()));
}

TEST(MetricsTableTest, CsvLayout) {
  MetricsTable t({"name", "k", "value", "note"});
  t.SetMetadata("seed", "7");
  t.SetMetadata("scenario", "demo");
  t.AddRow({std::string("a,b"), std::int64_t{3}, 0.1, std::monostate{}});
  t.AddRow({std::string("say \"hi\""), std::int64_t{-1}, 2.5,
            std::string("x")});
  EXPECT_EQ(t.ToCsv(),
            "# seed=7\n"
            "# scenario=demo\n"
            "name,k,value,note\n"
            "\"a,b\",3,0.10000000000000001,\n"
            "\"say \"\"hi\"\"\",-1,2.5,x\n");
}

TEST(MetricsTableTest, MetadataOverwritesInPlace) {
  MetricsTable t({"x"});
  t.SetMetadata("a", "1");
  t.SetMetadata("b", "2");
  t.SetMetadata("a", "3");
  ASSERT_EQ(t.metadata().size(), 2u);
  EXPECT_EQ(t.metadata()[0].second, "3");
}

TEST(MetricsTableTest, RowWidthAndColumnLookup) {
  MetricsTable t({"x", "y"});
  try {
    t.AddRow({1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInternal);
  }
  t.AddRow({1.5, std::int64_t{2}});
  t.AddRow({std::monostate{}, 4.0});
  EXPECT_EQ(t.ColumnIndex("y"), 1u);
  EXPECT_THROW(t.ColumnIndex("z"), Error);
  const auto x = t.NumericColumn("x");
  EXPECT_EQ(x[0], 1.5);
  EXPECT_TRUE(std::isnan(x[1]));
  EXPECT_EQ(t.NumericColumn("y"), (std::vector<double>{2.0, 4.0}));
}

TEST(FormatMetricTest, RoundTripsDoubles) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125}) {
    EXPECT_EQ(std::stod(FormatMetric(v)), v);
  }
  EXPECT_EQ(FormatMetric(std::monostate{}), "");
  EXPECT_EQ(FormatMetric(std::int64_t{42}), "42");
}

}  // namespace
}  // namespace isacdt::sim
