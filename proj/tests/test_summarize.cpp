#include "clique/summarize.hpp"

#include <cmath>
#include <gtest/gtest.h>

using namespace clique;

TEST(ColumnStats, MatchesHandComputedValues) {
    const ColumnStats s = column_stats({1, 2, 3, 4, 5});
    EXPECT_EQ(s.count, 5u);
    EXPECT_EQ(s.mean, 3.0);
    EXPECT_EQ(s.median, 3.0);
    EXPECT_EQ(s.variance, 2.5); // sample variance
    EXPECT_EQ(s.q1, 2.0);
    EXPECT_EQ(s.q3, 4.0);
    EXPECT_EQ(s.min, 1.0);
    EXPECT_EQ(s.max, 5.0);
}

TEST(ColumnStats, SingletonAndEmpty) {
    const ColumnStats one = column_stats({7});
    EXPECT_EQ(one.mean, 7.0);
    EXPECT_EQ(one.variance, 0.0);
    EXPECT_EQ(one.median, 7.0);
    const ColumnStats none = column_stats({});
    EXPECT_EQ(none.count, 0u);
}

TEST(Summarize, AllZeroColumnHasUndefinedRatio) {
    const std::vector<double> column(10, 0.0);
    const std::vector<char> mask{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    const RegionSummary s = summarize_regions(column, mask);
    EXPECT_EQ(s.in.mean, 0.0);
    EXPECT_EQ(s.out.mean, 0.0);
    EXPECT_FALSE(s.ratio_defined);
}

TEST(Summarize, FullRegionEqualsWholeColumnStats) {
    const std::vector<double> column{3, 1, 4, 1, 5, 9, 2, 6};
    const std::vector<char> mask(column.size(), 1);
    const RegionSummary s = summarize_regions(column, mask);
    const ColumnStats whole = column_stats(column);
    EXPECT_EQ(s.in.count, whole.count);
    EXPECT_EQ(s.in.mean, whole.mean);
    EXPECT_EQ(s.in.median, whole.median);
    EXPECT_EQ(s.in.variance, whole.variance);
    EXPECT_EQ(s.out.count, 0u);
    EXPECT_FALSE(s.ratio_defined);
}

TEST(Summarize, RatioOfRegionMeans) {
    const std::vector<double> column{10, 10, 1, 1};
    const std::vector<char> mask{1, 1, 0, 0};
    const RegionSummary s = summarize_regions(column, mask);
    ASSERT_TRUE(s.ratio_defined);
    EXPECT_EQ(s.mean_ratio, 10.0);
}

TEST(Summarize, NonzeroAgainstZeroMeanIsInfinite) {
    const std::vector<double> column{0.4, 0.6, 0.0, 0.0};
    const std::vector<char> mask{1, 1, 0, 0};
    const RegionSummary s = summarize_regions(column, mask);
    ASSERT_TRUE(s.ratio_defined);
    EXPECT_TRUE(std::isinf(s.mean_ratio));
    EXPECT_GT(s.mean_ratio, 0.0);
}

TEST(Correlation, KnownValues) {
    EXPECT_DOUBLE_EQ(correlation({1, 2, 3}, {2, 4, 6}), 1.0);
    EXPECT_DOUBLE_EQ(correlation({1, 2, 3}, {6, 4, 2}), -1.0);
    EXPECT_EQ(correlation({1, 1, 1}, {1, 2, 3}), 0.0); // constant side
    EXPECT_EQ(correlation({1}, {2}), 0.0);             // too short
}

TEST(MeanAbs, Basics) {
    EXPECT_EQ(mean_abs({-1, 1, -3, 3}), 2.0);
    EXPECT_EQ(mean_abs({}), 0.0);
}
