#include "clique/quantile.hpp"

#include <gtest/gtest.h>
#include <vector>

#include "clique/simulate.hpp"

using namespace clique;

namespace {

struct Fixture {
    std::vector<double> column;
    std::size_t m;
    std::vector<double> expected;
};

// Expected values hand-computed from the type-7 definition (h = (n-1)p + 1,
// linear interpolation between order statistics) and cross-checked against
// an independent implementation. Matches must be exact.
const std::vector<Fixture> kFixtures = {
    {{1, 2, 3, 4, 5}, 5, {1, 2, 3, 4, 5}},
    {{1, 2, 3, 4, 5}, 2, {1, 5}},
    {{0, 10}, 3, {0, 5, 10}},
    {{0, 1, 2, 3, 4, 5, 6, 7, 8}, 3, {0, 4, 8}},
    {{2, 4, 6, 8}, 3, {2, 5, 8}},
    {{0, 8}, 5, {0, 2, 4, 6, 8}},
    {{7, 7, 7}, 4, {7, 7, 7, 7}},
    {{3, 1, 2}, 3, {1, 2, 3}},
    {{1, 1, 2, 2}, 4, {1, 1, 2, 2}},
    {{1, 2, 3, 4}, 1, {2.5}},
    {{5}, 1, {5}},
    {{1, 3}, 1, {2}},
    {{0, 4, 8},
     7,
     {0, 1.3333333333333333, 2.6666666666666665, 4, 5.333333333333333, 6.666666666666667, 8}},
    {{-2, -1, 0, 1, 2}, 5, {-2, -1, 0, 1, 2}},
    {{10, 20, 30, 40, 50, 60, 70, 80, 90, 100}, 4, {10, 40, 70, 100}},
};

Dataset one_column(const std::vector<double>& column) {
    Dataset ds;
    ds.schema = {{"x", FeatureKind::numeric, {}}};
    ds.n_rows = column.size();
    ds.cells = column;
    ds.task = {TaskKind::regression, {}};
    ds.y_reg.assign(column.size(), 0.0);
    ds.ids.resize(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) ds.ids[i] = std::to_string(i + 1);
    return ds;
}

} // namespace

TEST(Quantile, FixturesExact) {
    for (const auto& fx : kFixtures) {
        const QuantileGrid grid = quantile_grid(one_column(fx.column), 0, fx.m);
        ASSERT_EQ(grid.values.size(), fx.expected.size());
        for (std::size_t i = 0; i < fx.expected.size(); ++i)
            EXPECT_EQ(grid.values[i], fx.expected[i])
                << "fixture column size " << fx.column.size() << ", M=" << fx.m << ", index " << i;
    }
}

TEST(Quantile, ProbsAreEvenlySpacedEndpointInclusive) {
    const QuantileGrid grid = quantile_grid(one_column({1, 2, 3, 4, 5}), 0, 5);
    ASSERT_EQ(grid.probs.size(), 5u);
    for (std::size_t m = 0; m < 5; ++m) EXPECT_EQ(grid.probs[m], static_cast<double>(m) / 4.0);
    EXPECT_EQ(quantile_grid(one_column({1, 2}), 0, 1).probs, (std::vector<double>{0.5}));
}

TEST(Quantile, GridIsNondecreasingAndSpansRange) {
    const Dataset ds = simulate({SimKind::and_gate, 173, 5});
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        const QuantileGrid grid = quantile_grid(ds, j, 25);
        double lo = ds.cell(0, j), hi = ds.cell(0, j);
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            lo = std::min(lo, ds.cell(i, j));
            hi = std::max(hi, ds.cell(i, j));
        }
        EXPECT_EQ(grid.values.front(), lo);
        EXPECT_EQ(grid.values.back(), hi);
        for (std::size_t m = 1; m < grid.values.size(); ++m)
            EXPECT_LE(grid.values[m - 1], grid.values[m]);
    }
}

TEST(Quantile, GridWithMEqualNReproducesSortedColumn) {
    const Dataset ds = simulate({SimKind::reg_interaction, 137, 21});
    std::vector<double> sorted(ds.n_rows);
    for (std::size_t i = 0; i < ds.n_rows; ++i) sorted[i] = ds.cell(i, 2);
    std::sort(sorted.begin(), sorted.end());
    const QuantileGrid grid = quantile_grid(ds, 2, ds.n_rows);
    EXPECT_EQ(grid.values, sorted);
}

TEST(Quantile, CategoricalGridListsObservedLevels) {
    Dataset ds = one_column({0, 2, 0, 2});
    ds.schema[0] = {"c", FeatureKind::categorical, {"a", "b", "c"}};
    const QuantileGrid grid = quantile_grid(ds, 0, 25); // M overridden
    EXPECT_EQ(grid.values, (std::vector<double>{0, 2}));
    EXPECT_EQ(grid.probs, (std::vector<double>{0.5, 0.5}));
}

TEST(Quantile, Errors) {
    const Dataset ds = one_column({1, 2, 3});
    EXPECT_THROW(quantile_grid(ds, 5, 3), ValidationError);
    EXPECT_THROW(quantile_grid(ds, 0, 0), ValidationError);
}
