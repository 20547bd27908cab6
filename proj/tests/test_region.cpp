#include "clique/region.hpp"

#include <gtest/gtest.h>

#include "clique/simulate.hpp"

using namespace clique;

namespace {

Dataset grid_dataset() {
    // v1 in {-0.5, 0.5}, v2 in {-0.5, 0.5}, all four combinations
    Dataset ds;
    ds.schema = {{"v1", FeatureKind::numeric, {}}, {"v2", FeatureKind::numeric, {}}};
    ds.n_rows = 4;
    ds.cells = {-0.5, -0.5, -0.5, 0.5, 0.5, -0.5, 0.5, 0.5};
    ds.task = {TaskKind::regression, {}};
    ds.y_reg = {0, 0, 0, 0};
    ds.ids = {"1", "2", "3", "4"};
    return ds;
}

} // namespace

TEST(Region, SimpleComparison) {
    const Dataset ds = grid_dataset();
    EXPECT_EQ(RegionExpr::parse("v1 > 0").evaluate(ds), (std::vector<char>{0, 0, 1, 1}));
    EXPECT_EQ(RegionExpr::parse("v2 <= -0.5").evaluate(ds), (std::vector<char>{1, 0, 1, 0}));
    EXPECT_EQ(RegionExpr::parse("v1 == 0.5").evaluate(ds), (std::vector<char>{0, 0, 1, 1}));
    EXPECT_EQ(RegionExpr::parse("v1 != 0.5").evaluate(ds), (std::vector<char>{1, 1, 0, 0}));
}

TEST(Region, AndBindsTighterThanOr) {
    const Dataset ds = grid_dataset();
    // v1 > 0 or (v1 < 0 and v2 > 0)
    const auto mask = RegionExpr::parse("v1 > 0 or v1 < 0 and v2 > 0").evaluate(ds);
    EXPECT_EQ(mask, (std::vector<char>{0, 1, 1, 1}));
}

TEST(Region, ParenthesesAndNot) {
    const Dataset ds = grid_dataset();
    EXPECT_EQ(RegionExpr::parse("(v1 > 0 or v1 < 0) and v2 > 0").evaluate(ds),
              (std::vector<char>{0, 1, 0, 1}));
    EXPECT_EQ(RegionExpr::parse("not v1 > 0").evaluate(ds), (std::vector<char>{1, 1, 0, 0}));
}

TEST(Region, AbsoluteValueStyleMask) {
    // |v2| > 1/4 written as a disjunction, as the corners experiment uses it.
    const Dataset ds = simulate({SimKind::corners, 200, 3});
    const auto mask = RegionExpr::parse("v2 > 0.25 or v2 < -0.25").evaluate(ds);
    for (std::size_t i = 0; i < ds.n_rows; ++i)
        EXPECT_EQ(static_cast<bool>(mask[i]), std::abs(ds.cell(i, 1)) > 0.25);
}

TEST(Region, CategoricalEquality) {
    Dataset ds;
    ds.schema = {{"color", FeatureKind::categorical, {"red", "green"}}};
    ds.n_rows = 3;
    ds.cells = {0, 1, 0};
    ds.task = {TaskKind::regression, {}};
    ds.y_reg = {0, 0, 0};
    ds.ids = {"1", "2", "3"};
    EXPECT_EQ(RegionExpr::parse("color == red").evaluate(ds), (std::vector<char>{1, 0, 1}));
    EXPECT_EQ(RegionExpr::parse("color != \"red\"").evaluate(ds), (std::vector<char>{0, 1, 0}));
    EXPECT_THROW(RegionExpr::parse("color > red").evaluate(ds), ValidationError);
}

TEST(Region, ParseErrors) {
    EXPECT_THROW(RegionExpr::parse(""), ValidationError);
    EXPECT_THROW(RegionExpr::parse("v1 >"), ValidationError);
    EXPECT_THROW(RegionExpr::parse("v1 0.5"), ValidationError);
    EXPECT_THROW(RegionExpr::parse("(v1 > 0"), ValidationError);
    EXPECT_THROW(RegionExpr::parse("v1 > 0 extra"), ValidationError);
}

TEST(Region, UnknownColumnAndBadLiteral) {
    const Dataset ds = grid_dataset();
    EXPECT_THROW(RegionExpr::parse("nope > 0").evaluate(ds), ValidationError);
    EXPECT_THROW(RegionExpr::parse("v1 > apple").evaluate(ds), ValidationError);
}
