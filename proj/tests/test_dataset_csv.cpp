#include "clique/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <string>

#include "clique/simulate.hpp"

using namespace clique;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

// Round-trip equality in the write_csv contract: same schema, cells, labels
// (class-list order is re-inferred from first appearance on load).
void expect_equivalent(const Dataset& a, const Dataset& b) {
    EXPECT_EQ(a.schema, b.schema);
    EXPECT_EQ(a.cells, b.cells);
    EXPECT_EQ(a.n_rows, b.n_rows);
    EXPECT_EQ(a.ids, b.ids);
    EXPECT_EQ(a.task.kind, b.task.kind);
    EXPECT_EQ(a.y_reg, b.y_reg);
    ASSERT_EQ(a.n_rows, b.n_rows);
    for (std::size_t i = 0; i < a.n_rows; ++i) EXPECT_EQ(a.label_string(i), b.label_string(i));
}

} // namespace

TEST(LoadCsv, BasicClassification) {
    const auto path = temp_file("basic.csv");
    write_text(path, "a,b,y\n1,2,0\n3,4,1\n5,6,0\n");
    const Dataset ds = load_csv(path.string(), "y", TaskKind::classification);
    EXPECT_EQ(ds.n_rows, 3u);
    EXPECT_EQ(ds.n_features(), 2u);
    EXPECT_EQ(ds.task.classes, (std::vector<std::string>{"0", "1"}));
    EXPECT_EQ(ds.schema[0].kind, FeatureKind::numeric);
    EXPECT_EQ(ds.cell(2, 1), 6.0);
    EXPECT_EQ(ds.y_cls, (std::vector<int>{0, 1, 0}));
}

TEST(LoadCsv, MissingLabelColumn) {
    const auto path = temp_file("basic2.csv");
    write_text(path, "a,b,y\n1,2,0\n");
    try {
        load_csv(path.string(), "z", TaskKind::classification);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("label column"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("not found"), std::string::npos);
    }
}

TEST(LoadCsv, MissingFile) {
    EXPECT_THROW(load_csv("/nonexistent/nope.csv", "y", TaskKind::regression), ValidationError);
}

TEST(LoadCsv, EmptyFile) {
    const auto path = temp_file("empty.csv");
    write_text(path, "");
    EXPECT_THROW(load_csv(path.string(), "y", TaskKind::regression), ValidationError);
}

TEST(LoadCsv, HeaderOnlyFile) {
    const auto path = temp_file("header_only.csv");
    write_text(path, "a,y\n");
    try {
        load_csv(path.string(), "y", TaskKind::regression);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("no data rows"), std::string::npos);
    }
}

TEST(LoadCsv, RaggedRowReportsPosition) {
    const auto path = temp_file("ragged.csv");
    write_text(path, "a,b,y\n1,2,0\n3,4\n");
    try {
        load_csv(path.string(), "y", TaskKind::classification);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("expected 3"), std::string::npos);
    }
}

TEST(LoadCsv, CategoricalInferenceFirstAppearanceOrder) {
    const auto path = temp_file("cat.csv");
    write_text(path, "f,y\nlo,0\nhi,1\nlo,0\n");
    const Dataset ds = load_csv(path.string(), "y", TaskKind::classification);
    EXPECT_EQ(ds.schema[0].kind, FeatureKind::categorical);
    EXPECT_EQ(ds.schema[0].levels, (std::vector<std::string>{"lo", "hi"}));
    EXPECT_EQ(ds.cell(0, 0), 0.0);
    EXPECT_EQ(ds.cell(1, 0), 1.0);
    EXPECT_EQ(ds.cell(2, 0), 0.0);
}

TEST(LoadCsv, MissingValueRejected) {
    const auto path = temp_file("missing.csv");
    write_text(path, "a,y\n1,0\n,1\n");
    try {
        load_csv(path.string(), "y", TaskKind::classification);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("missing value"), std::string::npos);
    }
}

TEST(LoadCsv, NonFiniteNumbersBecomeCategorical) {
    const auto path = temp_file("nonfinite.csv");
    write_text(path, "a,y\nnan,0\n1.5,1\n");
    const Dataset ds = load_csv(path.string(), "y", TaskKind::classification);
    EXPECT_EQ(ds.schema[0].kind, FeatureKind::categorical);
}

TEST(LoadCsv, QuotedFieldsWithCommas) {
    const auto path = temp_file("quoted.csv");
    write_text(path, "f,y\n\"a,b\",0\n\"c\"\"d\",1\n");
    const Dataset ds = load_csv(path.string(), "y", TaskKind::classification);
    EXPECT_EQ(ds.schema[0].levels, (std::vector<std::string>{"a,b", "c\"d"}));
}

TEST(LoadCsv, RegressionLabelMustBeNumeric) {
    const auto path = temp_file("badlabel.csv");
    write_text(path, "a,y\n1,x\n");
    EXPECT_THROW(load_csv(path.string(), "y", TaskKind::regression), ValidationError);
}

TEST(WriteCsv, RoundTripsSimulatedData) {
    const Dataset ds = simulate({SimKind::and_gate, 10, 1});
    const auto path = temp_file("roundtrip.csv");
    write_csv(ds, path.string());
    const Dataset back = load_csv(path.string(), "y", TaskKind::classification);
    expect_equivalent(ds, back);
}

TEST(WriteCsv, RoundTripsRegressionBitwise) {
    const Dataset ds = simulate({SimKind::reg_interaction, 25, 99});
    const auto path = temp_file("roundtrip_reg.csv");
    write_csv(ds, path.string());
    const Dataset back = load_csv(path.string(), "y", TaskKind::regression);
    EXPECT_EQ(ds, back);
}

TEST(WriteCsv, CategoricalRoundTripPreservesLevelOrder) {
    const auto path = temp_file("cat_rt_src.csv");
    write_text(path, "f,g,y\nlo,x,0\nhi,y,1\nlo,z,0\nmid,x,1\n");
    const Dataset ds = load_csv(path.string(), "y", TaskKind::classification);
    const auto path2 = temp_file("cat_rt_dst.csv");
    write_csv(ds, path2.string());
    const Dataset back = load_csv(path2.string(), "y", TaskKind::classification);
    expect_equivalent(ds, back);
    EXPECT_EQ(back.schema[0].levels, (std::vector<std::string>{"lo", "hi", "mid"}));
}

TEST(WriteCsv, UnwritablePathFails) {
    const Dataset ds = simulate({SimKind::and_gate, 3, 1});
    EXPECT_THROW(write_csv(ds, "/nonexistent_dir/out.csv"), std::runtime_error);
}

TEST(Dataset, ValidateCatchesBadLevelIndex) {
    Dataset ds = simulate({SimKind::and_gate, 3, 1});
    ds.schema[0].kind = FeatureKind::categorical;
    ds.schema[0].levels = {"only"};
    EXPECT_THROW(ds.validate(), ValidationError);
}
