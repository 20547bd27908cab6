#include "clique/cv.hpp"

#include <algorithm>
#include <gtest/gtest.h>
#include <set>

#include "clique/simulate.hpp"

using namespace clique;

namespace {

std::vector<std::size_t> fold_sizes(const FoldAssignment& fa) {
    std::vector<std::size_t> sizes(fa.k, 0);
    for (const std::size_t f : fa.fold_of) ++sizes[f];
    return sizes;
}

} // namespace

TEST(AssignFolds, BalancedSizes) {
    const Dataset ds = simulate({SimKind::and_gate, 10, 1});
    const FoldAssignment fa = assign_folds(ds, 5, false, 3);
    EXPECT_EQ(fold_sizes(fa), std::vector<std::size_t>(5, 2));
}

TEST(AssignFolds, SizesDifferByAtMostOne) {
    const Dataset ds = simulate({SimKind::and_gate, 103, 2});
    for (const std::size_t k : {2, 3, 7, 10, 50}) {
        const auto sizes = fold_sizes(assign_folds(ds, k, false, 5));
        const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        EXPECT_LE(*hi - *lo, 1u);
        EXPECT_GE(*lo, 1u);
    }
}

TEST(AssignFolds, LeaveOneOut) {
    const Dataset ds = simulate({SimKind::and_gate, 12, 4});
    const FoldAssignment fa = assign_folds(ds, 12, false, 9);
    EXPECT_EQ(fold_sizes(fa), std::vector<std::size_t>(12, 1));
}

TEST(AssignFolds, StratifiedKeepsClassBalance) {
    // 6 rows of class "0", 4 of class "1", k=2 -> each fold 3+2.
    Dataset ds;
    ds.schema = {{"x", FeatureKind::numeric, {}}};
    ds.n_rows = 10;
    ds.cells = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    ds.task = {TaskKind::classification, {"0", "1"}};
    ds.y_cls = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    ds.ids = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"};

    const FoldAssignment fa = assign_folds(ds, 2, true, 11);
    std::size_t zeros_in_fold0 = 0, ones_in_fold0 = 0;
    for (std::size_t i = 0; i < 10; ++i)
        if (fa.fold_of[i] == 0) ds.y_cls[i] == 0 ? ++zeros_in_fold0 : ++ones_in_fold0;
    EXPECT_EQ(zeros_in_fold0, 3u);
    EXPECT_EQ(ones_in_fold0, 2u);
}

TEST(AssignFolds, StratificationInvariantOnSimulatedData) {
    const Dataset ds = simulate({SimKind::corners, 217, 6});
    const FoldAssignment fa = assign_folds(ds, 10, true, 13);
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> per_fold(10, 0);
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            if (ds.y_cls[i] == cls) ++per_fold[fa.fold_of[i]];
        const auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
        EXPECT_LE(*hi - *lo, 1u);
    }
}

TEST(AssignFolds, TinyClassSpreadsAcrossDistinctFolds) {
    Dataset ds;
    ds.schema = {{"x", FeatureKind::numeric, {}}};
    ds.n_rows = 9;
    ds.cells = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    ds.task = {TaskKind::classification, {"a", "b"}};
    ds.y_cls = {0, 0, 0, 0, 0, 0, 0, 1, 1}; // class "b" smaller than k
    ds.ids = {"1", "2", "3", "4", "5", "6", "7", "8", "9"};
    const FoldAssignment fa = assign_folds(ds, 3, true, 5);
    EXPECT_NE(fa.fold_of[7], fa.fold_of[8]);
}

TEST(AssignFolds, DeterministicGivenSeedAndRange) {
    const Dataset ds = simulate({SimKind::and_gate, 50, 8});
    EXPECT_EQ(assign_folds(ds, 5, true, 42).fold_of, assign_folds(ds, 5, true, 42).fold_of);
    EXPECT_THROW(assign_folds(ds, 1, false, 1), ValidationError);
    EXPECT_THROW(assign_folds(ds, 51, false, 1), ValidationError);
}

TEST(FitCv, ModelsExcludeExactlyTheirFold) {
    const Dataset ds = simulate({SimKind::and_gate, 40, 3});
    Hyperparams hp;
    hp.n_trees = 5;
    const FoldAssignment folds = assign_folds(ds, 4, true, 21);
    const CvEnsemble ens = fit_cv(ds, hp, folds);
    ASSERT_EQ(ens.models.size(), 4u);
    for (std::size_t f = 0; f < 4; ++f) {
        const auto rows = ens.training_rows(f);
        const std::set<std::size_t> training(rows.begin(), rows.end());
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            EXPECT_EQ(training.count(i), folds.fold_of[i] == f ? 0u : 1u);
    }
}

TEST(FitCv, TwoFoldDefinition) {
    const Dataset ds = simulate({SimKind::and_gate, 4, 19});
    const FoldAssignment folds = assign_folds(ds, 2, false, 2);
    Hyperparams hp;
    hp.n_trees = 2;
    const CvEnsemble ens = fit_cv(ds, hp, folds);
    // model 0 must see only fold-1 rows, model 1 only fold-0 rows
    for (std::size_t f = 0; f < 2; ++f)
        for (const std::size_t r : ens.training_rows(f)) EXPECT_NE(folds.fold_of[r], f);
}

TEST(FitCv, RoutesRowsToTheirHoldOutModel) {
    const Dataset ds = simulate({SimKind::and_gate, 30, 5});
    Hyperparams hp;
    hp.n_trees = 3;
    const FoldAssignment folds = assign_folds(ds, 3, true, 7);
    const CvEnsemble ens = fit_cv(ds, hp, folds);
    for (std::size_t i = 0; i < ds.n_rows; ++i)
        EXPECT_EQ(&ens.model_for_row(i), &ens.models[folds.fold_of[i]]);
}

TEST(CvErrors, PerfectPredictorGivesZeroVector) {
    // Labels depend on x with a wide margin; CV models learn it exactly.
    Dataset ds;
    ds.schema = {{"x", FeatureKind::numeric, {}}};
    ds.task = {TaskKind::classification, {"0", "1"}};
    for (int i = 0; i < 40; ++i) {
        const double x = i < 20 ? -1.0 - i * 0.01 : 1.0 + i * 0.01;
        ds.cells.push_back(x);
        ds.y_cls.push_back(x > 0 ? 1 : 0);
        ds.ids.push_back(std::to_string(i + 1));
    }
    ds.n_rows = 40;
    Hyperparams hp;
    hp.n_trees = 20;
    const CvEnsemble ens = fit_cv(ds, hp, assign_folds(ds, 4, true, 3));
    for (const double e : cv_errors(ens, ds, {LossKind::zero_one})) EXPECT_EQ(e, 0.0);
}

TEST(CvErrors, SquaredErrorExample) {
    // prediction 3 vs label 5 -> 4; force it with constant-label folds
    Dataset ds;
    ds.schema = {{"x", FeatureKind::numeric, {}}};
    ds.n_rows = 4;
    ds.cells = {1, 1, 1, 1};
    ds.task = {TaskKind::regression, {}};
    ds.y_reg = {3, 3, 5, 5}; // the row's fold decides which training mean it sees
    ds.ids = {"1", "2", "3", "4"};
    FoldAssignment folds{2, {0, 0, 1, 1}, 0};
    Hyperparams hp;
    hp.n_trees = 1;
    hp.bootstrap = false;
    const CvEnsemble ens = fit_cv(ds, hp, folds);
    const auto err = cv_errors(ens, ds, {LossKind::squared_error});
    // rows 0,1 predicted by the model trained on {5,5} -> prediction 5, label 3
    EXPECT_EQ(err[0], 4.0);
    EXPECT_EQ(err[1], 4.0);
    // rows 2,3 predicted by the model trained on {3,3} -> prediction 3, label 5
    EXPECT_EQ(err[2], 4.0);
    EXPECT_EQ(err[3], 4.0);
}

TEST(CvErrors, InvariantUnderFoldRelabeling) {
    const Dataset ds = simulate({SimKind::and_gate, 60, 13});
    Hyperparams hp;
    hp.n_trees = 10;
    const FoldAssignment folds = assign_folds(ds, 3, true, 17);
    const CvEnsemble ens = fit_cv(ds, hp, folds);
    const auto base = cv_errors(ens, ds, {LossKind::zero_one});

    // Relabel folds (0,1,2) -> (2,0,1), permuting models accordingly.
    CvEnsemble relabeled;
    relabeled.hp = ens.hp;
    relabeled.folds.k = 3;
    relabeled.folds.seed = folds.seed;
    relabeled.folds.fold_of.resize(ds.n_rows);
    const std::size_t perm[3] = {2, 0, 1};
    for (std::size_t i = 0; i < ds.n_rows; ++i)
        relabeled.folds.fold_of[i] = perm[folds.fold_of[i]];
    relabeled.models.resize(3);
    for (std::size_t f = 0; f < 3; ++f) relabeled.models[perm[f]] = ens.models[f];
    EXPECT_EQ(cv_errors(relabeled, ds, {LossKind::zero_one}), base);
}

TEST(CvErrors, LossTaskMismatchRejected) {
    const Dataset ds = simulate({SimKind::and_gate, 20, 2});
    Hyperparams hp;
    hp.n_trees = 2;
    const CvEnsemble ens = fit_cv(ds, hp, assign_folds(ds, 2, true, 1));
    EXPECT_THROW(cv_errors(ens, ds, {LossKind::squared_error}), ValidationError);
}
