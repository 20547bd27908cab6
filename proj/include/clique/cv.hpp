#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "clique/dataset.hpp"
#include "clique/errors.hpp"
#include "clique/forest.hpp"
#include "clique/loss.hpp"
#include "clique/parallel.hpp"
#include "clique/rng.hpp"

namespace clique {

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> fold_of; // length n, values in [0, k)
    std::uint64_t seed = 0;

    bool operator==(const FoldAssignment&) const = default;
};

/// Uniformly random balanced partition into k folds; fold sizes differ by at
/// most one. With stratification, each class is dealt round-robin so
/// per-class fold counts also differ by at most one.
inline FoldAssignment assign_folds(const Dataset& ds, std::size_t k, bool stratify,
                                   std::uint64_t seed) {
    const std::size_t n = ds.n_rows;
    if (k < 2 || k > n)
        throw ValidationError("fold count k=" + std::to_string(k) +
                              " out of range [2, n=" + std::to_string(n) + "]");
    if (stratify && ds.task.kind != TaskKind::classification)
        throw ValidationError("stratified folds require a classification task");

    FoldAssignment fa;
    fa.k = k;
    fa.seed = seed;
    fa.fold_of.resize(n);

    Rng rng(seed);
    std::size_t cursor = 0;
    if (stratify) {
        for (std::size_t c = 0; c < ds.task.classes.size(); ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i)
                if (static_cast<std::size_t>(ds.y_cls[i]) == c) members.push_back(i);
            rng.shuffle(members);
            for (const std::size_t i : members) fa.fold_of[i] = cursor++ % k;
        }
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (const std::size_t i : order) fa.fold_of[i] = cursor++ % k;
    }
    return fa;
}

/// One model per fold, each trained on every row outside that fold; routes
/// each observation to the model that excluded it.
struct CvEnsemble {
    FoldAssignment folds;
    std::vector<Forest> models;
    Hyperparams hp;

    const Forest& model_for_row(std::size_t i) const { return models[folds.fold_of[i]]; }

    std::vector<std::size_t> training_rows(std::size_t fold) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < folds.fold_of.size(); ++i)
            if (folds.fold_of[i] != fold) rows.push_back(i);
        return rows;
    }
};

inline CvEnsemble fit_cv(const Dataset& ds, const Hyperparams& hp, const FoldAssignment& folds,
                         std::size_t n_threads = 0) {
    if (folds.fold_of.size() != ds.n_rows)
        throw ValidationError("fold assignment does not match the dataset");
    CvEnsemble ens;
    ens.folds = folds;
    ens.hp = hp;
    ens.models.resize(folds.k);
    for (std::size_t f = 0; f < folds.k; ++f) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            if (folds.fold_of[i] != f) rows.push_back(i);
        if (rows.empty())
            throw ValidationError("fold " + std::to_string(f) + " covers the whole dataset");
        ens.models[f] = Forest::fit(ds, hp, rows, n_threads);
    }
    return ens;
}

/// Baseline per-observation CV error: Err_i = L(f(x_i), y_i) with row i's
/// own held-out model.
inline std::vector<double> cv_errors(const CvEnsemble& ens, const Dataset& ds,
                                     const LossSpec& loss, std::size_t n_threads = 0) {
    check_loss_compatible(loss, ds.task.kind);
    std::vector<double> err(ds.n_rows);
    parallel_for(ds.n_rows, n_threads, [&](std::size_t i) {
        err[i] = loss_value(loss, ens.model_for_row(i).predict(ds.row(i)), ds, i);
    });
    return err;
}

inline double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (const double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

} // namespace clique
