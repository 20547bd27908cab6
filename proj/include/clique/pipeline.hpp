#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "clique/cv.hpp"
#include "clique/dataset.hpp"
#include "clique/forest.hpp"
#include "clique/importance.hpp"
#include "clique/kv.hpp"
#include "clique/loss.hpp"

namespace clique {

/// Builds the per-observation CV ensemble for a dataset. k is clamped to n
/// when the dataset is smaller than the requested fold count; the degenerate
/// single-row case trains the lone fold model on the full data (there is
/// nothing left to exclude) so the importance definitions still apply.
inline CvEnsemble build_cv_ensemble(const Dataset& ds, const Hyperparams& hp, std::size_t k,
                                    std::uint64_t fold_seed, std::size_t n_threads,
                                    std::ostream* warnings = nullptr) {
    if (k < 1) throw ValidationError("fold count k must be >= 1");
    if (k > ds.n_rows) {
        if (warnings)
            *warnings << "note: k=" << k << " clamped to n=" << ds.n_rows << " (leave-one-out)\n";
        k = ds.n_rows;
    }
    if (k >= 2) {
        const bool stratify = ds.task.kind == TaskKind::classification;
        return fit_cv(ds, hp, assign_folds(ds, k, stratify, fold_seed), n_threads);
    }
    CvEnsemble ens;
    ens.folds = {1, std::vector<std::size_t>(ds.n_rows, 0), fold_seed};
    ens.hp = hp;
    ens.models.push_back(Forest::fit(ds, hp, n_threads));
    return ens;
}

/// Provenance sidecar for an exported importance matrix.
inline KvPairs importance_metadata(const ImportanceMatrix& m, const CvEnsemble& ens,
                                   const Dataset& ds, std::uint64_t cli_seed,
                                   double full_model_train_error) {
    const Hyperparams& hp = ens.hp;
    KvPairs kv;
    kv.emplace_back("method", to_string(m.method));
    kv.emplace_back("m", std::to_string(m.m_reps));
    kv.emplace_back("k", std::to_string(ens.folds.k));
    kv.emplace_back("seed", std::to_string(cli_seed));
    kv.emplace_back("loss", to_string(m.loss.kind));
    kv.emplace_back("task", ds.task.kind == TaskKind::classification ? "classification"
                                                                     : "regression");
    kv.emplace_back("n", std::to_string(ds.n_rows));
    kv.emplace_back("p", std::to_string(ds.n_features()));
    kv.emplace_back("n_trees", std::to_string(hp.n_trees));
    kv.emplace_back("mtry", std::to_string(hp.mtry == 0 ? default_mtry(ds.task.kind, ds.n_features())
                                                        : hp.mtry));
    kv.emplace_back("min_node_size", std::to_string(hp.min_node_size == 0
                                                        ? default_min_node_size(ds.task.kind)
                                                        : hp.min_node_size));
    kv.emplace_back("max_depth",
                    hp.max_depth == 0 ? "unlimited" : std::to_string(hp.max_depth));
    kv.emplace_back("bootstrap", hp.bootstrap ? "true" : "false");
    kv.emplace_back("rng", Rng::kAlgorithm);
    kv.emplace_back("cv_error", detail::format_double(mean(m.baseline)));
    kv.emplace_back("full_model_train_error", detail::format_double(full_model_train_error));
    return kv;
}

/// Training error of the full-data model, reported for reference only; the
/// importance computation uses the CV models exclusively.
inline double full_model_train_error(const Forest& model, const Dataset& ds,
                                     const LossSpec& loss) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ds.n_rows; ++i)
        sum += loss_value(loss, model.predict(ds.row(i)), ds, i);
    return sum / static_cast<double>(ds.n_rows);
}

/// Fold assignment export: `id,fold` per row.
inline void write_folds_csv(const FoldAssignment& folds, const Dataset& ds,
                            const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << "id,fold\n";
    for (std::size_t i = 0; i < ds.n_rows; ++i)
        file << ds.ids[i] << ',' << folds.fold_of[i] << '\n';
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace clique
