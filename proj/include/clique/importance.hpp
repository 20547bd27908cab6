#pragma once

#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "clique/csv.hpp"
#include "clique/cv.hpp"
#include "clique/dataset.hpp"
#include "clique/errors.hpp"
#include "clique/forest.hpp"
#include "clique/kv.hpp"
#include "clique/loss.hpp"
#include "clique/parallel.hpp"
#include "clique/quantile.hpp"
#include "clique/rng.hpp"

namespace clique {

enum class ImportanceMethod { clique, clip };

inline const char* to_string(ImportanceMethod m) {
    return m == ImportanceMethod::clique ? "clique" : "clip";
}

/// n x p matrix of local importances V plus the provenance needed to
/// reproduce it. V[i][j] is the mean increase in row i's CV loss when
/// feature j is replaced by each grid (or permuted) value.
struct ImportanceMatrix {
    std::vector<double> v; // row-major, n x p
    ImportanceMethod method = ImportanceMethod::clique;
    std::size_t m_reps = 0; // M
    LossSpec loss;
    std::uint64_t seed = 0;
    std::vector<double> baseline; // per-observation CV error
    std::vector<std::string> row_ids;
    std::vector<std::string> feature_names;

    std::size_t n_rows() const { return row_ids.size(); }
    std::size_t n_features() const { return feature_names.size(); }
    double at(std::size_t i, std::size_t j) const { return v[i * feature_names.size() + j]; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(n_rows());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, j);
        return out;
    }
};

namespace detail {

/// Losses of every row after overwriting column j with `replacement`
/// (a length-n column; row i receives replacement[i]). Rows whose
/// replacement equals their own value keep the baseline loss: the
/// prediction function is pure, so the altered loss is identical.
inline std::vector<double> altered_losses(const CvEnsemble& ens, const Dataset& ds,
                                          const LossSpec& loss, std::size_t j,
                                          const std::vector<double>& replacement,
                                          const std::vector<double>& baseline) {
    std::vector<double> out(ds.n_rows);
    std::vector<double> row(ds.n_features());
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        if (replacement[i] == ds.cell(i, j)) {
            out[i] = baseline[i];
            continue;
        }
        const auto original = ds.row(i);
        std::copy(original.begin(), original.end(), row.begin());
        row[j] = replacement[i];
        out[i] = loss_value(loss, ens.model_for_row(i).predict(row), ds, i);
    }
    return out;
}

struct AlterTask {
    std::size_t feature;
    std::size_t rep;
};

/// Shared driver for CLIQUE and CLIP: both average M altered-loss vectors
/// per feature against the baseline, they differ only in how the
/// replacement column for repetition m is chosen. Tasks run in parallel;
/// the reduction is a fixed-order loop so worker count cannot change V.
template <typename MakeReplacement>
ImportanceMatrix importance_core(const CvEnsemble& ens, const Dataset& ds, const LossSpec& loss,
                                 std::size_t m_reps, std::size_t n_threads,
                                 MakeReplacement&& make_replacement) {
    check_loss_compatible(loss, ds.task.kind);
    if (m_reps < 1) throw ValidationError("M must be >= 1");
    for (const auto& model : ens.models) model.check_compatible(ds);

    const std::size_t n = ds.n_rows;
    const std::size_t p = ds.n_features();
    const std::vector<double> baseline = cv_errors(ens, ds, loss, n_threads);

    // Per-feature repetition counts (categorical grids override M).
    std::vector<std::size_t> reps_of(p, m_reps);
    std::vector<std::vector<std::vector<double>>> replacements(p);
    for (std::size_t j = 0; j < p; ++j) {
        replacements[j] = make_replacement(j, m_reps);
        reps_of[j] = replacements[j].size();
    }

    std::vector<AlterTask> tasks;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t m = 0; m < reps_of[j]; ++m) tasks.push_back({j, m});

    std::vector<std::vector<double>> losses(tasks.size());
    parallel_for(tasks.size(), n_threads, [&](std::size_t t) {
        const auto [j, m] = tasks[t];
        losses[t] = altered_losses(ens, ds, loss, j, replacements[j][m], baseline);
    });

    ImportanceMatrix out;
    out.v.assign(n * p, 0.0);
    std::size_t t = 0;
    for (std::size_t j = 0; j < p; ++j) {
        std::vector<double> sum(n, 0.0);
        for (std::size_t m = 0; m < reps_of[j]; ++m, ++t)
            for (std::size_t i = 0; i < n; ++i) sum[i] += losses[t][i];
        const double dm = static_cast<double>(reps_of[j]);
        for (std::size_t i = 0; i < n; ++i) out.v[i * p + j] = sum[i] / dm - baseline[i];
    }

    out.m_reps = m_reps;
    out.loss = loss;
    out.baseline = baseline;
    out.row_ids = ds.ids;
    out.feature_names.resize(p);
    for (std::size_t j = 0; j < p; ++j) out.feature_names[j] = ds.schema[j].name;
    return out;
}

} // namespace detail

/// CLIQUE: replacement values are the M-point quantile grid of each feature.
/// Deterministic; no randomness beyond what fit_cv already fixed.
inline ImportanceMatrix clique_importance(const CvEnsemble& ens, const Dataset& ds,
                                          const LossSpec& loss, std::size_t m_reps,
                                          std::size_t n_threads = 0) {
    auto out = detail::importance_core(
        ens, ds, loss, m_reps, n_threads, [&](std::size_t j, std::size_t m) {
            const QuantileGrid grid = quantile_grid(ds, j, m);
            std::vector<std::vector<double>> reps(grid.values.size());
            for (std::size_t g = 0; g < grid.values.size(); ++g)
                reps[g].assign(ds.n_rows, grid.values[g]);
            return reps;
        });
    out.method = ImportanceMethod::clique;
    out.seed = 0;
    return out;
}

namespace detail {

inline std::vector<double> permuted_column(const Dataset& ds, std::size_t j, std::uint64_t seed) {
    const std::size_t n = ds.n_rows;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = ds.cell(perm[i], j);
    return col;
}

} // namespace detail

/// CLIP: replacement values come from M whole-column permutations, streams
/// keyed by (seed, feature, repetition).
inline ImportanceMatrix clip_importance(const CvEnsemble& ens, const Dataset& ds,
                                        const LossSpec& loss, std::size_t m_reps,
                                        std::uint64_t seed, std::size_t n_threads = 0) {
    auto out = detail::importance_core(
        ens, ds, loss, m_reps, n_threads, [&](std::size_t j, std::size_t m) {
            std::vector<std::vector<double>> reps(m);
            for (std::size_t r = 0; r < m; ++r)
                reps[r] = detail::permuted_column(ds, j, derive_seed(seed, j, r));
            return reps;
        });
    out.method = ImportanceMethod::clip;
    out.seed = seed;
    return out;
}

/// Permutation-based global importance: mean over reps of (CV error after
/// permuting column j) minus the baseline CV error. Shares CLIP's
/// permutation streams, so with reps = M it equals the column means of
/// CLIP's V up to summation order.
inline std::vector<double> global_permutation_importance(const CvEnsemble& ens, const Dataset& ds,
                                                         const LossSpec& loss, std::size_t reps,
                                                         std::uint64_t seed,
                                                         std::size_t n_threads = 0) {
    check_loss_compatible(loss, ds.task.kind);
    if (reps < 1) throw ValidationError("reps must be >= 1");
    for (const auto& model : ens.models) model.check_compatible(ds);

    const std::size_t p = ds.n_features();
    const std::vector<double> baseline = cv_errors(ens, ds, loss, n_threads);
    const double base_mean = mean(baseline);

    std::vector<detail::AlterTask> tasks;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t r = 0; r < reps; ++r) tasks.push_back({j, r});

    // Each repetition contributes its error shift (altered mean - baseline
    // mean); an unused feature therefore contributes exact zeros.
    std::vector<double> shifts(tasks.size());
    parallel_for(tasks.size(), n_threads, [&](std::size_t t) {
        const auto [j, r] = tasks[t];
        const auto column = detail::permuted_column(ds, j, derive_seed(seed, j, r));
        shifts[t] = mean(detail::altered_losses(ens, ds, loss, j, column, baseline)) - base_mean;
    });

    std::vector<double> out(p);
    std::size_t t = 0;
    for (std::size_t j = 0; j < p; ++j) {
        double sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r, ++t) sum += shifts[t];
        out[j] = sum / static_cast<double>(reps);
    }
    return out;
}

struct PdpPoint {
    double grid_value = 0.0;
    double mean_prediction = 0.0;
};

/// Partial dependence of the prediction on feature j over its quantile grid.
/// Classification curves use the probability of `target_class` (default:
/// last class).
inline std::vector<PdpPoint> partial_dependence(const Forest& model, const Dataset& ds,
                                                std::size_t j, std::size_t m_reps,
                                                int target_class = -1,
                                                std::size_t n_threads = 0) {
    model.check_compatible(ds);
    if (j >= ds.n_features())
        throw ValidationError("feature index " + std::to_string(j) + " out of range");
    if (m_reps < 2) throw ValidationError("partial dependence needs a grid of at least 2 points");
    const bool cls = ds.task.kind == TaskKind::classification;
    if (cls) {
        if (target_class < 0) target_class = static_cast<int>(ds.task.classes.size()) - 1;
        if (static_cast<std::size_t>(target_class) >= ds.task.classes.size())
            throw ValidationError("target class index out of range");
    }

    const QuantileGrid grid = quantile_grid(ds, j, m_reps);
    std::vector<PdpPoint> out(grid.values.size());
    parallel_for(grid.values.size(), n_threads, [&](std::size_t g) {
        std::vector<double> row(ds.n_features());
        double sum = 0.0;
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            const auto original = ds.row(i);
            std::copy(original.begin(), original.end(), row.begin());
            row[j] = grid.values[g];
            const Prediction pred = model.predict(row);
            sum += cls ? pred.probs[static_cast<std::size_t>(target_class)] : pred.value;
        }
        out[g] = {grid.values[g], sum / static_cast<double>(ds.n_rows)};
    });
    return out;
}

/// Matrix values and row ids parsed back from an exported importance CSV.
struct ImportanceTable {
    std::vector<std::string> row_ids;
    std::vector<std::string> feature_names;
    std::vector<double> v; // row-major

    std::size_t n_rows() const { return row_ids.size(); }
    double at(std::size_t i, std::size_t j) const { return v[i * feature_names.size() + j]; }

    std::size_t feature_index(const std::string& name) const {
        for (std::size_t j = 0; j < feature_names.size(); ++j)
            if (feature_names[j] == name) return j;
        throw ValidationError("importance matrix has no column '" + name + "'");
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(n_rows());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, j);
        return out;
    }
};

inline ImportanceTable read_importance_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    const auto records = detail::parse_csv(buf.str(), path);
    if (records.empty() || records[0].empty() || records[0][0] != "id")
        throw ValidationError(path + ": expected an importance CSV starting with an 'id' column");
    ImportanceTable t;
    t.feature_names.assign(records[0].begin() + 1, records[0].end());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != records[0].size())
            throw ValidationError(path + ":" + std::to_string(r + 1) + ": ragged row");
        t.row_ids.push_back(records[r][0]);
        for (std::size_t c = 1; c < records[r].size(); ++c) {
            double v;
            if (!detail::parse_finite_double(records[r][c], v))
                throw ValidationError(path + ":" + std::to_string(r + 1) +
                                      ": cell '" + records[r][c] + "' is not a finite number");
            t.v.push_back(v);
        }
    }
    return t;
}

/// CSV export: header `id,<feature names...>`, shortest round-trip doubles.
inline void write_importance_csv(const ImportanceMatrix& m, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << "id";
    for (const auto& name : m.feature_names) file << ',' << name;
    file << '\n';
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        file << m.row_ids[i];
        for (std::size_t j = 0; j < m.n_features(); ++j)
            file << ',' << detail::format_double(m.at(i, j));
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace clique
