#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "clique/dataset.hpp"
#include "clique/errors.hpp"
#include "clique/parallel.hpp"
#include "clique/rng.hpp"

namespace clique {

struct Hyperparams {
    std::size_t n_trees = 500;
    std::size_t mtry = 0;          // 0 = floor(sqrt p) classification, floor(p/3) regression, min 1
    std::size_t min_node_size = 0; // 0 = 1 classification, 5 regression
    std::size_t max_depth = 0;     // 0 = unlimited
    bool bootstrap = true;
    std::uint64_t seed = 1;

    bool operator==(const Hyperparams&) const = default;
};

inline std::size_t default_mtry(TaskKind task, std::size_t p) {
    const std::size_t m = task == TaskKind::classification
                              ? static_cast<std::size_t>(std::sqrt(static_cast<double>(p)))
                              : p / 3;
    return std::max<std::size_t>(1, std::min(m, p));
}

inline std::size_t default_min_node_size(TaskKind task) {
    return task == TaskKind::classification ? 1 : 5;
}

struct Prediction {
    double value = 0.0;        // regression value, or majority class index
    int cls = -1;              // classification only
    std::vector<double> probs; // classification only, sums to 1
};

inline std::uint64_t schema_fingerprint(const std::vector<FeatureSchema>& schema) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    auto feed = [&h](const std::string& s) {
        for (const char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (const auto& col : schema) {
        feed(col.name);
        feed(col.kind == FeatureKind::numeric ? "num" : "cat");
        for (const auto& level : col.levels) feed(level);
    }
    return h;
}

struct TreeNode {
    bool is_leaf = true;
    // split fields
    std::size_t feature = 0;
    double threshold = 0.0; // numeric: go left iff x < threshold
    int split_level = -1;   // categorical: go left iff x == split_level; -1 for numeric
    std::size_t left = 0;
    std::size_t right = 0;
    // leaf fields
    double value = 0.0;              // mean (regression) or majority class index
    std::vector<double> class_shares; // classification leaves

    bool operator==(const TreeNode&) const = default;
};

namespace detail {

struct TreeParams {
    std::size_t mtry = 1;
    std::size_t min_node_size = 1;
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
};

inline TreeParams resolve_params(const Hyperparams& hp, TaskKind task, std::size_t p) {
    TreeParams tp;
    tp.mtry = hp.mtry == 0 ? default_mtry(task, p) : hp.mtry;
    tp.min_node_size = hp.min_node_size == 0 ? default_min_node_size(task) : hp.min_node_size;
    tp.max_depth = hp.max_depth == 0 ? std::numeric_limits<std::size_t>::max() : hp.max_depth;
    if (tp.mtry > p)
        throw ValidationError("mtry (" + std::to_string(tp.mtry) + ") exceeds feature count (" +
                              std::to_string(p) + ")");
    return tp;
}

} // namespace detail

/// Greedy binary CART. Split criterion is Gini impurity decrease
/// (classification) or variance reduction (regression); mtry candidate
/// features are drawn per node from the tree's own stream; numeric split
/// points are midpoints between consecutive distinct sorted values;
/// categorical splits are one-level-vs-rest. Ties between splits keep the
/// first encountered in feature-then-threshold scan order.
class Tree {
public:
    static Tree fit(const Dataset& ds, const detail::TreeParams& params,
                    std::vector<std::size_t> rows, Rng& rng) {
        if (rows.empty()) throw ValidationError("fit_tree: row subset is empty");
        for (const std::size_t r : rows)
            if (r >= ds.n_rows) throw ValidationError("fit_tree: row index out of range");
        Tree tree;
        Builder builder{ds, params, rng, tree.nodes_};
        builder.build(rows, 0);
        return tree;
    }

    const TreeNode& leaf_for(std::span<const double> row) const {
        std::size_t idx = 0;
        for (;;) {
            const TreeNode& node = nodes_[idx];
            if (node.is_leaf) return node;
            const double x = row[node.feature];
            if (node.split_level >= 0)
                idx = x == static_cast<double>(node.split_level) ? node.left : node.right;
            else
                idx = x < node.threshold ? node.left : node.right;
        }
    }

    bool uses_feature(std::size_t j) const {
        for (const auto& node : nodes_)
            if (!node.is_leaf && node.feature == j) return true;
        return false;
    }

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::vector<TreeNode>& mutable_nodes() { return nodes_; }

    bool operator==(const Tree&) const = default;

private:
    struct Builder {
        const Dataset& ds;
        const detail::TreeParams& params;
        Rng& rng;
        std::vector<TreeNode>& nodes;

        std::size_t build(const std::vector<std::size_t>& rows, std::size_t depth) {
            const std::size_t node_idx = nodes.size();
            nodes.emplace_back();

            const bool classification = ds.task.kind == TaskKind::classification;
            if (rows.size() <= params.min_node_size || depth >= params.max_depth ||
                is_pure(rows)) {
                make_leaf(node_idx, rows);
                return node_idx;
            }

            auto candidates = rng.sample_without_replacement(ds.n_features(), params.mtry);
            std::sort(candidates.begin(), candidates.end());

            Split best;
            for (const std::size_t j : candidates) {
                if (ds.schema[j].kind == FeatureKind::numeric)
                    best_numeric_split(rows, j, classification, best);
                else
                    best_categorical_split(rows, j, classification, best);
            }

            if (!best.valid) {
                make_leaf(node_idx, rows);
                return node_idx;
            }

            std::vector<std::size_t> left_rows, right_rows;
            left_rows.reserve(rows.size());
            right_rows.reserve(rows.size());
            for (const std::size_t r : rows) {
                const double x = ds.cell(r, best.feature);
                const bool go_left = best.level >= 0 ? x == static_cast<double>(best.level)
                                                     : x < best.threshold;
                (go_left ? left_rows : right_rows).push_back(r);
            }

            nodes[node_idx].is_leaf = false;
            nodes[node_idx].feature = best.feature;
            nodes[node_idx].threshold = best.threshold;
            nodes[node_idx].split_level = best.level;
            const std::size_t left_idx = build(left_rows, depth + 1);
            const std::size_t right_idx = build(right_rows, depth + 1);
            nodes[node_idx].left = left_idx;
            nodes[node_idx].right = right_idx;
            return node_idx;
        }

        struct Split {
            bool valid = false;
            double gain = 0.0;
            std::size_t feature = 0;
            double threshold = 0.0;
            int level = -1;
        };

        bool is_pure(const std::vector<std::size_t>& rows) const {
            if (ds.task.kind == TaskKind::classification) {
                const int first = ds.y_cls[rows[0]];
                for (const std::size_t r : rows)
                    if (ds.y_cls[r] != first) return false;
            } else {
                const double first = ds.y_reg[rows[0]];
                for (const std::size_t r : rows)
                    if (ds.y_reg[r] != first) return false;
            }
            return true;
        }

        void make_leaf(std::size_t node_idx, const std::vector<std::size_t>& rows) {
            TreeNode& node = nodes[node_idx];
            node.is_leaf = true;
            if (ds.task.kind == TaskKind::classification) {
                const std::size_t k = ds.task.classes.size();
                std::vector<std::size_t> counts(k, 0);
                for (const std::size_t r : rows) ++counts[static_cast<std::size_t>(ds.y_cls[r])];
                std::size_t majority = 0;
                for (std::size_t c = 1; c < k; ++c)
                    if (counts[c] > counts[majority]) majority = c;
                node.value = static_cast<double>(majority);
                node.class_shares.resize(k);
                for (std::size_t c = 0; c < k; ++c)
                    node.class_shares[c] =
                        static_cast<double>(counts[c]) / static_cast<double>(rows.size());
            } else {
                double sum = 0.0;
                for (const std::size_t r : rows) sum += ds.y_reg[r];
                node.value = sum / static_cast<double>(rows.size());
            }
        }

        // Gini impurity from class counts: 1 - sum (c_k/n)^2, scaled later.
        static double gini(const std::vector<std::size_t>& counts, std::size_t n) {
            double sum_sq = 0.0;
            for (const std::size_t c : counts) {
                const double f = static_cast<double>(c) / static_cast<double>(n);
                sum_sq += f * f;
            }
            return 1.0 - sum_sq;
        }

        static double variance(double sum, double sumsq, std::size_t n) {
            const double dn = static_cast<double>(n);
            const double v = (sumsq - sum * sum / dn) / dn;
            return v > 0.0 ? v : 0.0;
        }

        void consider(Split& best, double gain, std::size_t feature, double threshold,
                      int level) const {
            // Strict improvement keeps the first-encountered split on ties.
            if (gain > 0.0 && (!best.valid || gain > best.gain)) {
                best.valid = true;
                best.gain = gain;
                best.feature = feature;
                best.threshold = threshold;
                best.level = level;
            }
        }

        void best_numeric_split(const std::vector<std::size_t>& rows, std::size_t j,
                                bool classification, Split& best) const {
            const std::size_t n = rows.size();
            std::vector<std::pair<double, std::size_t>> order(n);
            for (std::size_t i = 0; i < n; ++i) order[i] = {ds.cell(rows[i], j), rows[i]};
            std::sort(order.begin(), order.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            if (classification) {
                const std::size_t k = ds.task.classes.size();
                std::vector<std::size_t> total(k, 0), left(k, 0);
                for (const auto& [x, r] : order) ++total[static_cast<std::size_t>(ds.y_cls[r])];
                const double parent = gini(total, n);
                std::vector<std::size_t> right = total;
                for (std::size_t s = 1; s < n; ++s) {
                    const auto cls = static_cast<std::size_t>(ds.y_cls[order[s - 1].second]);
                    ++left[cls];
                    --right[cls];
                    const double a = order[s - 1].first;
                    const double b = order[s].first;
                    if (a == b) continue;
                    const double mid = a + (b - a) / 2.0;
                    if (!(a < mid)) continue; // adjacent doubles, no separating threshold
                    const double child =
                        (static_cast<double>(s) * gini(left, s) +
                         static_cast<double>(n - s) * gini(right, n - s)) /
                        static_cast<double>(n);
                    consider(best, parent - child, j, mid, -1);
                }
            } else {
                double total_sum = 0.0, total_sumsq = 0.0;
                for (const auto& [x, r] : order) {
                    total_sum += ds.y_reg[r];
                    total_sumsq += ds.y_reg[r] * ds.y_reg[r];
                }
                const double parent = variance(total_sum, total_sumsq, n);
                double left_sum = 0.0, left_sumsq = 0.0;
                for (std::size_t s = 1; s < n; ++s) {
                    const double y = ds.y_reg[order[s - 1].second];
                    left_sum += y;
                    left_sumsq += y * y;
                    const double a = order[s - 1].first;
                    const double b = order[s].first;
                    if (a == b) continue;
                    const double mid = a + (b - a) / 2.0;
                    if (!(a < mid)) continue;
                    const double child =
                        (static_cast<double>(s) * variance(left_sum, left_sumsq, s) +
                         static_cast<double>(n - s) *
                             variance(total_sum - left_sum, total_sumsq - left_sumsq, n - s)) /
                        static_cast<double>(n);
                    consider(best, parent - child, j, mid, -1);
                }
            }
        }

        void best_categorical_split(const std::vector<std::size_t>& rows, std::size_t j,
                                    bool classification, Split& best) const {
            const std::size_t n = rows.size();
            const std::size_t n_levels = ds.schema[j].levels.size();
            if (classification) {
                const std::size_t k = ds.task.classes.size();
                std::vector<std::size_t> total(k, 0);
                std::vector<std::vector<std::size_t>> per_level(n_levels,
                                                                std::vector<std::size_t>(k, 0));
                std::vector<std::size_t> level_n(n_levels, 0);
                for (const std::size_t r : rows) {
                    const auto level = static_cast<std::size_t>(ds.cell(r, j));
                    const auto cls = static_cast<std::size_t>(ds.y_cls[r]);
                    ++per_level[level][cls];
                    ++level_n[level];
                    ++total[cls];
                }
                const double parent = gini(total, n);
                std::vector<std::size_t> rest(k);
                for (std::size_t level = 0; level < n_levels; ++level) {
                    const std::size_t nl = level_n[level];
                    if (nl == 0 || nl == n) continue;
                    for (std::size_t c = 0; c < k; ++c) rest[c] = total[c] - per_level[level][c];
                    const double child =
                        (static_cast<double>(nl) * gini(per_level[level], nl) +
                         static_cast<double>(n - nl) * gini(rest, n - nl)) /
                        static_cast<double>(n);
                    consider(best, parent - child, j, 0.0, static_cast<int>(level));
                }
            } else {
                std::vector<double> level_sum(n_levels, 0.0), level_sumsq(n_levels, 0.0);
                std::vector<std::size_t> level_n(n_levels, 0);
                double total_sum = 0.0, total_sumsq = 0.0;
                for (const std::size_t r : rows) {
                    const auto level = static_cast<std::size_t>(ds.cell(r, j));
                    const double y = ds.y_reg[r];
                    level_sum[level] += y;
                    level_sumsq[level] += y * y;
                    ++level_n[level];
                    total_sum += y;
                    total_sumsq += y * y;
                }
                const double parent = variance(total_sum, total_sumsq, n);
                for (std::size_t level = 0; level < n_levels; ++level) {
                    const std::size_t nl = level_n[level];
                    if (nl == 0 || nl == n) continue;
                    const double child =
                        (static_cast<double>(nl) * variance(level_sum[level], level_sumsq[level], nl) +
                         static_cast<double>(n - nl) *
                             variance(total_sum - level_sum[level],
                                      total_sumsq - level_sumsq[level], n - nl)) /
                        static_cast<double>(n);
                    consider(best, parent - child, j, 0.0, static_cast<int>(level));
                }
            }
        }
    };

    std::vector<TreeNode> nodes_;
};

/// Tree ensemble behind the uniform fit/predict interface. Each tree draws
/// its own substream (hash of seed and tree index) so fitting is independent
/// of scheduling order. Classification predictions are majority votes with
/// vote-share probabilities; ties go to the class earliest in `classes`.
class Forest {
public:
    static Forest fit(const Dataset& ds, const Hyperparams& hp, std::size_t n_threads = 0) {
        std::vector<std::size_t> all(ds.n_rows);
        for (std::size_t i = 0; i < ds.n_rows; ++i) all[i] = i;
        return fit(ds, hp, all, n_threads);
    }

    static Forest fit(const Dataset& ds, const Hyperparams& hp,
                      const std::vector<std::size_t>& training_rows, std::size_t n_threads = 0) {
        if (hp.n_trees < 1) throw ValidationError("n_trees must be >= 1");
        if (training_rows.empty()) throw ValidationError("training row set is empty");
        const auto params = detail::resolve_params(hp, ds.task.kind, ds.n_features());

        Forest forest;
        forest.task_ = ds.task;
        forest.n_features_ = ds.n_features();
        forest.fingerprint_ = schema_fingerprint(ds.schema);
        forest.hp_ = hp;
        forest.trees_.resize(hp.n_trees);

        parallel_for(hp.n_trees, n_threads, [&](std::size_t t) {
            Rng rng(derive_seed(hp.seed, t));
            std::vector<std::size_t> rows;
            if (hp.bootstrap) {
                const std::size_t n = training_rows.size();
                rows.resize(n);
                for (std::size_t i = 0; i < n; ++i)
                    rows[i] = training_rows[static_cast<std::size_t>(rng.below(n))];
            } else {
                rows = training_rows;
            }
            forest.trees_[t] = Tree::fit(ds, params, std::move(rows), rng);
        });
        return forest;
    }

    /// Single CART tree on an explicit row subset (no bootstrap); uses the
    /// same stream as tree 0 of a forest.
    static Forest fit_single_tree(const Dataset& ds, const Hyperparams& hp,
                                  const std::vector<std::size_t>& rows) {
        const auto params = detail::resolve_params(hp, ds.task.kind, ds.n_features());
        Forest forest;
        forest.task_ = ds.task;
        forest.n_features_ = ds.n_features();
        forest.fingerprint_ = schema_fingerprint(ds.schema);
        forest.hp_ = hp;
        forest.hp_.n_trees = 1;
        forest.hp_.bootstrap = false;
        Rng rng(derive_seed(hp.seed, 0));
        forest.trees_.push_back(Tree::fit(ds, params, rows, rng));
        return forest;
    }

    Prediction predict(std::span<const double> row) const {
        if (row.size() != n_features_)
            throw ValidationError("schema mismatch: row has " + std::to_string(row.size()) +
                                  " cells, model expects " + std::to_string(n_features_));
        Prediction out;
        if (task_.kind == TaskKind::classification) {
            const std::size_t k = task_.classes.size();
            std::vector<std::size_t> votes(k, 0);
            for (const auto& tree : trees_)
                ++votes[static_cast<std::size_t>(tree.leaf_for(row).value)];
            std::size_t majority = 0;
            for (std::size_t c = 1; c < k; ++c)
                if (votes[c] > votes[majority]) majority = c;
            out.cls = static_cast<int>(majority);
            out.value = static_cast<double>(majority);
            out.probs.resize(k);
            for (std::size_t c = 0; c < k; ++c)
                out.probs[c] = static_cast<double>(votes[c]) / static_cast<double>(trees_.size());
        } else {
            double sum = 0.0;
            for (const auto& tree : trees_) sum += tree.leaf_for(row).value;
            out.value = sum / static_cast<double>(trees_.size());
        }
        return out;
    }

    void check_compatible(const Dataset& ds) const {
        if (schema_fingerprint(ds.schema) != fingerprint_ || ds.task != task_)
            throw ValidationError("dataset schema does not match the fitted model");
    }

    bool uses_feature(std::size_t j) const {
        for (const auto& tree : trees_)
            if (tree.uses_feature(j)) return true;
        return false;
    }

    const Task& task() const { return task_; }
    std::size_t n_features() const { return n_features_; }
    std::uint64_t fingerprint() const { return fingerprint_; }
    const Hyperparams& hyperparams() const { return hp_; }
    const std::vector<Tree>& trees() const { return trees_; }

    bool operator==(const Forest&) const = default;

    // Used by deserialization.
    static Forest from_parts(Task task, std::size_t n_features, std::uint64_t fingerprint,
                             Hyperparams hp, std::vector<Tree> trees) {
        Forest f;
        f.task_ = std::move(task);
        f.n_features_ = n_features;
        f.fingerprint_ = fingerprint;
        f.hp_ = hp;
        f.trees_ = std::move(trees);
        return f;
    }

private:
    Task task_;
    std::size_t n_features_ = 0;
    std::uint64_t fingerprint_ = 0;
    Hyperparams hp_;
    std::vector<Tree> trees_;
};

} // namespace clique
