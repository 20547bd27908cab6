#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "clique/errors.hpp"
#include "clique/forest.hpp"

namespace clique {

inline constexpr int kModelFormatVersion = 1;

/// Self-describing JSON model format. Doubles are emitted in shortest
/// round-trip form, so save/load reproduces the forest exactly.
inline nlohmann::json forest_to_json(const Forest& forest) {
    nlohmann::json j;
    j["format"] = "clique-forest";
    j["version"] = kModelFormatVersion;
    j["task"] = forest.task().kind == TaskKind::classification ? "classification" : "regression";
    j["classes"] = forest.task().classes;
    j["n_features"] = forest.n_features();
    j["schema_fingerprint"] = forest.fingerprint();
    const Hyperparams& hp = forest.hyperparams();
    j["hyperparams"] = {{"n_trees", hp.n_trees},     {"mtry", hp.mtry},
                        {"min_node_size", hp.min_node_size}, {"max_depth", hp.max_depth},
                        {"bootstrap", hp.bootstrap}, {"seed", hp.seed}};
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : forest.trees()) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& node : tree.nodes()) {
            nlohmann::json n;
            if (node.is_leaf) {
                n["value"] = node.value;
                if (!node.class_shares.empty()) n["shares"] = node.class_shares;
            } else {
                n["feature"] = node.feature;
                if (node.split_level >= 0)
                    n["level"] = node.split_level;
                else
                    n["threshold"] = node.threshold;
                n["left"] = node.left;
                n["right"] = node.right;
            }
            nodes.push_back(std::move(n));
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    j["trees"] = std::move(trees);
    return j;
}

inline Forest forest_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != "clique-forest")
            throw ValidationError("not a clique-forest model file");
        if (j.at("version").get<int>() != kModelFormatVersion)
            throw ValidationError("unsupported model format version");
        Task task;
        task.kind = j.at("task").get<std::string>() == "classification"
                        ? TaskKind::classification
                        : TaskKind::regression;
        task.classes = j.at("classes").get<std::vector<std::string>>();
        Hyperparams hp;
        const auto& h = j.at("hyperparams");
        hp.n_trees = h.at("n_trees").get<std::size_t>();
        hp.mtry = h.at("mtry").get<std::size_t>();
        hp.min_node_size = h.at("min_node_size").get<std::size_t>();
        hp.max_depth = h.at("max_depth").get<std::size_t>();
        hp.bootstrap = h.at("bootstrap").get<bool>();
        hp.seed = h.at("seed").get<std::uint64_t>();

        std::vector<Tree> trees;
        for (const auto& jt : j.at("trees")) {
            Tree tree;
            for (const auto& jn : jt.at("nodes")) {
                TreeNode node;
                if (jn.contains("value")) {
                    node.is_leaf = true;
                    node.value = jn.at("value").get<double>();
                    if (jn.contains("shares"))
                        node.class_shares = jn.at("shares").get<std::vector<double>>();
                } else {
                    node.is_leaf = false;
                    node.feature = jn.at("feature").get<std::size_t>();
                    if (jn.contains("level")) {
                        node.split_level = jn.at("level").get<int>();
                    } else {
                        node.split_level = -1;
                        node.threshold = jn.at("threshold").get<double>();
                    }
                    node.left = jn.at("left").get<std::size_t>();
                    node.right = jn.at("right").get<std::size_t>();
                }
                tree.mutable_nodes().push_back(std::move(node));
            }
            trees.push_back(std::move(tree));
        }
        return Forest::from_parts(std::move(task), j.at("n_features").get<std::size_t>(),
                                  j.at("schema_fingerprint").get<std::uint64_t>(), hp,
                                  std::move(trees));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const Forest& forest, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << forest_to_json(forest) << '\n';
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

inline Forest load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open file '" + path + "'");
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return forest_from_json(j);
}

} // namespace clique
