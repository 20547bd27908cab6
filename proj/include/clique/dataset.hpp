#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "clique/errors.hpp"

namespace clique {

enum class FeatureKind { numeric, categorical };

struct FeatureSchema {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    std::vector<std::string> levels; // categorical only, ordered

    bool operator==(const FeatureSchema&) const = default;
};

enum class TaskKind { regression, classification };

struct Task {
    TaskKind kind = TaskKind::regression;
    std::vector<std::string> classes; // classification only, ordered

    bool operator==(const Task&) const = default;
};

/// Column-schema'd feature matrix plus labels. Cells are stored as doubles;
/// a categorical cell holds its level index. Immutable by convention after
/// construction, safe to share across threads.
struct Dataset {
    std::vector<FeatureSchema> schema;
    std::size_t n_rows = 0;
    std::vector<double> cells; // row-major, n_rows * schema.size()
    Task task;
    std::vector<double> y_reg; // regression labels
    std::vector<int> y_cls;    // classification labels (class indices)
    std::vector<std::string> ids;
    std::string label_column_name = "y";

    std::size_t n_features() const { return schema.size(); }

    double cell(std::size_t row, std::size_t col) const {
        return cells[row * schema.size() + col];
    }
    double& cell(std::size_t row, std::size_t col) {
        return cells[row * schema.size() + col];
    }

    std::span<const double> row(std::size_t i) const {
        return {cells.data() + i * schema.size(), schema.size()};
    }

    /// Label rendered as text: the class name, or the numeric value's
    /// shortest round-trip form.
    std::string label_string(std::size_t i) const;

    bool operator==(const Dataset&) const = default;

    /// Checks the structural invariants; throws ValidationError on violation.
    void validate() const;
};

namespace detail {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace detail

inline std::string Dataset::label_string(std::size_t i) const {
    if (task.kind == TaskKind::classification) return task.classes.at(static_cast<std::size_t>(y_cls[i]));
    return detail::format_double(y_reg[i]);
}

inline void Dataset::validate() const {
    const std::size_t p = schema.size();
    if (n_rows < 1) throw ValidationError("dataset must have at least one row");
    if (p < 1) throw ValidationError("dataset must have at least one feature");
    if (cells.size() != n_rows * p) throw ValidationError("cell count does not match n_rows * n_features");
    if (ids.size() != n_rows) throw ValidationError("row id count does not match n_rows");

    std::unordered_set<std::string> names;
    for (const auto& col : schema) {
        if (!names.insert(col.name).second)
            throw ValidationError("duplicate column name '" + col.name + "'");
        if (col.kind == FeatureKind::categorical) {
            if (col.levels.empty())
                throw ValidationError("categorical column '" + col.name + "' has no levels");
            std::unordered_set<std::string> lv(col.levels.begin(), col.levels.end());
            if (lv.size() != col.levels.size())
                throw ValidationError("categorical column '" + col.name + "' has duplicate levels");
        }
    }

    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double v = cell(i, j);
            if (!std::isfinite(v))
                throw ValidationError("non-finite cell at row " + std::to_string(i + 1) +
                                      ", column '" + schema[j].name + "'");
            if (schema[j].kind == FeatureKind::categorical) {
                const auto idx = static_cast<long long>(v);
                if (v != static_cast<double>(idx) || idx < 0 ||
                    static_cast<std::size_t>(idx) >= schema[j].levels.size())
                    throw ValidationError("invalid level index at row " + std::to_string(i + 1) +
                                          ", column '" + schema[j].name + "'");
            }
        }
    }

    if (task.kind == TaskKind::classification) {
        if (task.classes.empty()) throw ValidationError("classification task has no classes");
        if (y_cls.size() != n_rows) throw ValidationError("label count does not match n_rows");
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (y_cls[i] < 0 || static_cast<std::size_t>(y_cls[i]) >= task.classes.size())
                throw ValidationError("label index out of range at row " + std::to_string(i + 1));
        }
    } else {
        if (y_reg.size() != n_rows) throw ValidationError("label count does not match n_rows");
        for (std::size_t i = 0; i < n_rows; ++i) {
            if (!std::isfinite(y_reg[i]))
                throw ValidationError("non-finite label at row " + std::to_string(i + 1));
        }
    }
}

} // namespace clique
