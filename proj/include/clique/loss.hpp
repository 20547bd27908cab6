#pragma once

#include <string>

#include "clique/dataset.hpp"
#include "clique/errors.hpp"
#include "clique/forest.hpp"

namespace clique {

enum class LossKind { squared_error, zero_one, brier };

struct LossSpec {
    LossKind kind = LossKind::squared_error;

    bool operator==(const LossSpec&) const = default;
};

inline const char* to_string(LossKind k) {
    switch (k) {
    case LossKind::squared_error: return "squared_error";
    case LossKind::zero_one: return "zero_one";
    case LossKind::brier: return "brier";
    }
    return "?";
}

inline LossKind loss_kind_from_string(const std::string& s) {
    if (s == "squared_error") return LossKind::squared_error;
    if (s == "zero_one") return LossKind::zero_one;
    if (s == "brier") return LossKind::brier;
    throw ValidationError("unknown loss '" + s +
                          "' (expected squared_error, zero_one or brier)");
}

inline LossSpec default_loss(TaskKind task) {
    return {task == TaskKind::classification ? LossKind::zero_one : LossKind::squared_error};
}

inline void check_loss_compatible(const LossSpec& loss, TaskKind task) {
    const bool cls = task == TaskKind::classification;
    const bool ok = loss.kind == LossKind::squared_error ? !cls : cls;
    if (!ok)
        throw ValidationError(std::string("loss '") + to_string(loss.kind) +
                              "' is incompatible with a " +
                              (cls ? "classification" : "regression") + " task");
}

/// Per-observation loss of a prediction against the true label of row i.
inline double loss_value(const LossSpec& loss, const Prediction& pred, const Dataset& ds,
                         std::size_t i) {
    switch (loss.kind) {
    case LossKind::squared_error: {
        const double d = pred.value - ds.y_reg[i];
        return d * d;
    }
    case LossKind::zero_one:
        return pred.cls == ds.y_cls[i] ? 0.0 : 1.0;
    case LossKind::brier: {
        double sum = 0.0;
        for (std::size_t c = 0; c < pred.probs.size(); ++c) {
            const double d = pred.probs[c] - (static_cast<std::size_t>(ds.y_cls[i]) == c ? 1.0 : 0.0);
            sum += d * d;
        }
        return sum;
    }
    }
    return 0.0;
}

} // namespace clique
