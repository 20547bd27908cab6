#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "clique/dataset.hpp"
#include "clique/errors.hpp"
#include "clique/rng.hpp"

namespace clique {

enum class SimKind { and_gate, corners, reg_interaction };

inline const char* to_string(SimKind k) {
    switch (k) {
    case SimKind::and_gate: return "and_gate";
    case SimKind::corners: return "corners";
    case SimKind::reg_interaction: return "reg_interaction";
    }
    return "?";
}

struct SimSpec {
    SimKind kind = SimKind::and_gate;
    std::size_t n = 400;
    std::uint64_t seed = 1;
};

/// Generates one of the three synthetic benchmark datasets. Features are iid
/// U(-1,1), drawn row-major (row 1 features 1..p, then row 2, ...), so the
/// output is a pure function of (kind, n, seed).
///
///   and_gate:        p=3, y = 1 if v1 > -1/3 and v2 > -1/3, else 0; v3 is noise.
///   corners:         p=3, y = 1 if v1 > 0 and |v2| > 1/4, else 0; v3 is noise.
///   reg_interaction: p=4, y = v1 if v3 > 0 else v2; v4 is noise.
inline Dataset simulate(const SimSpec& spec) {
    if (spec.n < 1) throw ValidationError("simulate: n must be >= 1");

    const bool regression = spec.kind == SimKind::reg_interaction;
    const std::size_t p = regression ? 4 : 3;

    Dataset ds;
    ds.n_rows = spec.n;
    for (std::size_t j = 0; j < p; ++j)
        ds.schema.push_back({"v" + std::to_string(j + 1), FeatureKind::numeric, {}});
    if (regression) {
        ds.task = {TaskKind::regression, {}};
        ds.y_reg.resize(spec.n);
    } else {
        ds.task = {TaskKind::classification, {"0", "1"}};
        ds.y_cls.resize(spec.n);
    }
    ds.cells.resize(spec.n * p);

    Rng rng(spec.seed);
    const double third = 1.0 / 3.0;
    for (std::size_t i = 0; i < spec.n; ++i) {
        double* row = ds.cells.data() + i * p;
        for (std::size_t j = 0; j < p; ++j) row[j] = rng.uniform(-1.0, 1.0);
        switch (spec.kind) {
        case SimKind::and_gate:
            ds.y_cls[i] = (row[0] > -third && row[1] > -third) ? 1 : 0;
            break;
        case SimKind::corners:
            ds.y_cls[i] = (row[0] > 0.0 && std::abs(row[1]) > 0.25) ? 1 : 0;
            break;
        case SimKind::reg_interaction:
            ds.y_reg[i] = row[2] > 0.0 ? row[0] : row[1];
            break;
        }
    }

    ds.ids.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) ds.ids[i] = std::to_string(i + 1);
    ds.label_column_name = "y";
    return ds;
}

inline SimKind sim_kind_from_string(const std::string& s) {
    if (s == "and_gate") return SimKind::and_gate;
    if (s == "corners") return SimKind::corners;
    if (s == "reg_interaction") return SimKind::reg_interaction;
    throw ValidationError("unknown simulation kind '" + s +
                          "' (expected and_gate, corners or reg_interaction)");
}

} // namespace clique
