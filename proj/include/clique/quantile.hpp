#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "clique/dataset.hpp"
#include "clique/errors.hpp"

namespace clique {

/// Type-7 sample quantile: with 1-based order statistics x_(1) <= ... <= x_(n)
/// and h = (n-1)p + 1, q(p) = x_(floor(h)) + (h - floor(h)) (x_(floor(h)+1) - x_(floor(h))).
/// `sorted` must be nondecreasing and non-empty.
inline double type7_quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h0 = static_cast<double>(n - 1) * p; // h - 1, 0-based
    const double fl = std::floor(h0);
    auto lo = static_cast<std::size_t>(fl);
    if (lo >= n - 1) return sorted[n - 1];
    const double frac = h0 - fl;
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// M evenly spaced type-7 quantiles with p_m = (m-1)/(M-1). Intermediate
/// index arithmetic uses the exact integer product (m-1)(n-1) before the
/// division, so when M = n the grid reproduces the sorted sample exactly.
/// M = 1 yields the median.
inline std::vector<double> type7_grid_sorted(const std::vector<double>& sorted, std::size_t m_count) {
    const std::size_t n = sorted.size();
    std::vector<double> out;
    out.reserve(m_count);
    if (m_count == 1) {
        out.push_back(type7_quantile_sorted(sorted, 0.5));
        return out;
    }
    for (std::size_t m = 1; m <= m_count; ++m) {
        const double h0 = static_cast<double>((m - 1) * (n - 1)) / static_cast<double>(m_count - 1);
        const double fl = std::floor(h0);
        auto lo = static_cast<std::size_t>(fl);
        double v;
        if (lo >= n - 1) {
            v = sorted[n - 1];
        } else {
            const double frac = h0 - fl;
            v = frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
        }
        out.push_back(v);
    }
    return out;
}

/// Replacement-value grid for one feature. Numeric: M type-7 quantiles of the
/// observed column (ties kept, endpoints included). Categorical: every
/// observed level, M overridden to the level count, uniform probs.
struct QuantileGrid {
    std::size_t feature = 0;
    std::vector<double> values;
    std::vector<double> probs;
};

inline QuantileGrid quantile_grid(const Dataset& ds, std::size_t feature, std::size_t m_count) {
    if (feature >= ds.n_features())
        throw ValidationError("quantile_grid: feature index " + std::to_string(feature) +
                              " out of range");
    if (m_count < 1) throw ValidationError("quantile_grid: M must be >= 1");

    QuantileGrid grid;
    grid.feature = feature;

    if (ds.schema[feature].kind == FeatureKind::categorical) {
        std::vector<char> seen(ds.schema[feature].levels.size(), 0);
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            seen[static_cast<std::size_t>(ds.cell(i, feature))] = 1;
        for (std::size_t l = 0; l < seen.size(); ++l)
            if (seen[l]) grid.values.push_back(static_cast<double>(l));
        grid.probs.assign(grid.values.size(), 1.0 / static_cast<double>(grid.values.size()));
        return grid;
    }

    std::vector<double> sorted(ds.n_rows);
    for (std::size_t i = 0; i < ds.n_rows; ++i) sorted[i] = ds.cell(i, feature);
    std::sort(sorted.begin(), sorted.end());

    grid.values = type7_grid_sorted(sorted, m_count);
    if (m_count == 1) {
        grid.probs = {0.5};
    } else {
        grid.probs.resize(m_count);
        for (std::size_t m = 1; m <= m_count; ++m)
            grid.probs[m - 1] = static_cast<double>(m - 1) / static_cast<double>(m_count - 1);
    }
    return grid;
}

} // namespace clique
