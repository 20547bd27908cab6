#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "clique/quantile.hpp"

namespace clique {

struct ColumnStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double variance = 0.0; // sample variance (n-1)
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline ColumnStats column_stats(const std::vector<double>& values) {
    ColumnStats s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.median = type7_quantile_sorted(sorted, 0.5);
    s.q1 = type7_quantile_sorted(sorted, 0.25);
    s.q3 = type7_quantile_sorted(sorted, 0.75);
    s.min = sorted.front();
    s.max = sorted.back();
    return s;
}

/// Two-region split of one importance column: stats inside and outside the
/// mask, plus the ratio of region means (in/out). The ratio is undefined
/// (NA) when either region is empty or both means are zero; a nonzero mean
/// against a zero mean reports as +/-inf.
struct RegionSummary {
    ColumnStats in;
    ColumnStats out;
    double mean_ratio = 0.0;
    bool ratio_defined = false;
};

inline RegionSummary summarize_regions(const std::vector<double>& column,
                                       const std::vector<char>& mask) {
    std::vector<double> inside, outside;
    for (std::size_t i = 0; i < column.size(); ++i)
        (mask[i] ? inside : outside).push_back(column[i]);
    RegionSummary s;
    s.in = column_stats(inside);
    s.out = column_stats(outside);
    if (s.in.count > 0 && s.out.count > 0 && !(s.in.mean == 0.0 && s.out.mean == 0.0)) {
        s.ratio_defined = true;
        s.mean_ratio = s.out.mean != 0.0
                           ? s.in.mean / s.out.mean
                           : std::copysign(std::numeric_limits<double>::infinity(), s.in.mean);
    }
    return s;
}

inline double mean_abs(const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) sum += std::abs(v);
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

/// Pearson correlation; 0 when either side is constant.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace clique
