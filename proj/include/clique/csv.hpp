#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "clique/dataset.hpp"
#include "clique/errors.hpp"

namespace clique {

namespace detail {

/// RFC-4180 style parse: quoted fields may contain commas, escaped quotes
/// ("") and newlines. Accepts LF and CRLF line endings. Returns one vector of
/// fields per record.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& origin) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        fields.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(fields));
        fields.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started && !field.empty())
                throw ValidationError(origin + ":" + std::to_string(line) +
                                      ": stray quote inside unquoted field");
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            end_field();
            break;
        case '\r':
            break; // swallowed; the following \n ends the record
        case '\n':
            end_record();
            ++line;
            break;
        default:
            field += c;
            field_started = true;
            break;
        }
    }
    if (in_quotes)
        throw ValidationError(origin + ": unterminated quoted field at end of file");
    // Final record without trailing newline.
    if (field_started || !field.empty() || !fields.empty()) end_record();
    return records;
}

inline bool parse_finite_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin; // from_chars rejects a leading '+'
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

inline bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

inline void write_csv_field(std::ostream& os, const std::string& s) {
    if (!needs_quoting(s)) {
        os << s;
        return;
    }
    os << '"';
    for (const char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

} // namespace detail

/// Loads a header-first CSV into a Dataset. A column is numeric iff every
/// cell parses as a finite decimal float; otherwise it is categorical with
/// levels in first-appearance order. Classification classes are likewise
/// inferred from distinct label strings in first-appearance order. Empty
/// cells are treated as missing values and rejected.
inline Dataset load_csv(const std::string& path, const std::string& label_column, TaskKind task) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    const std::string text = buf.str();
    if (text.empty()) throw ValidationError(path + ": file is empty");

    const auto records = detail::parse_csv(text, path);
    if (records.empty()) throw ValidationError(path + ": file is empty");
    const auto& header = records[0];

    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column) {
            label_idx = j;
            break;
        }
    }
    if (label_idx == header.size())
        throw ValidationError(path + ": label column '" + label_column + "' not found in header");
    if (records.size() < 2) throw ValidationError(path + ": no data rows");

    const std::size_t n = records.size() - 1;
    const std::size_t n_cols = header.size();
    if (n_cols < 2)
        throw ValidationError(path + ": need at least one feature column besides the label");

    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != n_cols)
            throw ValidationError(path + ":" + std::to_string(r + 1) + ": row has " +
                                  std::to_string(records[r].size()) + " cells, expected " +
                                  std::to_string(n_cols));
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (records[r][c].empty())
                throw ValidationError(path + ":" + std::to_string(r + 1) +
                                      ": missing value in column '" + header[c] + "'");
        }
    }

    Dataset ds;
    ds.n_rows = n;
    ds.task.kind = task;

    // Column kind inference, label column excluded.
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < n_cols; ++c)
        if (c != label_idx) feature_cols.push_back(c);

    ds.cells.resize(n * feature_cols.size());
    for (std::size_t fj = 0; fj < feature_cols.size(); ++fj) {
        const std::size_t c = feature_cols[fj];
        FeatureSchema col;
        col.name = header[c];
        bool all_numeric = true;
        for (std::size_t r = 1; r <= n && all_numeric; ++r) {
            double v;
            all_numeric = detail::parse_finite_double(records[r][c], v);
        }
        if (all_numeric) {
            col.kind = FeatureKind::numeric;
            for (std::size_t r = 1; r <= n; ++r) {
                double v;
                detail::parse_finite_double(records[r][c], v);
                ds.cells[(r - 1) * feature_cols.size() + fj] = v;
            }
        } else {
            col.kind = FeatureKind::categorical;
            std::unordered_map<std::string, std::size_t> level_of;
            for (std::size_t r = 1; r <= n; ++r) {
                const std::string& s = records[r][c];
                auto [it, inserted] = level_of.try_emplace(s, col.levels.size());
                if (inserted) col.levels.push_back(s);
                ds.cells[(r - 1) * feature_cols.size() + fj] = static_cast<double>(it->second);
            }
        }
        ds.schema.push_back(std::move(col));
    }

    if (task == TaskKind::classification) {
        std::unordered_map<std::string, int> class_of;
        ds.y_cls.resize(n);
        for (std::size_t r = 1; r <= n; ++r) {
            const std::string& s = records[r][label_idx];
            auto [it, inserted] = class_of.try_emplace(s, static_cast<int>(ds.task.classes.size()));
            if (inserted) ds.task.classes.push_back(s);
            ds.y_cls[r - 1] = it->second;
        }
    } else {
        ds.y_reg.resize(n);
        for (std::size_t r = 1; r <= n; ++r) {
            double v;
            if (!detail::parse_finite_double(records[r][label_idx], v))
                throw ValidationError(path + ":" + std::to_string(r + 1) +
                                      ": label '" + records[r][label_idx] +
                                      "' is not a finite number (regression task)");
            ds.y_reg[r - 1] = v;
        }
    }

    ds.ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.ids[i] = std::to_string(i + 1);
    ds.label_column_name = label_column;
    ds.validate();
    return ds;
}

/// Writes features plus the label column; numeric cells use the shortest
/// round-trip format so that load_csv recovers bitwise-equal values.
inline void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        detail::write_csv_field(file, ds.schema[j].name);
        file << ',';
    }
    detail::write_csv_field(file, ds.label_column_name);
    file << '\n';
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        for (std::size_t j = 0; j < ds.n_features(); ++j) {
            const double v = ds.cell(i, j);
            if (ds.schema[j].kind == FeatureKind::numeric)
                file << detail::format_double(v);
            else
                detail::write_csv_field(file, ds.schema[j].levels[static_cast<std::size_t>(v)]);
            file << ',';
        }
        detail::write_csv_field(file, ds.label_string(i));
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace clique
