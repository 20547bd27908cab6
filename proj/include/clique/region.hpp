#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "clique/csv.hpp"
#include "clique/dataset.hpp"
#include "clique/errors.hpp"

namespace clique {

/// Boolean region expression over dataset columns, e.g.
///   "v2 < -0.3333"
///   "v1 > 0 and (v2 > 0.25 or v2 < -0.25)"
///   "not color == red"
/// Comparison operators: < <= > >= == !=. `and` binds tighter than `or`.
/// Numeric columns compare against decimal literals; categorical columns
/// support == / != against a level name (optionally double-quoted).
class RegionExpr {
public:
    static RegionExpr parse(const std::string& text);

    /// Length-n boolean mask (1 = in region).
    std::vector<char> evaluate(const Dataset& ds) const;

    const std::string& text() const { return text_; }

private:
    enum class Op { lt, le, gt, ge, eq, ne };

    struct Node {
        enum class Kind { and_, or_, not_, cmp } kind = Kind::cmp;
        std::unique_ptr<Node> lhs, rhs;
        std::string column;
        Op op = Op::lt;
        std::string operand;     // literal as written
        double operand_num = 0;  // parsed when numeric
        bool operand_is_num = false;
    };

    struct Parser;

    static bool eval_node(const Node& node, const Dataset& ds, std::size_t row);

    std::string text_;
    std::unique_ptr<Node> root_;
};

struct RegionExpr::Parser {
    const std::string& s;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("region expression: " + msg + " at position " +
                              std::to_string(pos + 1) + " in '" + s + "'");
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }

    std::string peek_word() {
        skip_ws();
        std::size_t i = pos;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        return s.substr(pos, i - pos);
    }

    bool eat_word(const std::string& w) {
        if (peek_word() != w) return false;
        pos += w.size();
        return true;
    }

    std::unique_ptr<Node> parse_expr() {
        auto lhs = parse_and();
        while (eat_word("or")) {
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::or_;
            node->lhs = std::move(lhs);
            node->rhs = parse_and();
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_and() {
        auto lhs = parse_primary();
        while (eat_word("and")) {
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::and_;
            node->lhs = std::move(lhs);
            node->rhs = parse_primary();
            lhs = std::move(node);
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_primary() {
        skip_ws();
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            auto inner = parse_expr();
            skip_ws();
            if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
            ++pos;
            return inner;
        }
        if (eat_word("not")) {
            auto node = std::make_unique<Node>();
            node->kind = Node::Kind::not_;
            node->lhs = parse_primary();
            return node;
        }
        return parse_comparison();
    }

    std::unique_ptr<Node> parse_comparison() {
        skip_ws();
        const std::string column = peek_word();
        if (column.empty() || column == "and" || column == "or") fail("expected a column name");
        pos += column.size();
        skip_ws();

        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::cmp;
        node->column = column;
        if (pos + 1 < s.size() && s[pos + 1] == '=') {
            switch (s[pos]) {
            case '<': node->op = Op::le; break;
            case '>': node->op = Op::ge; break;
            case '=': node->op = Op::eq; break;
            case '!': node->op = Op::ne; break;
            default: fail("expected a comparison operator");
            }
            pos += 2;
        } else if (pos < s.size() && (s[pos] == '<' || s[pos] == '>')) {
            node->op = s[pos] == '<' ? Op::lt : Op::gt;
            ++pos;
        } else {
            fail("expected a comparison operator");
        }

        skip_ws();
        if (pos >= s.size()) fail("expected a literal");
        if (s[pos] == '"') {
            ++pos;
            const std::size_t close = s.find('"', pos);
            if (close == std::string::npos) fail("unterminated string literal");
            node->operand = s.substr(pos, close - pos);
            pos = close + 1;
        } else {
            std::size_t i = pos;
            while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ')')
                ++i;
            node->operand = s.substr(pos, i - pos);
            pos = i;
        }
        if (node->operand.empty()) fail("expected a literal");
        node->operand_is_num = detail::parse_finite_double(node->operand, node->operand_num);
        return node;
    }
};

inline RegionExpr RegionExpr::parse(const std::string& text) {
    RegionExpr expr;
    expr.text_ = text;
    Parser parser{text};
    expr.root_ = parser.parse_expr();
    if (!parser.at_end()) parser.fail("unexpected trailing input");
    return expr;
}

inline bool RegionExpr::eval_node(const Node& node, const Dataset& ds, std::size_t row) {
    switch (node.kind) {
    case Node::Kind::and_: return eval_node(*node.lhs, ds, row) && eval_node(*node.rhs, ds, row);
    case Node::Kind::or_: return eval_node(*node.lhs, ds, row) || eval_node(*node.rhs, ds, row);
    case Node::Kind::not_: return !eval_node(*node.lhs, ds, row);
    case Node::Kind::cmp: break;
    }

    std::size_t col = ds.n_features();
    for (std::size_t j = 0; j < ds.n_features(); ++j)
        if (ds.schema[j].name == node.column) {
            col = j;
            break;
        }
    if (col == ds.n_features())
        throw ValidationError("region expression references unknown column '" + node.column + "'");

    if (ds.schema[col].kind == FeatureKind::numeric) {
        if (!node.operand_is_num)
            throw ValidationError("column '" + node.column +
                                  "' is numeric but literal '" + node.operand + "' is not");
        const double x = ds.cell(row, col);
        switch (node.op) {
        case Op::lt: return x < node.operand_num;
        case Op::le: return x <= node.operand_num;
        case Op::gt: return x > node.operand_num;
        case Op::ge: return x >= node.operand_num;
        case Op::eq: return x == node.operand_num;
        case Op::ne: return x != node.operand_num;
        }
    }
    if (node.op != Op::eq && node.op != Op::ne)
        throw ValidationError("column '" + node.column +
                              "' is categorical; only == and != are supported");
    const auto& levels = ds.schema[col].levels;
    const std::string& level = levels[static_cast<std::size_t>(ds.cell(row, col))];
    return node.op == Op::eq ? level == node.operand : level != node.operand;
}

inline std::vector<char> RegionExpr::evaluate(const Dataset& ds) const {
    std::vector<char> mask(ds.n_rows);
    for (std::size_t i = 0; i < ds.n_rows; ++i) mask[i] = eval_node(*root_, ds, i) ? 1 : 0;
    return mask;
}

} // namespace clique
