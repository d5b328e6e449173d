#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vqlogic/errors.hpp"

namespace vqlogic {

enum class NodeKind { atom, negation, conjunction, disjunction };

// Propositional formula over 0-based atom indices. Nodes live in a postfix
// arena (children precede parents, root last), so copies are flat vector
// copies and evaluation is a single stack pass. Immutable once built.
class Formula {
public:
    struct Node {
        NodeKind kind;
        int a = -1; // atom index, or left child node index
        int b = -1; // right child node index (binary nodes only)
    };

    static Formula atom(int index) {
        if (index < 0) throw domain_error("atom index must be non-negative");
        Formula f;
        f.nodes_.push_back({NodeKind::atom, index, -1});
        return f;
    }

    static Formula negation(const Formula& f) {
        Formula out = f;
        out.nodes_.push_back({NodeKind::negation, out.root(), -1});
        return out;
    }

    static Formula conjunction(const Formula& l, const Formula& r) { return binary(NodeKind::conjunction, l, r); }
    static Formula disjunction(const Formula& l, const Formula& r) { return binary(NodeKind::disjunction, l, r); }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int root() const { return node_count() - 1; }
    const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

    // Number of distinct operands; atom indices are kept contiguous 0..n-1
    // by every constructor in this library.
    int atom_count() const {
        int max_index = -1;
        for (const Node& n : nodes_)
            if (n.kind == NodeKind::atom) max_index = std::max(max_index, n.a);
        return max_index + 1;
    }

    bool atoms_contiguous() const {
        int n = atom_count();
        if (n < 1) return false;
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (const Node& nd : nodes_)
            if (nd.kind == NodeKind::atom) seen[static_cast<std::size_t>(nd.a)] = true;
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    // NOT/AND/OR nodes in the tree; the dataset's "single vs multiple
    // operation" split keys off this.
    int connective_count() const {
        int c = 0;
        for (const Node& n : nodes_)
            if (n.kind != NodeKind::atom) ++c;
        return c;
    }

    bool is_nnf() const {
        for (const Node& n : nodes_)
            if (n.kind == NodeKind::negation && nodes_[static_cast<std::size_t>(n.a)].kind != NodeKind::atom)
                return false;
        return true;
    }

    friend bool operator==(const Formula& x, const Formula& y) {
        if (x.nodes_.size() != y.nodes_.size()) return false;
        for (std::size_t i = 0; i < x.nodes_.size(); ++i) {
            const Node& a = x.nodes_[i];
            const Node& b = y.nodes_[i];
            if (a.kind != b.kind || a.a != b.a || a.b != b.b) return false;
        }
        return true;
    }
    friend bool operator!=(const Formula& x, const Formula& y) { return !(x == y); }

private:
    Formula() = default;

    static Formula binary(NodeKind kind, const Formula& l, const Formula& r) {
        Formula out = l;
        int offset = out.node_count();
        for (const Node& n : r.nodes_) {
            Node shifted = n;
            if (n.kind != NodeKind::atom) {
                shifted.a += offset;
                if (shifted.b >= 0) shifted.b += offset;
            }
            out.nodes_.push_back(shifted);
        }
        out.nodes_.push_back({kind, offset - 1, out.node_count() - 1});
        return out;
    }

    std::vector<Node> nodes_;
};

inline Formula operator!(const Formula& f) { return Formula::negation(f); }
inline Formula operator&(const Formula& l, const Formula& r) { return Formula::conjunction(l, r); }
inline Formula operator|(const Formula& l, const Formula& r) { return Formula::disjunction(l, r); }

namespace detail {

// Assignment packed into bits of k, atom 0 = least significant bit.
inline bool eval_bits(const Formula& f, std::uint64_t k) {
    std::vector<bool> stack;
    stack.reserve(static_cast<std::size_t>(f.node_count()));
    for (int i = 0; i < f.node_count(); ++i) {
        const Formula::Node& n = f.node(i);
        switch (n.kind) {
        case NodeKind::atom:
            stack.push_back(((k >> n.a) & 1u) != 0);
            break;
        case NodeKind::negation:
            stack.back() = !stack.back();
            break;
        case NodeKind::conjunction:
        case NodeKind::disjunction: {
            bool rhs = stack.back();
            stack.pop_back();
            bool lhs = stack.back();
            stack.back() = (n.kind == NodeKind::conjunction) ? (lhs && rhs) : (lhs || rhs);
            break;
        }
        }
    }
    return stack.back();
}

} // namespace detail

inline bool eval(const Formula& f, const std::vector<bool>& assignment) {
    if (static_cast<int>(assignment.size()) != f.atom_count())
        throw arity_error("assignment has " + std::to_string(assignment.size()) + " values for a formula with " +
                          std::to_string(f.atom_count()) + " atoms");
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i]) k |= (1ULL << i);
    return detail::eval_bits(f, k);
}

// Entry k holds eval at the assignment whose bits are k (atom 0 = low bit).
inline std::vector<bool> truth_table(const Formula& f) {
    int n = f.atom_count();
    if (n > 20) throw capacity_error("truth table for " + std::to_string(n) + " atoms exceeds the 20-atom cap");
    std::vector<bool> table(std::size_t{1} << n);
    for (std::uint64_t k = 0; k < table.size(); ++k)
        table[static_cast<std::size_t>(k)] = detail::eval_bits(f, k);
    return table;
}

inline bool equivalent(const Formula& f, const Formula& g) {
    if (f.atom_count() != g.atom_count())
        throw arity_error("cannot compare formulas with " + std::to_string(f.atom_count()) + " vs " +
                          std::to_string(g.atom_count()) + " atoms");
    return truth_table(f) == truth_table(g);
}

namespace detail {

inline Formula nnf_walk(const Formula& f, int at, bool negated) {
    const Formula::Node& n = f.node(at);
    switch (n.kind) {
    case NodeKind::atom: {
        Formula a = Formula::atom(n.a);
        return negated ? !a : a;
    }
    case NodeKind::negation:
        return nnf_walk(f, n.a, !negated);
    case NodeKind::conjunction: {
        Formula l = nnf_walk(f, n.a, negated);
        Formula r = nnf_walk(f, n.b, negated);
        return negated ? (l | r) : (l & r);
    }
    case NodeKind::disjunction: {
        Formula l = nnf_walk(f, n.a, negated);
        Formula r = nnf_walk(f, n.b, negated);
        return negated ? (l & r) : (l | r);
    }
    }
    throw shape_error("unreachable formula node kind");
}

} // namespace detail

// Push negations down to atoms via De Morgan; double negations cancel.
inline Formula demorgan_nnf(const Formula& f) { return detail::nnf_walk(f, f.root(), false); }

// ---------------------------------------------------------------------------
// Label grammar. Canonical serialization is the prefix form
//   Qk | NOT(x) | AND(x,y) | OR(x,y)
// and the parser additionally accepts the flat infix form used for catalog
// labels ("NOT Q1 AND anto(B)"): NOT binds tighter, AND/OR share one
// precedence level and fold left. Whitespace-insensitive. Operand tokens are
// mapped to atom indices in order of first appearance.
// ---------------------------------------------------------------------------

struct LabelParse {
    Formula formula;
    std::vector<std::string> operands; // operand token per atom index
};

namespace detail {

struct LabelToken {
    enum Kind { ident, lparen, rparen, comma, end } kind;
    std::string text;
};

inline std::vector<LabelToken> lex_label(const std::string& s) {
    std::vector<LabelToken> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({LabelToken::lparen, "("});
            ++i;
        } else if (c == ')') {
            out.push_back({LabelToken::rparen, ")"});
            ++i;
        } else if (c == ',') {
            out.push_back({LabelToken::comma, ","});
            ++i;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({LabelToken::ident, s.substr(i, j - i)});
            i = j;
        } else {
            throw parse_error("unexpected character '" + std::string(1, c) + "' in formula label '" + s + "'");
        }
    }
    out.push_back({LabelToken::end, ""});
    return out;
}

class LabelParser {
public:
    explicit LabelParser(const std::string& text) : text_(text), tokens_(lex_label(text)) {}

    LabelParse run() {
        Formula f = parse_expr();
        expect(LabelToken::end, "end of label");
        return {std::move(f), std::move(operands_)};
    }

private:
    static bool is_connective(const std::string& t) { return t == "AND" || t == "OR"; }

    const LabelToken& peek() const { return tokens_[pos_]; }
    LabelToken take() { return tokens_[pos_++]; }

    void expect(LabelToken::Kind k, const std::string& what) {
        if (peek().kind != k)
            throw parse_error("expected " + what + " in formula label '" + text_ + "'");
        ++pos_;
    }

    Formula parse_expr() {
        Formula acc = parse_term();
        while (peek().kind == LabelToken::ident && is_connective(peek().text)) {
            std::string op = take().text;
            Formula rhs = parse_term();
            acc = (op == "AND") ? (acc & rhs) : (acc | rhs);
        }
        return acc;
    }

    Formula parse_term() {
        const LabelToken tok = take();
        if (tok.kind == LabelToken::lparen) {
            Formula inner = parse_expr();
            expect(LabelToken::rparen, "')'");
            return inner;
        }
        if (tok.kind != LabelToken::ident)
            throw parse_error("expected operand or connective in formula label '" + text_ + "'");
        if (tok.text == "NOT") {
            if (peek().kind == LabelToken::lparen) {
                ++pos_;
                Formula inner = parse_expr();
                expect(LabelToken::rparen, "')'");
                return !inner;
            }
            return !parse_term();
        }
        if (is_connective(tok.text)) {
            // Prefix call form AND(x,y) / OR(x,y).
            expect(LabelToken::lparen, "'(' after " + tok.text);
            Formula l = parse_expr();
            expect(LabelToken::comma, "','");
            Formula r = parse_expr();
            expect(LabelToken::rparen, "')'");
            return tok.text == "AND" ? (l & r) : (l | r);
        }
        // Operand. "anto" followed by a parenthesized ident is one operand
        // token, e.g. anto(B).
        std::string name = tok.text;
        if (name == "anto" && peek().kind == LabelToken::lparen) {
            ++pos_;
            const LabelToken arg = take();
            if (arg.kind != LabelToken::ident)
                throw parse_error("expected class token inside anto(...) in '" + text_ + "'");
            expect(LabelToken::rparen, "')'");
            name = "anto(" + arg.text + ")";
        }
        return Formula::atom(operand_index(name));
    }

    int operand_index(const std::string& name) {
        for (std::size_t i = 0; i < operands_.size(); ++i)
            if (operands_[i] == name) return static_cast<int>(i);
        operands_.push_back(name);
        return static_cast<int>(operands_.size()) - 1;
    }

    std::string text_;
    std::vector<LabelToken> tokens_;
    std::size_t pos_ = 0;
};

inline std::string default_operand(int i) { return "Q" + std::to_string(i + 1); }

inline std::string operand_name(const std::vector<std::string>& operands, int i) {
    if (i < static_cast<int>(operands.size())) return operands[static_cast<std::size_t>(i)];
    return default_operand(i);
}

inline std::string prefix_walk(const Formula& f, int at, const std::vector<std::string>& operands) {
    const Formula::Node& n = f.node(at);
    switch (n.kind) {
    case NodeKind::atom: return operand_name(operands, n.a);
    case NodeKind::negation: return "NOT(" + prefix_walk(f, n.a, operands) + ")";
    case NodeKind::conjunction: return "AND(" + prefix_walk(f, n.a, operands) + "," + prefix_walk(f, n.b, operands) + ")";
    case NodeKind::disjunction: return "OR(" + prefix_walk(f, n.a, operands) + "," + prefix_walk(f, n.b, operands) + ")";
    }
    throw shape_error("unreachable formula node kind");
}

inline std::string infix_walk(const Formula& f, int at, const std::vector<std::string>& operands, bool right_child) {
    const Formula::Node& n = f.node(at);
    switch (n.kind) {
    case NodeKind::atom: return operand_name(operands, n.a);
    case NodeKind::negation: {
        const Formula::Node& child = f.node(n.a);
        if (child.kind == NodeKind::atom) return "NOT " + operand_name(operands, child.a);
        return "NOT (" + infix_walk(f, n.a, operands, false) + ")";
    }
    case NodeKind::conjunction:
    case NodeKind::disjunction: {
        std::string op = (n.kind == NodeKind::conjunction) ? " AND " : " OR ";
        std::string s = infix_walk(f, n.a, operands, false) + op + infix_walk(f, n.b, operands, true);
        // Equal precedence + left association: only right-child compounds
        // need grouping to round-trip exactly.
        return right_child ? "(" + s + ")" : s;
    }
    }
    throw shape_error("unreachable formula node kind");
}

} // namespace detail

inline LabelParse parse_label(const std::string& text) {
    if (text.empty()) throw parse_error("empty formula label");
    return detail::LabelParser(text).run();
}

// Canonical serialization, e.g. AND(Q1,NOT(Q2)).
inline std::string format_prefix(const Formula& f, const std::vector<std::string>& operands = {}) {
    return detail::prefix_walk(f, f.root(), operands);
}

// Human-readable catalog style, e.g. "Q1 AND NOT Q2".
inline std::string format_infix(const Formula& f, const std::vector<std::string>& operands = {}) {
    return detail::infix_walk(f, f.root(), operands, false);
}

} // namespace vqlogic
