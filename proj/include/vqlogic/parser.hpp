#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqlogic/errors.hpp"
#include "vqlogic/formula.hpp"
#include "vqlogic/negation.hpp"
#include "vqlogic/textgen.hpp"

namespace vqlogic {

struct ParsedComponent {
    std::string text; // recovered base question, ending in "?"
    bool negated = false;
};

struct ParseResult {
    std::string text; // input as given (whitespace-normalized)
    std::vector<ParsedComponent> components;
    std::vector<std::string> spans; // surface text of each component, markers included
    Formula formula = Formula::atom(0);
    double confidence = 1.0; // rule-based: always 1
};

namespace detail {

// Noun compounds that contain a connective word and must not be split.
inline constexpr std::array<const char*, 3> kStopPhrases[] = {
    {"black", "and", "white"},
    {"salt", "and", "pepper"},
    {"fish", "and", "chips"},
};

inline bool inside_stop_phrase(const std::vector<std::string>& tokens, std::size_t i) {
    if (i == 0 || i + 1 >= tokens.size()) return false;
    std::string prev = text_detail::core(tokens[i - 1]);
    std::string word = text_detail::core(tokens[i]);
    std::string next = text_detail::core(tokens[i + 1]);
    for (const auto& phrase : kStopPhrases)
        if (prev == phrase[0] && word == phrase[1] && next == phrase[2]) return true;
    return false;
}

struct ComponentParse {
    std::string base;
    std::string span;
    bool negated = false;
};

// Undo the negation templates on one component's tokens. Mirrors the rules
// in negation.hpp: an existential "no" after "is/are there" (restoring a/an
// for singular count nouns), otherwise the first inserted "not".
inline ComponentParse strip_component(std::vector<std::string> tokens, bool first_component) {
    using namespace text_detail;
    ComponentParse out;
    out.span = join(tokens);

    bool negated = false;
    std::string head = tokens.empty() ? std::string() : core(tokens[0]);
    if ((head == "is" || head == "are" || head == "was" || head == "were") && tokens.size() >= 4 &&
        core(tokens[1]) == "there" && core(tokens[2]) == "no") {
        tokens.erase(tokens.begin() + 2);
        if (!is_bare_noun(tokens[2]))
            tokens.insert(tokens.begin() + 2, starts_with_vowel(tokens[2]) ? "an" : "a");
        negated = true;
    } else {
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            if (core(tokens[i]) == "not") {
                tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
                negated = true;
                break;
            }
        }
    }

    std::string base = join(tokens);
    base = strip_question_mark(base);
    if (!first_component) base = uppercase_first(base);
    base.push_back('?');
    out.base = base;
    out.negated = negated;
    return out;
}

} // namespace detail

// Decompose a composed question: split at top-level "and"/"or" tokens,
// undo the negation template inside each component, and rebuild the
// left-folded formula. Total: connective-free text parses as one component.
inline ParseResult parse_composed(const std::string& text) {
    std::string normalized = text_detail::normalize_spaces(text);
    if (normalized.empty()) throw input_error("cannot parse empty question text");
    std::vector<std::string> tokens = text_detail::tokenize(normalized);

    ParseResult result;
    result.text = normalized;

    std::vector<std::vector<std::string>> groups(1);
    std::vector<bool> ops; // true = AND
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string word = text_detail::core(tokens[i]);
        bool is_conn = (word == "and" || word == "or") && i > 0 && i + 1 < tokens.size() &&
                       !detail::inside_stop_phrase(tokens, i);
        if (is_conn) {
            ops.push_back(word == "and");
            groups.emplace_back();
        } else {
            groups.back().push_back(tokens[i]);
        }
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        detail::ComponentParse comp = detail::strip_component(groups[g], g == 0);
        result.components.push_back({comp.base, comp.negated});
        result.spans.push_back(comp.span);
    }

    auto literal = [&](std::size_t i) {
        Formula a = Formula::atom(static_cast<int>(i));
        return result.components[i].negated ? !a : a;
    };
    Formula f = literal(0);
    for (std::size_t i = 1; i < result.components.size(); ++i)
        f = ops[i - 1] ? (f & literal(i)) : (f | literal(i));
    result.formula = f;
    return result;
}

// ---------------------------------------------------------------------------
// B-I-O tagging and parser metrics
// ---------------------------------------------------------------------------

enum class BioTag { B, I, O };

inline std::string bio_tag_name(BioTag t) {
    switch (t) {
    case BioTag::B: return "B-Const";
    case BioTag::I: return "I-Const";
    case BioTag::O: return "O";
    }
    return "O";
}

using BioTags = std::vector<BioTag>;

// Tag the text's tokens: constituent tokens B/I, connectives and negation
// markers O. A marker inside a span re-opens the constituent with a fresh B
// so I never follows O.
inline BioTags to_bio(const std::string& text, const std::vector<std::string>& components) {
    std::vector<std::string> tokens = text_detail::tokenize(text_detail::normalize_spaces(text));
    BioTags tags(tokens.size(), BioTag::O);

    std::size_t cursor = 0;
    for (const std::string& comp : components) {
        std::vector<std::string> ctoks = text_detail::tokenize(comp);
        if (ctoks.empty()) throw alignment_error("empty gold component");
        // Find the component's tokens contiguously at or after the cursor.
        std::size_t start = tokens.size();
        for (std::size_t i = cursor; i + ctoks.size() <= tokens.size(); ++i) {
            bool match = true;
            for (std::size_t k = 0; k < ctoks.size(); ++k) {
                if (text_detail::core(tokens[i + k]) != text_detail::core(ctoks[k])) {
                    match = false;
                    break;
                }
            }
            if (match) {
                start = i;
                break;
            }
        }
        if (start == tokens.size())
            throw alignment_error("component '" + comp + "' not found in text '" + text + "'");
        for (std::size_t k = 0; k < ctoks.size(); ++k)
            tags[start + k] = (k == 0) ? BioTag::B : BioTag::I;
        cursor = start + ctoks.size();
    }

    // Negation markers become O; the templates only produce "not" anywhere
    // or an existential "no" right after "there".
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tags[i] == BioTag::O) continue;
        std::string word = text_detail::core(tokens[i]);
        if (word == "not" || (word == "no" && i >= 1 && text_detail::core(tokens[i - 1]) == "there"))
            tags[i] = BioTag::O;
    }
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == BioTag::I && (i == 0 || tags[i - 1] == BioTag::O)) tags[i] = BioTag::B;
    return tags;
}

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t items = 0;
};

struct ParserMetrics {
    double exact_match_rate = 0.0;
    double operand_count_accuracy = 0.0;
    PrecisionRecall tokens;                     // over all items
    std::map<int, PrecisionRecall> by_operands; // rows 2..5 always present
    std::map<int, double> exact_by_operands;
    std::size_t items = 0;

    json to_json() const {
        json rows = json::array();
        for (const auto& [n, pr] : by_operands) {
            json row{{"operands", n},
                     {"precision", pr.precision},
                     {"recall", pr.recall},
                     {"f1", pr.f1},
                     {"items", pr.items}};
            auto it = exact_by_operands.find(n);
            row["exact_match_rate"] = it == exact_by_operands.end() ? 0.0 : it->second;
            rows.push_back(std::move(row));
        }
        return json{{"exact_match_rate", exact_match_rate},
                    {"operand_count_accuracy", operand_count_accuracy},
                    {"token_precision", tokens.precision},
                    {"token_recall", tokens.recall},
                    {"token_f1", tokens.f1},
                    {"items", items},
                    {"by_operands", std::move(rows)}};
    }
};

namespace detail {

struct TokenCounts {
    std::size_t agree = 0;
    std::size_t pred = 0;
    std::size_t gold = 0;

    PrecisionRecall finish(std::size_t n_items) const {
        PrecisionRecall pr;
        pr.items = n_items;
        pr.precision = pred == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(pred);
        pr.recall = gold == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(gold);
        pr.f1 = (pr.precision + pr.recall) == 0.0 ? 0.0 : 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall);
        return pr;
    }
};

} // namespace detail

inline ParserMetrics parser_metrics(const std::vector<ParseResult>& gold, const std::vector<ParseResult>& pred) {
    if (gold.size() != pred.size())
        throw arity_error("gold and predicted parses differ in length: " + std::to_string(gold.size()) + " vs " +
                          std::to_string(pred.size()));

    ParserMetrics m;
    m.items = gold.size();

    std::size_t exact = 0;
    std::size_t operands_right = 0;
    detail::TokenCounts all_tokens;
    std::map<int, detail::TokenCounts> counts_by_n;
    std::map<int, std::size_t> items_by_n;
    std::map<int, std::size_t> exact_by_n;
    for (int n = 2; n <= 5; ++n) {
        counts_by_n[n];
        items_by_n[n] = 0;
        exact_by_n[n] = 0;
    }

    for (std::size_t i = 0; i < gold.size(); ++i) {
        const ParseResult& g = gold[i];
        const ParseResult& p = pred[i];
        int n = static_cast<int>(g.components.size());

        bool same_components = g.components.size() == p.components.size();
        if (same_components)
            for (std::size_t k = 0; k < g.components.size(); ++k)
                if (g.components[k].text != p.components[k].text || g.components[k].negated != p.components[k].negated)
                    same_components = false;
        bool is_exact = same_components && g.formula == p.formula;
        if (is_exact) ++exact;
        if (g.components.size() == p.components.size()) ++operands_right;

        BioTags gt = to_bio(g.text, g.spans);
        BioTags pt = to_bio(g.text, p.spans);
        detail::TokenCounts tc;
        for (std::size_t k = 0; k < gt.size(); ++k) {
            bool gold_const = gt[k] != BioTag::O;
            bool pred_const = pt[k] != BioTag::O;
            if (gold_const) ++tc.gold;
            if (pred_const) ++tc.pred;
            if (gold_const && pred_const && gt[k] == pt[k]) ++tc.agree;
        }
        all_tokens.agree += tc.agree;
        all_tokens.pred += tc.pred;
        all_tokens.gold += tc.gold;
        counts_by_n[n].agree += tc.agree;
        counts_by_n[n].pred += tc.pred;
        counts_by_n[n].gold += tc.gold;
        ++items_by_n[n];
        if (is_exact) ++exact_by_n[n];
    }

    m.exact_match_rate = m.items == 0 ? 0.0 : static_cast<double>(exact) / static_cast<double>(m.items);
    m.operand_count_accuracy = m.items == 0 ? 0.0 : static_cast<double>(operands_right) / static_cast<double>(m.items);
    m.tokens = all_tokens.finish(m.items);
    for (const auto& [n, tc] : counts_by_n) {
        m.by_operands[n] = tc.finish(items_by_n[n]);
        m.exact_by_operands[n] =
            items_by_n[n] == 0 ? 0.0 : static_cast<double>(exact_by_n[n]) / static_cast<double>(items_by_n[n]);
    }
    return m;
}

// Build the gold parse for a generated surface question.
inline ParseResult gold_parse(const SurfaceQuestion& sq) {
    ParseResult g;
    g.text = sq.text;
    std::vector<detail::RealizedLiteral> literals;
    std::vector<std::string> ops;
    detail::flatten_literals(sq.formula, sq.formula.root(), literals, ops);
    for (std::size_t i = 0; i < literals.size(); ++i)
        g.components.push_back({sq.atom_texts[static_cast<std::size_t>(literals[i].atom)], literals[i].negated});
    g.spans = sq.spans;
    g.formula = sq.formula;
    return g;
}

inline json to_json(const ParseResult& p) {
    json comps = json::array();
    for (const ParsedComponent& c : p.components) comps.push_back(json{{"negated", c.negated}, {"text", c.text}});
    return json{{"components", std::move(comps)},
                {"confidence", p.confidence},
                {"formula", format_prefix(p.formula)},
                {"operand_count", p.components.size()},
                {"text", p.text}};
}

} // namespace vqlogic
