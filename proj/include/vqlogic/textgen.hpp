#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vqlogic/errors.hpp"
#include "vqlogic/formula.hpp"
#include "vqlogic/negation.hpp"
#include "vqlogic/rng.hpp"

namespace vqlogic {

namespace text_detail {

// Drop a terminal "?" (attached or free-standing) plus surrounding blanks.
inline std::string strip_question_mark(std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (!s.empty() && s.back() == '?') s.pop_back();
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

inline std::string lowercase_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

inline std::string uppercase_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

} // namespace text_detail

// "bottle" -> "Is there a bottle?", "orange" -> "Is there an orange?".
// Multi-word class names pass through verbatim.
inline std::string object_to_question(const std::string& object_name) {
    std::string name = text_detail::normalize_spaces(object_name);
    if (name.empty()) throw input_error("object class name is empty");
    const char* article = text_detail::starts_with_vowel(name) ? "an" : "a";
    return "Is there " + std::string(article) + " " + name + "?";
}

// "A man bending over." -> "Does this seem like a man bending over?".
// Only the terminal period is stripped; internal ones stay.
inline std::string caption_to_question(const std::string& caption) {
    std::string body = text_detail::normalize_spaces(caption);
    if (body.empty()) throw input_error("caption text is empty");
    if (body.back() == '.') body.pop_back();
    while (!body.empty() && body.back() == ' ') body.pop_back();
    if (body.empty()) throw input_error("caption text is empty");
    return "Does this seem like " + text_detail::lowercase_first(body) + "?";
}

struct SurfaceJoin {
    std::size_t offset = 0; // byte offset of the connective word in text
    std::string word;       // "and" or "or"
};

// A realized composed question plus everything needed to invert it: the
// base component texts, the per-atom negation edits, and where the
// connective words were spliced in.
struct SurfaceQuestion {
    std::string text;
    Formula formula = Formula::atom(0);
    std::vector<std::string> atom_texts;
    std::vector<std::optional<NegationEdit>> edits; // indexed by atom
    std::vector<std::string> spans;                 // component surfaces as they appear in text
    std::vector<SurfaceJoin> joins;
};

namespace detail {

struct RealizedLiteral {
    int atom = 0;
    bool negated = false;
};

inline void flatten_literals(const Formula& f, int at, std::vector<RealizedLiteral>& literals,
                             std::vector<std::string>& ops) {
    const Formula::Node& n = f.node(at);
    switch (n.kind) {
    case NodeKind::atom:
        literals.push_back({n.a, false});
        return;
    case NodeKind::negation:
        literals.push_back({f.node(n.a).a, true});
        return;
    case NodeKind::conjunction:
    case NodeKind::disjunction:
        flatten_literals(f, n.a, literals, ops);
        ops.push_back(n.kind == NodeKind::conjunction ? "and" : "or");
        flatten_literals(f, n.b, literals, ops);
        return;
    }
}

} // namespace detail

// Render a formula over base question texts as one surface question:
// negated atoms go through the negation templates, components join with
// "and"/"or" in reading order, later components are lowercased, and a single
// "?" terminates the result.
inline SurfaceQuestion realize(const Formula& f, const std::vector<std::string>& atoms, Rng& rng) {
    if (!f.is_nnf()) throw shape_error("realize requires a formula in negation normal form");
    if (static_cast<int>(atoms.size()) != f.atom_count())
        throw arity_error("got " + std::to_string(atoms.size()) + " question texts for a formula with " +
                          std::to_string(f.atom_count()) + " atoms");

    SurfaceQuestion out;
    out.formula = f;
    out.edits.assign(atoms.size(), std::nullopt);
    for (const std::string& a : atoms) out.atom_texts.push_back(text_detail::normalize_spaces(a));

    std::vector<detail::RealizedLiteral> literals;
    std::vector<std::string> ops;
    detail::flatten_literals(f, f.root(), literals, ops);

    for (std::size_t i = 0; i < literals.size(); ++i) {
        const detail::RealizedLiteral& lit = literals[i];
        std::string component = out.atom_texts[static_cast<std::size_t>(lit.atom)];
        if (lit.negated) {
            NegationEdit edit = negate_question(component, rng);
            component = edit.negated_text;
            out.edits[static_cast<std::size_t>(lit.atom)] = std::move(edit);
        }
        component = text_detail::strip_question_mark(component);
        if (i > 0) component = text_detail::lowercase_first(component);
        out.spans.push_back(component);
        if (i > 0) {
            out.text.push_back(' ');
            out.joins.push_back({out.text.size(), ops[i - 1]});
            out.text += ops[i - 1];
            out.text.push_back(' ');
        }
        out.text += component;
    }
    out.text.push_back('?');
    return out;
}

inline SurfaceQuestion realize(const Formula& f, const std::vector<std::string>& atoms, std::uint64_t seed) {
    Rng rng(seed);
    return realize(f, atoms, rng);
}

} // namespace vqlogic
