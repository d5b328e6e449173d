#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "vqlogic/errors.hpp"
#include "vqlogic/rng.hpp"

namespace vqlogic {

// Which templating rule placed the negation marker.
enum class NegationRule { existential, verb, preposition, noun_phrase, fallback };

inline std::string negation_rule_name(NegationRule r) {
    switch (r) {
    case NegationRule::existential: return "existential";
    case NegationRule::verb: return "verb";
    case NegationRule::preposition: return "preposition";
    case NegationRule::noun_phrase: return "noun-phrase";
    case NegationRule::fallback: return "fallback";
    }
    return "fallback";
}

// A recorded, invertible negation: remove the marker token at
// insertion_token_index (and put back replaced_article when the existential
// rule swapped one out) to recover original_text.
struct NegationEdit {
    std::string original_text;
    std::string negated_text;
    std::string marker; // "no" or "not"
    int insertion_token_index = -1;
    NegationRule rule = NegationRule::fallback;
    std::string replaced_article; // non-empty only for existential article replacement
};

namespace text_detail {

inline std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

inline std::string normalize_spaces(const std::string& s) { return join(tokenize(s)); }

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Token with trailing punctuation stripped and lowercased, for lexicon
// lookups ("ties?" -> "ties").
inline std::string core(const std::string& token) {
    std::size_t end = token.size();
    while (end > 0) {
        char c = token[end - 1];
        if (c == '?' || c == '.' || c == ',' || c == '!' || c == ';' || c == ':') {
            --end;
        } else {
            break;
        }
    }
    return lower(token.substr(0, end));
}

template <std::size_t N>
bool in_list(const std::string& word, const std::array<const char*, N>& list) {
    for (const char* w : list)
        if (word == w) return true;
    return false;
}

inline constexpr std::array<const char*, 11> kAuxiliaries = {
    "is", "are", "was", "were", "do", "does", "did", "can", "could", "will", "would"};

inline constexpr std::array<const char*, 11> kPrepositions = {
    "in", "on", "near", "at", "by", "under", "over", "behind", "inside", "with", "of"};

inline constexpr std::array<const char*, 8> kSubjectPronouns = {
    "this", "that", "it", "he", "she", "they", "we", "you"};

inline bool is_auxiliary(const std::string& token) { return in_list(core(token), kAuxiliaries); }
inline bool is_preposition(const std::string& token) { return in_list(core(token), kPrepositions); }
inline bool is_subject_pronoun(const std::string& token) { return in_list(core(token), kSubjectPronouns); }

inline bool is_article(const std::string& token) {
    std::string c = core(token);
    return c == "a" || c == "an" || c == "the";
}

// Common nouns ending in -ing that must not be mistaken for participles.
inline constexpr std::array<const char*, 16> kIngNouns = {
    "thing",    "something", "anything", "everything", "nothing", "morning", "evening", "ceiling",
    "building", "painting",  "clothing", "lightning",  "wedding", "icing",   "awning",  "railing"};

inline bool is_participle(const std::string& token) {
    std::string c = core(token);
    if (c.size() < 5 || c.compare(c.size() - 3, 3, "ing") != 0) return false;
    return !in_list(c, kIngNouns);
}

// "it's", "that's" and friends hide an "is"; the fallback rule negates the
// innermost clause by inserting after the rightmost auxiliary.
inline bool has_is_contraction(const std::string& token) {
    std::string c = core(token);
    if (c.size() < 3 || c.compare(c.size() - 2, 2, "'s") != 0) return false;
    std::string base = c.substr(0, c.size() - 2);
    return base == "it" || base == "that" || base == "this" || base == "he" || base == "she" ||
           base == "there" || base == "what" || base == "who";
}

inline bool starts_with_vowel(const std::string& token) {
    std::string c = core(token);
    if (c.empty()) return false;
    char f = c[0];
    return f == 'a' || f == 'e' || f == 'i' || f == 'o' || f == 'u';
}

// Heuristic used when undoing an existential "no": bare nouns (mass words
// and plurals) never carried an article, singular count nouns carried a/an.
inline constexpr std::array<const char*, 30> kMassNouns = {
    "beer",   "water", "wine",  "milk",  "juice",  "coffee", "tea",     "food",    "fruit",  "snow",
    "ice",    "rain",  "grass", "sand",  "traffic", "smoke",  "fog",     "bread",   "cheese", "meat",
    "rice",   "pasta", "soup",  "cereal", "money",  "hair",   "luggage", "furniture", "graffiti", "wind"};

inline bool is_bare_noun(const std::string& token) {
    std::string c = core(token);
    if (c.empty()) return true;
    if (in_list(c, kMassNouns)) return true;
    return c.size() >= 3 && c.back() == 's' && c[c.size() - 2] != 's';
}

} // namespace text_detail

namespace detail {

struct NegationCandidate {
    NegationRule rule;
    int index; // token index where "not" is inserted
};

inline NegationEdit finish_edit(std::vector<std::string> tokens, const std::string& original, NegationRule rule,
                                int index, const std::string& marker, const std::string& replaced) {
    if (replaced.empty()) {
        tokens.insert(tokens.begin() + index, marker);
    } else {
        tokens[static_cast<std::size_t>(index)] = marker;
    }
    NegationEdit e;
    e.original_text = original;
    e.negated_text = text_detail::join(tokens);
    e.marker = marker;
    e.insertion_token_index = index;
    e.rule = rule;
    e.replaced_article = replaced;
    return e;
}

inline NegationEdit negate_tokens(const std::vector<std::string>& tokens, const std::string& original, Rng& rng) {
    using namespace text_detail;

    // Existential: "is/are there ..." takes "no" on the noun phrase, either
    // replacing an indefinite article or slotting in directly.
    std::string head = core(tokens[0]);
    if ((head == "is" || head == "are" || head == "was" || head == "were") && tokens.size() >= 3 &&
        core(tokens[1]) == "there") {
        std::string third = core(tokens[2]);
        if (third == "a" || third == "an")
            return finish_edit(tokens, original, NegationRule::existential, 2, "no", tokens[2]);
        if (third == "the")
            return finish_edit(tokens, original, NegationRule::existential, 2, "not", "");
        return finish_edit(tokens, original, NegationRule::existential, 2, "no", "");
    }

    // Otherwise gather every legal "not" slot and let the seed choose.
    std::vector<NegationCandidate> candidates;
    if (tokens.size() >= 3 && is_subject_pronoun(tokens[1]) && is_article(tokens[2]))
        candidates.push_back({NegationRule::noun_phrase, 2});
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (is_preposition(tokens[i]))
            candidates.push_back({NegationRule::preposition, static_cast<int>(i)});
        else if (is_participle(tokens[i]))
            candidates.push_back({NegationRule::verb, static_cast<int>(i)});
    }
    if (!candidates.empty()) {
        const NegationCandidate& pick =
            candidates.size() == 1 ? candidates[0] : candidates[rng.next_index(candidates.size())];
        return finish_edit(tokens, original, pick.rule, pick.index, "not", "");
    }

    // Fallback: after the rightmost auxiliary (contractions count).
    int aux = -1;
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (is_auxiliary(tokens[i]) || has_is_contraction(tokens[i])) aux = static_cast<int>(i);
    int index;
    if (aux >= 0 && aux + 1 < static_cast<int>(tokens.size()))
        index = aux + 1;
    else
        index = tokens.size() > 1 ? 1 : 0;
    return finish_edit(tokens, original, NegationRule::fallback, index, "not", "");
}

} // namespace detail

// Negate a closed question by placing a "no"/"not" marker per the template
// rules. When several insertion points are legal the seed picks uniformly.
// The returned edit is exactly invertible via strip_negation.
inline NegationEdit negate_question(const std::string& question, Rng& rng) {
    std::string normalized = text_detail::normalize_spaces(question);
    if (normalized.empty()) throw input_error("cannot negate empty question text");
    std::vector<std::string> tokens = text_detail::tokenize(normalized);
    return detail::negate_tokens(tokens, normalized, rng);
}

inline NegationEdit negate_question(const std::string& question, std::uint64_t seed) {
    Rng rng(seed);
    return negate_question(question, rng);
}

// Undo a recorded negation. Throws corruption_error when the edit no longer
// matches its text.
inline std::string strip_negation(const NegationEdit& e) {
    std::vector<std::string> tokens = text_detail::tokenize(e.negated_text);
    int idx = e.insertion_token_index;
    if (idx < 0 || idx >= static_cast<int>(tokens.size()) || tokens[static_cast<std::size_t>(idx)] != e.marker)
        throw corruption_error("negation marker '" + e.marker + "' not found at token " + std::to_string(idx));
    tokens.erase(tokens.begin() + idx);
    if (!e.replaced_article.empty()) tokens.insert(tokens.begin() + idx, e.replaced_article);
    std::string restored = text_detail::join(tokens);
    if (restored != e.original_text)
        throw corruption_error("stripping the negation did not restore the original question");
    return restored;
}

} // namespace vqlogic
