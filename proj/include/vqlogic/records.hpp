#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqlogic/errors.hpp"
#include "vqlogic/formula.hpp"

namespace vqlogic {

using json = nlohmann::json;

enum class QuestionSource { vqa, object, caption, antonym };

inline std::string source_name(QuestionSource s) {
    switch (s) {
    case QuestionSource::vqa: return "vqa";
    case QuestionSource::object: return "object";
    case QuestionSource::caption: return "caption";
    case QuestionSource::antonym: return "antonym";
    }
    return "vqa";
}

inline QuestionSource source_from_name(const std::string& s) {
    if (s == "vqa") return QuestionSource::vqa;
    if (s == "object") return QuestionSource::object;
    if (s == "caption") return QuestionSource::caption;
    if (s == "antonym") return QuestionSource::antonym;
    throw format_error("unknown question source '" + s + "'");
}

// A closed question: text plus its single unambiguous yes/no answer.
struct AtomicQuestion {
    std::int64_t question_id = 0;
    std::int64_t image_id = 0;
    std::string text;
    bool answer = false;
    QuestionSource source = QuestionSource::vqa;
};

inline std::string answer_string(bool yes) { return yes ? "yes" : "no"; }

inline bool answer_from_string(const std::string& s) {
    if (s == "yes") return true;
    if (s == "no") return false;
    throw format_error("answer must be \"yes\" or \"no\", got '" + s + "'");
}

// One dataset record: a realized composed question, its formula, the atoms
// it was built from, and the evaluation-derived answer.
struct ComposedSample {
    std::string sample_id;
    std::int64_t image_id = 0;
    std::string text;
    std::string formula_label; // prefix serialization, e.g. AND(Q1,NOT(Q2))
    std::vector<AtomicQuestion> atoms;
    bool answer = false;
    std::string category; // catalog label, e.g. "Q1 AND NOT Q2"
    int connective_count = 0;
    std::string split;
    std::string mirror_of; // sample_id of the unswapped twin, when mirrored

    Formula formula() const { return parse_label(formula_label).formula; }

    std::vector<bool> atom_answers() const {
        std::vector<bool> a;
        a.reserve(atoms.size());
        for (const AtomicQuestion& q : atoms) a.push_back(q.answer);
        return a;
    }
};

inline json to_json(const AtomicQuestion& q) {
    return json{{"answer", answer_string(q.answer)},
                {"image_id", q.image_id},
                {"question_id", q.question_id},
                {"source", source_name(q.source)},
                {"text", q.text}};
}

inline AtomicQuestion atomic_from_json(const json& j) {
    AtomicQuestion q;
    q.question_id = j.at("question_id").get<std::int64_t>();
    q.image_id = j.value("image_id", std::int64_t{0});
    q.text = j.at("text").get<std::string>();
    q.answer = answer_from_string(j.at("answer").get<std::string>());
    q.source = source_from_name(j.value("source", std::string("vqa")));
    return q;
}

inline json to_json(const ComposedSample& s) {
    json atoms = json::array();
    for (const AtomicQuestion& a : s.atoms) atoms.push_back(to_json(a));
    json j{{"answer", answer_string(s.answer)},
           {"atoms", std::move(atoms)},
           {"category", s.category},
           {"connective_count", s.connective_count},
           {"formula", s.formula_label},
           {"image_id", s.image_id},
           {"sample_id", s.sample_id},
           {"split", s.split},
           {"text", s.text}};
    if (!s.mirror_of.empty()) j["mirror_of"] = s.mirror_of;
    return j;
}

inline ComposedSample sample_from_json(const json& j) {
    ComposedSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.image_id = j.at("image_id").get<std::int64_t>();
    s.text = j.at("text").get<std::string>();
    s.formula_label = j.at("formula").get<std::string>();
    for (const json& a : j.at("atoms")) s.atoms.push_back(atomic_from_json(a));
    s.answer = answer_from_string(j.at("answer").get<std::string>());
    s.category = j.at("category").get<std::string>();
    s.connective_count = j.at("connective_count").get<int>();
    s.split = j.value("split", std::string());
    s.mirror_of = j.value("mirror_of", std::string());
    return s;
}

// nlohmann::json objects keep keys sorted, so dump() is byte-stable; one
// record per line.
inline void write_jsonl(const std::vector<ComposedSample>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    for (const ComposedSample& s : samples) out << to_json(s).dump() << '\n';
    if (!out) throw io_error("failed while writing '" + path + "'");
}

inline void for_each_jsonl_line(const std::string& path, const std::function<void(const json&, int)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw format_error(path + ":" + std::to_string(line_no) + ": malformed JSON record");
        fn(j, line_no);
    }
}

inline std::vector<ComposedSample> read_jsonl(const std::string& path) {
    std::vector<ComposedSample> out;
    for_each_jsonl_line(path, [&](const json& j, int line_no) {
        try {
            out.push_back(sample_from_json(j));
        } catch (const json::exception& e) {
            throw format_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    });
    return out;
}

} // namespace vqlogic
