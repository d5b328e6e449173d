#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqlogic/errors.hpp"
#include "vqlogic/negation.hpp"
#include "vqlogic/records.hpp"

namespace vqlogic {

namespace detail {

inline json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw format_error("'" + path + "' is not valid JSON");
    return j;
}

} // namespace detail

// A question joined with its annotation, before closed-question filtering.
struct VqaRecord {
    std::int64_t question_id = 0;
    std::int64_t image_id = 0;
    std::string text;
    std::vector<std::string> answers; // the 10 annotator answers, verbatim
    std::string answer_type;          // "yes/no", "number", "other"
};

// Join a VQA-v2 questions file with its annotations file on question_id.
inline std::vector<VqaRecord> load_vqa(const std::string& questions_path, const std::string& annotations_path) {
    json qfile = detail::load_json_file(questions_path);
    json afile = detail::load_json_file(annotations_path);
    if (!qfile.contains("questions")) throw ingest_error("'" + questions_path + "' has no \"questions\" array");
    if (!afile.contains("annotations")) throw ingest_error("'" + annotations_path + "' has no \"annotations\" array");

    std::map<std::int64_t, VqaRecord> by_id;
    for (const json& q : qfile.at("questions")) {
        VqaRecord r;
        r.question_id = q.at("question_id").get<std::int64_t>();
        r.image_id = q.at("image_id").get<std::int64_t>();
        r.text = q.at("question").get<std::string>();
        by_id[r.question_id] = std::move(r);
    }

    std::set<std::int64_t> joined;
    std::vector<std::int64_t> orphans;
    for (const json& a : afile.at("annotations")) {
        std::int64_t qid = a.at("question_id").get<std::int64_t>();
        auto it = by_id.find(qid);
        if (it == by_id.end()) {
            orphans.push_back(qid);
            continue;
        }
        it->second.answer_type = a.value("answer_type", std::string());
        for (const json& ans : a.at("answers")) it->second.answers.push_back(ans.at("answer").get<std::string>());
        joined.insert(qid);
    }

    std::vector<std::int64_t> unanswered;
    for (const auto& [qid, r] : by_id)
        if (!joined.count(qid)) unanswered.push_back(qid);

    if (!orphans.empty() || !unanswered.empty()) {
        std::string msg = "question/annotation join failed;";
        if (!orphans.empty()) {
            msg += " annotations without questions:";
            for (std::int64_t id : orphans) msg += " " + std::to_string(id);
        }
        if (!unanswered.empty()) {
            msg += " questions without annotations:";
            for (std::int64_t id : unanswered) msg += " " + std::to_string(id);
        }
        throw ingest_error(msg);
    }

    std::vector<VqaRecord> out;
    out.reserve(by_id.size());
    for (auto& [qid, r] : by_id) out.push_back(std::move(r));
    return out;
}

struct ClosedFilterResult {
    std::vector<AtomicQuestion> kept;
    int dropped = 0;

    double retention() const {
        std::size_t total = kept.size() + static_cast<std::size_t>(dropped);
        return total == 0 ? 0.0 : static_cast<double>(kept.size()) / static_cast<double>(total);
    }
};

// Keep only closed questions: answer_type yes/no with every annotator
// giving the same "yes" or "no". Everything else is dropped and counted.
inline ClosedFilterResult filter_closed(const std::vector<VqaRecord>& records) {
    ClosedFilterResult result;
    for (const VqaRecord& r : records) {
        if (r.answer_type != "yes/no" || r.answers.empty()) {
            ++result.dropped;
            continue;
        }
        std::string first = text_detail::lower(r.answers.front());
        bool unanimous = (first == "yes" || first == "no");
        for (const std::string& a : r.answers)
            if (text_detail::lower(a) != first) unanimous = false;
        if (!unanimous) {
            ++result.dropped;
            continue;
        }
        AtomicQuestion q;
        q.question_id = r.question_id;
        q.image_id = r.image_id;
        q.text = text_detail::normalize_spaces(r.text);
        if (q.text.empty() || q.text.back() != '?') q.text += '?';
        q.answer = (first == "yes");
        q.source = QuestionSource::vqa;
        result.kept.push_back(std::move(q));
    }
    return result;
}

struct CocoImageInfo {
    std::set<std::string> present_classes;
    std::vector<std::string> captions;
};

// Per-image object class names and captions from COCO instance and caption
// annotation files.
inline std::map<std::int64_t, CocoImageInfo> load_coco(const std::string& instances_path,
                                                       const std::string& captions_path) {
    json inst = detail::load_json_file(instances_path);
    json caps = detail::load_json_file(captions_path);

    std::map<std::int64_t, std::string> category_names;
    if (!inst.contains("categories")) throw ingest_error("'" + instances_path + "' has no \"categories\" array");
    for (const json& c : inst.at("categories"))
        category_names[c.at("id").get<std::int64_t>()] = c.at("name").get<std::string>();

    std::map<std::int64_t, CocoImageInfo> out;
    for (const json& a : inst.at("annotations")) {
        std::int64_t image_id = a.at("image_id").get<std::int64_t>();
        std::int64_t cat = a.at("category_id").get<std::int64_t>();
        auto it = category_names.find(cat);
        if (it == category_names.end())
            throw ingest_error("annotation for image " + std::to_string(image_id) +
                               " references unknown category_id " + std::to_string(cat));
        out[image_id].present_classes.insert(it->second);
    }
    for (const json& a : caps.at("annotations"))
        out[a.at("image_id").get<std::int64_t>()].captions.push_back(a.at("caption").get<std::string>());
    return out;
}

} // namespace vqlogic
