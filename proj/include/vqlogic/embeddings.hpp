#pragma once

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "vqlogic/errors.hpp"
#include "vqlogic/negation.hpp"

namespace vqlogic {

// Word-vector table loaded from the plain "token v1 ... vd" text format.
// Lookups are case-folded; all rows must share one dimension.
class EmbeddingTable {
public:
    EmbeddingTable() = default;

    int dimension() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<std::string>& warnings() const { return warnings_; }

    const std::vector<double>* find(const std::string& token) const {
        auto it = vectors_.find(text_detail::lower(token));
        return it == vectors_.end() ? nullptr : &it->second;
    }

    void insert(const std::string& token, std::vector<double> v) {
        if (dim_ == 0) dim_ = static_cast<int>(v.size());
        if (static_cast<int>(v.size()) != dim_)
            throw format_error("embedding for '" + token + "' has dimension " + std::to_string(v.size()) +
                               ", expected " + std::to_string(dim_));
        std::string key = text_detail::lower(token);
        auto [it, fresh] = vectors_.insert_or_assign(key, std::move(v));
        (void)it;
        if (!fresh) warnings_.push_back("duplicate token '" + key + "': keeping the last occurrence");
    }

private:
    int dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
    std::vector<std::string> warnings_;
};

inline EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open embeddings file '" + path + "'");
    EmbeddingTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        row >> token;
        std::vector<double> v;
        double x;
        while (row >> x) v.push_back(x);
        if (!row.eof())
            throw format_error(path + ":" + std::to_string(line_no) + ": non-numeric embedding value");
        if (token.empty() || v.empty())
            throw format_error(path + ":" + std::to_string(line_no) + ": expected 'token v1 ... vd'");
        try {
            table.insert(token, std::move(v));
        } catch (const format_error& e) {
            throw format_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

// Class vector = mean of the member word vectors; hyphens split like
// spaces, so "wine-glass" and "wine glass" agree.
inline std::vector<double> class_vector(const std::string& class_name, const EmbeddingTable& table) {
    std::string normalized = class_name;
    for (char& c : normalized)
        if (c == '-' || c == '_') c = ' ';
    std::vector<std::string> words = text_detail::tokenize(normalized);
    std::vector<double> sum;
    int found = 0;
    for (const std::string& w : words) {
        const std::vector<double>* v = table.find(w);
        if (!v) continue;
        if (sum.empty()) sum.assign(v->size(), 0.0);
        for (std::size_t i = 0; i < v->size(); ++i) sum[i] += (*v)[i];
        ++found;
    }
    if (found == 0)
        throw unusable_class_error("no embedding found for any word of class '" + class_name + "'");
    for (double& x : sum) x /= found;
    return sum;
}

// Object-class list with precomputed vectors; classes whose words are all
// out of vocabulary are kept but flagged unusable.
class ClassVocabulary {
public:
    struct Entry {
        std::string name;
        std::vector<double> vec;
        bool usable = false;
    };

    ClassVocabulary(const std::vector<std::string>& class_names, const EmbeddingTable& table) {
        for (const std::string& name : class_names) {
            Entry e;
            e.name = name;
            try {
                e.vec = class_vector(name, table);
                e.usable = true;
            } catch (const unusable_class_error&) {
                e.usable = false;
            }
            entries_.push_back(std::move(e));
        }
    }

    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

namespace detail {

inline double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace detail

// The adversarial antonym for an image: over all (present, absent) class
// pairs, the absent class at minimum l2 distance from a present one. Ties
// break to the lexicographically smaller absent name, so the result does not
// depend on set iteration order.
inline std::string adversarial_antonym(const std::set<std::string>& present_objects, const ClassVocabulary& vocab,
                                       const EmbeddingTable& table) {
    (void)table; // vectors are precomputed in the vocabulary
    std::vector<const ClassVocabulary::Entry*> present;
    std::vector<const ClassVocabulary::Entry*> absent;
    for (const ClassVocabulary::Entry& e : vocab.entries()) {
        if (!e.usable) continue;
        if (present_objects.count(e.name))
            present.push_back(&e);
        else
            absent.push_back(&e);
    }
    if (present.empty()) throw selection_error("no usable present object class");
    if (absent.empty()) throw selection_error("no usable absent class to choose an antonym from");

    const ClassVocabulary::Entry* best = nullptr;
    double best_dist = 0.0;
    for (const ClassVocabulary::Entry* a : absent) {
        for (const ClassVocabulary::Entry* p : present) {
            double d = detail::l2_distance(p->vec, a->vec);
            if (!best || d < best_dist || (d == best_dist && a->name < best->name)) {
                best = a;
                best_dist = d;
            }
        }
    }
    return best->name;
}

// The 80 COCO object class names, the default vocabulary for antonym
// selection.
inline const std::vector<std::string>& coco_class_names() {
    static const std::vector<std::string> names = {
        "person",        "bicycle",      "car",           "motorcycle",    "airplane",     "bus",
        "train",         "truck",        "boat",          "traffic light", "fire hydrant", "stop sign",
        "parking meter", "bench",        "bird",          "cat",           "dog",          "horse",
        "sheep",         "cow",          "elephant",      "bear",          "zebra",        "giraffe",
        "backpack",      "umbrella",     "handbag",       "tie",           "suitcase",     "frisbee",
        "skis",          "snowboard",    "sports ball",   "kite",          "baseball bat", "baseball glove",
        "skateboard",    "surfboard",    "tennis racket", "bottle",        "wine glass",   "cup",
        "fork",          "knife",        "spoon",         "bowl",          "banana",       "apple",
        "sandwich",      "orange",       "broccoli",      "carrot",        "hot dog",      "pizza",
        "donut",         "cake",         "chair",         "couch",         "potted plant", "bed",
        "dining table",  "toilet",       "tv",            "laptop",        "mouse",        "remote",
        "keyboard",      "cell phone",   "microwave",     "oven",          "toaster",      "sink",
        "refrigerator",  "book",         "clock",         "vase",          "scissors",     "teddy bear",
        "hair drier",    "toothbrush"};
    return names;
}

} // namespace vqlogic
