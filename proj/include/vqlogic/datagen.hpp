#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "vqlogic/catalog.hpp"
#include "vqlogic/embeddings.hpp"
#include "vqlogic/errors.hpp"
#include "vqlogic/loaders.hpp"
#include "vqlogic/records.hpp"
#include "vqlogic/rng.hpp"
#include "vqlogic/textgen.hpp"

namespace vqlogic {

struct GenConfig {
    std::uint64_t seed = 0;
    std::string split = "train";
    int jobs = 1;

    int max_pairs_per_image = 10;  // 0 disables the cap
    bool dedup_negations = true;   // emit each question's negation once per image
    bool emit_mirrored = false;    // also emit order-swapped twins of 2-atom samples
    bool include_plain = false;    // supplement: carry the plain Q / NOT Q entries too
    bool single_connective_only = false;

    int operand_count = 3;         // inductive
    int inductive_per_image = 2;
    std::uint64_t target_size = 0; // 0 = unlimited; applied after the final sort

    // Keep-probability per catalog label; absent labels default to 1.
    std::map<std::string, double> category_weights;

    void validate() const {
        if (max_pairs_per_image < 0) throw config_error("max pairs per image must be >= 0");
        if (jobs < 1) throw config_error("jobs must be >= 1");
        if (operand_count < 2) throw config_error("inductive operand count must be >= 2");
        if (inductive_per_image < 1) throw config_error("inductive samples per image must be >= 1");
        for (const auto& [label, w] : category_weights)
            if (w < 0.0) throw config_error("sampling weight for '" + label + "' must be non-negative");
    }
};

struct GenOutput {
    std::vector<ComposedSample> samples;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string pad_id(std::int64_t v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*lld", width, static_cast<long long>(v));
    return buf;
}

inline std::map<std::int64_t, std::vector<AtomicQuestion>> group_by_image(std::vector<AtomicQuestion> atoms) {
    std::map<std::int64_t, std::vector<AtomicQuestion>> by_image;
    for (AtomicQuestion& a : atoms) by_image[a.image_id].push_back(std::move(a));
    for (auto& [id, qs] : by_image)
        std::sort(qs.begin(), qs.end(),
                  [](const AtomicQuestion& x, const AtomicQuestion& y) { return x.question_id < y.question_id; });
    return by_image;
}

inline bool entry_enabled(const GenConfig& cfg, const FormulaCatalogEntry& entry, Rng& rng) {
    if (cfg.single_connective_only && entry.connective_count > 1) return false;
    auto it = cfg.category_weights.find(entry.label);
    double w = it == cfg.category_weights.end() ? 1.0 : std::min(it->second, 1.0);
    if (w >= 1.0) return true;
    return rng.next_unit() < w;
}

inline ComposedSample make_sample(const GenConfig& cfg, std::string sample_id, std::int64_t image_id,
                                  const Formula& formula, const std::vector<AtomicQuestion>& atoms,
                                  const std::string& category, std::uint64_t seed) {
    std::vector<std::string> texts;
    texts.reserve(atoms.size());
    for (const AtomicQuestion& a : atoms) texts.push_back(a.text);
    SurfaceQuestion surface = realize(formula, texts, seed);

    ComposedSample s;
    s.sample_id = std::move(sample_id);
    s.image_id = image_id;
    s.text = surface.text;
    s.formula_label = format_prefix(formula);
    s.atoms = atoms;
    s.answer = eval(formula, [&] {
        std::vector<bool> v;
        for (const AtomicQuestion& a : atoms) v.push_back(a.answer);
        return v;
    }());
    s.category = category;
    s.connective_count = formula.connective_count();
    s.split = cfg.split;
    return s;
}

struct FlatLiteral {
    int atom;
    bool negated;
};

inline std::vector<FlatLiteral> two_atom_literals(const Formula& f) {
    std::vector<FlatLiteral> lits;
    const Formula::Node& root = f.node(f.root());
    for (int side : {root.a, root.b}) {
        const Formula::Node& n = f.node(side);
        if (n.kind == NodeKind::atom)
            lits.push_back({n.a, false});
        else
            lits.push_back({f.node(n.a).a, true});
    }
    return lits;
}

// Order-swapped twin of a two-atom sample: literals trade places, atoms are
// renumbered by their new surface order.
inline ComposedSample mirror_sample(const GenConfig& cfg, const ComposedSample& base, const Formula& formula,
                                    const std::vector<AtomicQuestion>& atoms, std::uint64_t seed) {
    std::vector<FlatLiteral> lits = two_atom_literals(formula);
    const Formula::Node& root = formula.node(formula.root());

    auto literal = [](int index, bool negated) {
        Formula a = Formula::atom(index);
        return negated ? !a : a;
    };
    Formula first = literal(0, lits[1].negated);
    Formula second = literal(1, lits[0].negated);
    Formula mirrored = root.kind == NodeKind::conjunction ? (first & second) : (first | second);

    std::vector<AtomicQuestion> swapped = {atoms[static_cast<std::size_t>(lits[1].atom)],
                                           atoms[static_cast<std::size_t>(lits[0].atom)]};
    ComposedSample m = make_sample(cfg, base.sample_id + "_m", base.image_id, mirrored, swapped,
                                   format_infix(mirrored), seed);
    m.mirror_of = base.sample_id;
    return m;
}

inline void compose_for_image(const GenConfig& cfg, std::int64_t image_id, const std::vector<AtomicQuestion>& qs,
                              GenOutput& out) {
    const std::vector<FormulaCatalogEntry>& catalog = compose_catalog();
    std::set<std::int64_t> negated_once;
    std::set<std::int64_t> paired;

    auto emit_negation = [&](const AtomicQuestion& q, std::size_t entry_idx, const std::string& sample_id) {
        const FormulaCatalogEntry& entry = catalog[entry_idx];
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(image_id), static_cast<std::uint64_t>(q.question_id),
                         entry_idx));
        if (!entry_enabled(cfg, entry, rng)) return;
        out.samples.push_back(make_sample(cfg, sample_id, image_id, entry.formula, {q}, entry.label, rng.next_u64()));
    };

    int pair_budget = cfg.max_pairs_per_image;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = i + 1; j < qs.size(); ++j) {
            if (cfg.max_pairs_per_image > 0 && pair_budget == 0) break;
            if (cfg.max_pairs_per_image > 0) --pair_budget;
            const AtomicQuestion& a = qs[i];
            const AtomicQuestion& b = qs[j];
            paired.insert(a.question_id);
            paired.insert(b.question_id);

            for (std::size_t e = 0; e < catalog.size(); ++e) {
                const FormulaCatalogEntry& entry = catalog[e];
                if (entry.operands.size() == 1) {
                    const AtomicQuestion& q = entry.operands[0] == "Q1" ? a : b;
                    if (cfg.dedup_negations) {
                        if (!negated_once.insert(q.question_id).second) continue;
                        emit_negation(q, e, "c" + pad_id(image_id, 8) + "_q" + pad_id(q.question_id, 12) + "_neg");
                    } else {
                        emit_negation(q, e,
                                      "c" + pad_id(image_id, 8) + "_q" + pad_id(a.question_id, 12) + "_q" +
                                          pad_id(b.question_id, 12) + "_e" + pad_id(static_cast<std::int64_t>(e), 2));
                    }
                    continue;
                }
                Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(image_id),
                                 static_cast<std::uint64_t>(a.question_id), static_cast<std::uint64_t>(b.question_id),
                                 e));
                if (!entry_enabled(cfg, entry, rng)) continue;
                std::string sample_id = "c" + pad_id(image_id, 8) + "_q" + pad_id(a.question_id, 12) + "_q" +
                                        pad_id(b.question_id, 12) + "_e" + pad_id(static_cast<std::int64_t>(e), 2);
                ComposedSample s = make_sample(cfg, sample_id, image_id, entry.formula, {a, b}, entry.label,
                                               rng.next_u64());
                if (cfg.emit_mirrored)
                    out.samples.push_back(mirror_sample(cfg, s, entry.formula, {a, b}, rng.next_u64()));
                out.samples.push_back(std::move(s));
            }
        }
    }

    // Questions that never joined a pair still contribute their negation.
    for (const AtomicQuestion& q : qs) {
        if (paired.count(q.question_id)) continue;
        if (cfg.dedup_negations && !negated_once.insert(q.question_id).second) continue;
        emit_negation(q, 0, "c" + pad_id(image_id, 8) + "_q" + pad_id(q.question_id, 12) + "_neg");
    }
}

inline std::int64_t synthetic_id(std::int64_t image_id, int kind) { return -(image_id * 10 + kind); }

inline void supplement_for_image(const GenConfig& cfg, std::int64_t image_id, const std::vector<AtomicQuestion>& qs,
                                 const CocoImageInfo* coco, const ClassVocabulary* vocab, GenOutput& out) {
    if (!coco) {
        out.warnings.push_back("image " + std::to_string(image_id) + " missing from COCO data; skipped");
        return;
    }

    std::optional<AtomicQuestion> object_q;
    if (!coco->present_classes.empty()) {
        object_q = AtomicQuestion{synthetic_id(image_id, 1), image_id,
                                  object_to_question(*coco->present_classes.begin()), true, QuestionSource::object};
    } else {
        out.warnings.push_back("image " + std::to_string(image_id) + " has no object annotations");
    }

    std::optional<AtomicQuestion> caption_q;
    if (!coco->captions.empty()) {
        const std::string& first = *std::min_element(coco->captions.begin(), coco->captions.end());
        caption_q = AtomicQuestion{synthetic_id(image_id, 2), image_id, caption_to_question(first), true,
                                   QuestionSource::caption};
    } else {
        out.warnings.push_back("image " + std::to_string(image_id) + " has no captions");
    }

    std::optional<AtomicQuestion> antonym_q;
    if (vocab && !coco->present_classes.empty()) {
        try {
            std::string cls = adversarial_antonym(coco->present_classes, *vocab, EmbeddingTable{});
            antonym_q = AtomicQuestion{synthetic_id(image_id, 3), image_id, object_to_question(cls), false,
                                       QuestionSource::antonym};
        } catch (const selection_error& e) {
            out.warnings.push_back("image " + std::to_string(image_id) + ": " + e.what() +
                                   "; antonym entries skipped");
        }
    }

    const std::vector<FormulaCatalogEntry>& catalog = supplement_catalog();
    for (const AtomicQuestion& q : qs) {
        for (std::size_t e = 0; e < catalog.size(); ++e) {
            const FormulaCatalogEntry& entry = catalog[e];
            if (!entry.supplemental && !cfg.include_plain) continue;

            std::vector<AtomicQuestion> atoms;
            bool available = true;
            for (const std::string& op : entry.operands) {
                if (op == "Q") {
                    atoms.push_back(q);
                } else if (op == "B") {
                    if (!object_q) available = false;
                    else atoms.push_back(*object_q);
                } else if (op == "C") {
                    if (!caption_q) available = false;
                    else atoms.push_back(*caption_q);
                } else if (op == "anto(B)") {
                    if (!antonym_q) available = false;
                    else atoms.push_back(*antonym_q);
                }
            }
            if (!available) continue;

            Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(image_id), static_cast<std::uint64_t>(q.question_id),
                             e, 7));
            if (!entry_enabled(cfg, entry, rng)) continue;
            std::string sample_id = "s" + pad_id(image_id, 8) + "_q" + pad_id(q.question_id, 12) + "_e" +
                                    pad_id(static_cast<std::int64_t>(e), 2);
            ComposedSample s = make_sample(cfg, sample_id, image_id, entry.formula, atoms, entry.label, rng.next_u64());
            if (cfg.emit_mirrored && atoms.size() == 2)
                out.samples.push_back(mirror_sample(cfg, s, entry.formula, atoms, rng.next_u64()));
            out.samples.push_back(std::move(s));
        }
    }
}

inline void inductive_for_image(const GenConfig& cfg, std::int64_t image_id, const std::vector<AtomicQuestion>& qs,
                                GenOutput& out) {
    int n = cfg.operand_count;
    if (static_cast<int>(qs.size()) < n) return;

    for (int k = 0; k < cfg.inductive_per_image; ++k) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(image_id), static_cast<std::uint64_t>(k), 13));
        std::vector<std::size_t> order(qs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);

        std::vector<AtomicQuestion> atoms;
        for (int i = 0; i < n; ++i) atoms.push_back(qs[order[static_cast<std::size_t>(i)]]);

        auto literal = [&](int index) {
            Formula a = Formula::atom(index);
            return rng.next_bool() ? !a : a;
        };
        Formula f = literal(0);
        for (int i = 1; i < n; ++i) {
            Formula lit = literal(i);
            f = rng.next_bool() ? (f & lit) : (f | lit);
        }
        if (cfg.single_connective_only && f.connective_count() > 1) continue;

        std::string sample_id = "i" + pad_id(image_id, 8) + "_" + pad_id(k, 4);
        out.samples.push_back(make_sample(cfg, sample_id, image_id, f, atoms, format_infix(f), rng.next_u64()));
    }
}

// Fan a per-image generator out over cfg.jobs workers, then merge in image
// order and sort by sample_id so the byte output is schedule-independent.
template <typename Payload, typename Fn>
GenOutput run_per_image(const GenConfig& cfg, const std::map<std::int64_t, Payload>& images, Fn per_image) {
    std::vector<const std::pair<const std::int64_t, Payload>*> items;
    items.reserve(images.size());
    for (const auto& kv : images) items.push_back(&kv);

    int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(items.size())));
    std::vector<GenOutput> partial(static_cast<std::size_t>(std::max(jobs, 1)));

    auto worker = [&](int w) {
        for (std::size_t i = static_cast<std::size_t>(w); i < items.size(); i += static_cast<std::size_t>(jobs))
            per_image(items[i]->first, items[i]->second, partial[static_cast<std::size_t>(w)]);
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
        for (std::thread& t : threads) t.join();
    }

    GenOutput merged;
    for (GenOutput& p : partial) {
        std::move(p.samples.begin(), p.samples.end(), std::back_inserter(merged.samples));
        std::move(p.warnings.begin(), p.warnings.end(), std::back_inserter(merged.warnings));
    }
    std::sort(merged.samples.begin(), merged.samples.end(),
              [](const ComposedSample& a, const ComposedSample& b) { return a.sample_id < b.sample_id; });
    std::sort(merged.warnings.begin(), merged.warnings.end());
    if (cfg.target_size > 0 && merged.samples.size() > cfg.target_size)
        merged.samples.resize(cfg.target_size);
    return merged;
}

} // namespace detail

// VQA-Compose style generation: per image, each question pair instantiates
// the 10-entry catalog; lone questions still contribute their negation.
inline GenOutput gen_compose(const std::vector<AtomicQuestion>& atoms, const GenConfig& cfg) {
    cfg.validate();
    auto by_image = detail::group_by_image(atoms);
    return detail::run_per_image(cfg, by_image,
                                 [&cfg](std::int64_t image_id, const std::vector<AtomicQuestion>& qs, GenOutput& out) {
                                     detail::compose_for_image(cfg, image_id, qs, out);
                                 });
}

// VQA-Supplement style generation: per seed question, the supplement catalog
// over the image's object question, caption question, and adversarial
// antonym question.
inline GenOutput gen_supplement(const std::vector<AtomicQuestion>& atoms,
                                const std::map<std::int64_t, CocoImageInfo>& coco, const ClassVocabulary* vocab,
                                const GenConfig& cfg) {
    cfg.validate();
    auto by_image = detail::group_by_image(atoms);
    return detail::run_per_image(
        cfg, by_image, [&](std::int64_t image_id, const std::vector<AtomicQuestion>& qs, GenOutput& out) {
            auto it = coco.find(image_id);
            detail::supplement_for_image(cfg, image_id, qs, it == coco.end() ? nullptr : &it->second, vocab, out);
        });
}

// Random left-folded compositions of cfg.operand_count questions, each atom
// independently negated with probability 1/2, connectives uniform.
inline GenOutput gen_inductive(const std::vector<AtomicQuestion>& atoms, const GenConfig& cfg) {
    cfg.validate();
    auto by_image = detail::group_by_image(atoms);
    return detail::run_per_image(cfg, by_image,
                                 [&cfg](std::int64_t image_id, const std::vector<AtomicQuestion>& qs, GenOutput& out) {
                                     detail::inductive_for_image(cfg, image_id, qs, out);
                                 });
}

struct DatasetStats {
    std::size_t total = 0;
    std::size_t yes_count = 0;
    std::map<std::string, std::size_t> per_category;
    std::map<std::string, std::size_t> per_split;
    std::map<int, std::size_t> connective_histogram;

    double yes_fraction() const { return total == 0 ? 0.0 : static_cast<double>(yes_count) / static_cast<double>(total); }

    json to_json() const {
        json j{{"total", total},
               {"yes_count", yes_count},
               {"no_count", total - yes_count},
               {"yes_fraction", yes_fraction()},
               {"per_category", json::object()},
               {"per_split", json::object()},
               {"connective_histogram", json::object()}};
        for (const auto& [k, v] : per_category) j["per_category"][k] = v;
        for (const auto& [k, v] : per_split) j["per_split"][k] = v;
        for (const auto& [k, v] : connective_histogram) j["connective_histogram"][std::to_string(k)] = v;
        return j;
    }
};

inline DatasetStats dataset_stats(const std::vector<ComposedSample>& samples) {
    DatasetStats st;
    st.total = samples.size();
    for (const ComposedSample& s : samples) {
        if (s.answer) ++st.yes_count;
        ++st.per_category[s.category];
        ++st.per_split[s.split];
        ++st.connective_histogram[s.connective_count];
    }
    return st;
}

} // namespace vqlogic
