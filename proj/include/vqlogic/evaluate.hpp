#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vqlogic/answerers.hpp"
#include "vqlogic/catalog.hpp"
#include "vqlogic/errors.hpp"
#include "vqlogic/frechet.hpp"
#include "vqlogic/records.hpp"

namespace vqlogic {

struct CellStats {
    std::size_t count = 0;
    std::size_t correct = 0;

    double accuracy() const { return count == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(count); }

    void add(bool hit) {
        ++count;
        if (hit) ++correct;
    }
};

struct CommutativityReport {
    std::size_t pairs = 0;
    std::size_t consistent = 0;
    std::size_t unpaired = 0;
    std::size_t unanswered_pairs = 0;
    CellStats base_order;     // accuracy on the Q1-first surfaces
    CellStats mirrored_order; // accuracy on the Q2-first twins

    double consistency_rate() const {
        return pairs == 0 ? 0.0 : static_cast<double>(consistent) / static_cast<double>(pairs);
    }
};

struct FcReport {
    std::size_t total = 0;
    std::size_t compatible = 0;
    double mean_loss = 0.0;

    double rate() const { return total == 0 ? 0.0 : static_cast<double>(compatible) / static_cast<double>(total); }
};

struct EvalReport {
    std::string answerer;
    double threshold = 0.5;
    CellStats overall;
    std::map<std::string, CellStats> per_category;
    CellStats single_connective; // connective_count <= 1
    CellStats multi_connective;  // connective_count >= 2
    std::map<int, CellStats> per_operand_count;
    std::size_t unanswered = 0;
    std::optional<CommutativityReport> commutativity;
    std::optional<FcReport> fc;
};

// Accuracy against the derived answers: prediction is p_yes > threshold
// (strictly), refused samples are excluded from every denominator.
inline EvalReport evaluate(const std::vector<ComposedSample>& dataset, Answerer& answerer, double threshold = 0.5) {
    EvalReport r;
    r.answerer = answerer.name();
    r.threshold = threshold;
    for (const ComposedSample& s : dataset) {
        std::optional<double> p = answerer.answer(s);
        if (!p) {
            ++r.unanswered;
            continue;
        }
        if (!(*p >= 0.0 && *p <= 1.0))
            throw domain_error("answerer returned p_yes outside [0,1] for sample " + s.sample_id);
        bool hit = ((*p > threshold) == s.answer);
        r.overall.add(hit);
        r.per_category[s.category].add(hit);
        (s.connective_count <= 1 ? r.single_connective : r.multi_connective).add(hit);
        r.per_operand_count[static_cast<int>(s.atoms.size())].add(hit);
    }
    return r;
}

// Partition by connective count: at most one operation vs several.
inline std::pair<std::vector<ComposedSample>, std::vector<ComposedSample>>
generalization_split(const std::vector<ComposedSample>& dataset) {
    std::pair<std::vector<ComposedSample>, std::vector<ComposedSample>> out;
    for (const ComposedSample& s : dataset)
        (s.connective_count <= 1 ? out.first : out.second).push_back(s);
    return out;
}

// Agreement between each sample and its order-swapped twin (linked via
// mirror_of). Twins whose base record is missing count as unpaired.
inline CommutativityReport commutativity_check(const std::vector<ComposedSample>& dataset, Answerer& answerer,
                                               double threshold = 0.5) {
    std::map<std::string, const ComposedSample*> by_id;
    for (const ComposedSample& s : dataset)
        if (s.mirror_of.empty()) by_id[s.sample_id] = &s;

    CommutativityReport r;
    for (const ComposedSample& m : dataset) {
        if (m.mirror_of.empty()) continue;
        auto it = by_id.find(m.mirror_of);
        if (it == by_id.end()) {
            ++r.unpaired;
            continue;
        }
        const ComposedSample& base = *it->second;
        std::optional<double> pb = answerer.answer(base);
        std::optional<double> pm = answerer.answer(m);
        if (!pb || !pm) {
            ++r.unanswered_pairs;
            continue;
        }
        bool base_yes = *pb > threshold;
        bool mirror_yes = *pm > threshold;
        ++r.pairs;
        if (base_yes == mirror_yes) ++r.consistent;
        r.base_order.add(base_yes == base.answer);
        r.mirrored_order.add(mirror_yes == m.answer);
    }
    return r;
}

// One compatibility record: the composed-question probability, the
// component probabilities, and the formula that ties them together.
struct FcTriplet {
    std::string sample_id;
    double p_composed = 0.0;
    std::vector<double> p_components;
    std::string formula_label;
};

inline std::vector<FcTriplet> read_triplets(const std::string& path) {
    std::vector<FcTriplet> out;
    for_each_jsonl_line(path, [&](const json& j, int line_no) {
        try {
            FcTriplet t;
            t.sample_id = j.at("sample_id").get<std::string>();
            t.p_composed = j.at("p_yes_composed").get<double>();
            for (const json& p : j.at("p_yes_components")) t.p_components.push_back(p.get<double>());
            t.formula_label = j.at("formula").get<std::string>();
            out.push_back(std::move(t));
        } catch (const json::exception& e) {
            throw format_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    });
    return out;
}

// Fraction of records whose thresholded composed answer matches the
// indicator of the interval midpoint, plus the mean squared gap.
inline FcReport fc_compatibility_rate(const std::vector<FcTriplet>& triplets) {
    FcReport r;
    double loss_sum = 0.0;
    for (const FcTriplet& t : triplets) {
        Formula f = demorgan_nnf(parse_label(t.formula_label).formula);
        FrechetBounds b = frechet_for_formula(f, t.p_components);
        detail::check_probability(t.p_composed, "p_yes_composed");
        double loss = fc_loss(t.p_composed, b);
        loss_sum += loss;
        ++r.total;
        if ((t.p_composed > 0.5) == (b.mean > 0.5)) ++r.compatible;
    }
    r.mean_loss = r.total == 0 ? 0.0 : loss_sum / static_cast<double>(r.total);
    return r;
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

namespace detail {

inline json cell_json(const CellStats& c) {
    return json{{"accuracy", c.accuracy()}, {"correct", c.correct}, {"count", c.count}};
}

// Catalog order first (compose then supplement), remaining labels sorted.
inline std::vector<std::string> category_display_order(const std::map<std::string, CellStats>& cells) {
    std::vector<std::string> order;
    auto push_known = [&](const std::vector<FormulaCatalogEntry>& catalog) {
        for (const FormulaCatalogEntry& e : catalog) order.push_back(e.label);
    };
    push_known(compose_catalog());
    push_known(supplement_catalog());
    for (const auto& [label, cell] : cells) {
        bool known = false;
        for (const std::string& o : order)
            if (o == label) known = true;
        if (!known) order.push_back(label);
    }
    return order;
}

} // namespace detail

inline json report_json(const EvalReport& r) {
    json per_category = json::object();
    for (const auto& [label, cell] : r.per_category) per_category[label] = detail::cell_json(cell);
    json per_operands = json::object();
    for (const auto& [n, cell] : r.per_operand_count) per_operands[std::to_string(n)] = detail::cell_json(cell);
    json j{{"answerer", r.answerer},
           {"threshold", r.threshold},
           {"overall", detail::cell_json(r.overall)},
           {"per_category", std::move(per_category)},
           {"single_connective", detail::cell_json(r.single_connective)},
           {"multi_connective", detail::cell_json(r.multi_connective)},
           {"per_operand_count", std::move(per_operands)},
           {"unanswered", r.unanswered}};
    if (r.commutativity) {
        const CommutativityReport& c = *r.commutativity;
        j["commutativity"] = json{{"pairs", c.pairs},
                                  {"consistency_rate", c.consistency_rate()},
                                  {"unpaired", c.unpaired},
                                  {"unanswered_pairs", c.unanswered_pairs},
                                  {"base_order", detail::cell_json(c.base_order)},
                                  {"mirrored_order", detail::cell_json(c.mirrored_order)}};
    }
    if (r.fc) {
        j["fc"] = json{{"total", r.fc->total},
                       {"compatible", r.fc->compatible},
                       {"rate", r.fc->rate()},
                       {"mean_loss", r.fc->mean_loss}};
    }
    return j;
}

inline std::string report_markdown(const EvalReport& r) {
    std::ostringstream out;
    auto pct = [](const CellStats& c) {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(2);
        s << 100.0 * c.accuracy();
        return s.str();
    };

    out << "# Evaluation report\n\n";
    out << "- answerer: " << r.answerer << "\n";
    out << "- threshold: " << r.threshold << "\n";
    out << "- overall accuracy: " << pct(r.overall) << "% (" << r.overall.correct << "/" << r.overall.count << ")\n";
    out << "- unanswered: " << r.unanswered << "\n\n";

    out << "## Accuracy per category\n\n";
    out << "| category | accuracy (%) | correct | count |\n";
    out << "|---|---|---|---|\n";
    std::vector<std::string> absent;
    for (const std::string& label : detail::category_display_order(r.per_category)) {
        auto it = r.per_category.find(label);
        if (it == r.per_category.end() || it->second.count == 0) {
            absent.push_back(label);
            continue;
        }
        out << "| " << label << " | " << pct(it->second) << " | " << it->second.correct << " | " << it->second.count
            << " |\n";
    }
    if (!absent.empty()) {
        out << "\nAbsent categories:";
        for (const std::string& a : absent) out << " `" << a << "`";
        out << "\n";
    }

    out << "\n## Single vs multiple operations\n\n";
    out << "| slice | accuracy (%) | correct | count |\n";
    out << "|---|---|---|---|\n";
    out << "| single | " << pct(r.single_connective) << " | " << r.single_connective.correct << " | "
        << r.single_connective.count << " |\n";
    out << "| multiple | " << pct(r.multi_connective) << " | " << r.multi_connective.correct << " | "
        << r.multi_connective.count << " |\n";

    out << "\n## Accuracy per operand count\n\n";
    out << "| operands | accuracy (%) | correct | count |\n";
    out << "|---|---|---|---|\n";
    for (const auto& [n, cell] : r.per_operand_count)
        out << "| " << n << " | " << pct(cell) << " | " << cell.correct << " | " << cell.count << " |\n";

    if (r.commutativity) {
        const CommutativityReport& c = *r.commutativity;
        out << "\n## Commutativity\n\n";
        out << "| pairs | consistency (%) | Q1-first acc (%) | Q2-first acc (%) | unpaired |\n";
        out << "|---|---|---|---|---|\n";
        std::ostringstream cons;
        cons.setf(std::ios::fixed);
        cons.precision(2);
        cons << 100.0 * c.consistency_rate();
        out << "| " << c.pairs << " | " << cons.str() << " | " << pct(c.base_order) << " | " << pct(c.mirrored_order)
            << " | " << c.unpaired << " |\n";
    }
    if (r.fc) {
        out << "\n## Frechet compatibility\n\n";
        out << "- records: " << r.fc->total << "\n";
        out << "- compatible: " << r.fc->compatible << " (" << 100.0 * r.fc->rate() << "%)\n";
        out << "- mean FC loss: " << r.fc->mean_loss << "\n";
    }
    return out.str();
}

enum class ReportFormat { json_format, markdown };

inline std::string emit_report(const EvalReport& r, ReportFormat format) {
    if (format == ReportFormat::json_format) return report_json(r).dump(2) + "\n";
    return report_markdown(r);
}

} // namespace vqlogic
