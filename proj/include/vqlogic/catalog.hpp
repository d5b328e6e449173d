#pragma once

#include <string>
#include <vector>

#include "vqlogic/formula.hpp"

namespace vqlogic {

// Where an operand's text and ground-truth answer come from.
enum class OperandRole { vqa, object, caption, antonym };

inline OperandRole role_for_operand(const std::string& token) {
    if (token == "B") return OperandRole::object;
    if (token == "C") return OperandRole::caption;
    if (token == "anto(B)") return OperandRole::antonym;
    return OperandRole::vqa;
}

inline std::string role_name(OperandRole r) {
    switch (r) {
    case OperandRole::vqa: return "vqa";
    case OperandRole::object: return "object";
    case OperandRole::caption: return "caption";
    case OperandRole::antonym: return "antonym";
    }
    return "vqa";
}

struct FormulaCatalogEntry {
    std::string label;                 // e.g. "Q1 AND NOT Q2"; parse_label(label) == formula
    Formula formula;                   // atoms indexed by first appearance in the label
    int connective_count = 0;          // NOT/AND/OR nodes
    std::vector<std::string> operands; // operand token per atom index ("Q1", "B", "anto(B)", ...)
    std::vector<OperandRole> operand_roles;
    bool supplemental = false;         // uses object/caption/antonym material
};

namespace detail {

inline FormulaCatalogEntry make_entry(const std::string& label) {
    LabelParse p = parse_label(label);
    FormulaCatalogEntry e{label, p.formula, p.formula.connective_count(), p.operands, {}, false};
    for (const std::string& op : p.operands) e.operand_roles.push_back(role_for_operand(op));
    for (OperandRole r : e.operand_roles)
        if (r != OperandRole::vqa) e.supplemental = true;
    return e;
}

} // namespace detail

// The 10 compositions built from a pair of seed questions, in table order.
// NOT Q1 / NOT Q2 are one-atom formulas; the rest are two-atom.
inline std::vector<FormulaCatalogEntry> compose_catalog() {
    static const char* labels[] = {
        "NOT Q1",
        "NOT Q2",
        "Q1 AND Q2",
        "Q1 OR Q2",
        "Q1 AND NOT Q2",
        "Q1 OR NOT Q2",
        "NOT Q1 AND Q2",
        "NOT Q1 OR Q2",
        "NOT Q1 AND NOT Q2",
        "NOT Q1 OR NOT Q2",
    };
    std::vector<FormulaCatalogEntry> out;
    for (const char* l : labels) out.push_back(detail::make_entry(l));
    return out;
}

// The 22 per-seed-question templates over Q and the object (B), caption (C),
// and adversarial-antonym (anto(B)) questions. Plain Q and NOT Q are carried
// for reporting parity but not counted as supplemental; the other 20 are.
inline std::vector<FormulaCatalogEntry> supplement_catalog() {
    static const char* labels[] = {
        "Q",
        "NOT Q",
        "Q AND B",
        "Q OR B",
        "Q AND anto(B)",
        "Q OR anto(B)",
        "Q AND C",
        "Q OR C",
        "Q AND NOT B",
        "Q OR NOT B",
        "NOT Q AND B",
        "NOT Q OR B",
        "NOT Q AND NOT B",
        "NOT Q OR NOT B",
        "NOT Q AND anto(B)",
        "NOT Q OR anto(B)",
        "Q AND NOT C",
        "Q OR NOT C",
        "NOT Q AND C",
        "NOT Q OR C",
        "NOT Q AND NOT C",
        "NOT Q OR NOT C",
    };
    std::vector<FormulaCatalogEntry> out;
    for (const char* l : labels) out.push_back(detail::make_entry(l));
    return out;
}

} // namespace vqlogic
