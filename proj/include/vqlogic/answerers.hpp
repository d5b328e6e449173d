#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vqlogic/errors.hpp"
#include "vqlogic/frechet.hpp"
#include "vqlogic/parser.hpp"
#include "vqlogic/records.hpp"
#include "vqlogic/rng.hpp"

namespace vqlogic {

// An answerer maps a dataset record to p_yes in [0,1], or refuses it
// (nullopt); refusals are reported separately from accuracy.
class Answerer {
public:
    virtual ~Answerer() = default;
    virtual std::string name() const = 0;
    virtual std::optional<double> answer(const ComposedSample& sample) = 0;
};

// Reads the recorded atom truths and evaluates the recorded formula; scores
// 100% on anything this library generates.
class OracleAnswerer final : public Answerer {
public:
    std::string name() const override { return "oracle"; }
    std::optional<double> answer(const ComposedSample& s) override {
        return eval(s.formula(), s.atom_answers()) ? 1.0 : 0.0;
    }
};

class ConstantYesAnswerer final : public Answerer {
public:
    std::string name() const override { return "yes"; }
    std::optional<double> answer(const ComposedSample&) override { return 1.0; }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace detail

// Uniform p_yes keyed on (seed, sample_id): deterministic, order-independent.
class RandomAnswerer final : public Answerer {
public:
    explicit RandomAnswerer(std::uint64_t seed) : seed_(seed) {}
    std::string name() const override { return "random"; }
    std::optional<double> answer(const ComposedSample& s) override {
        Rng rng(mix_seed(seed_, detail::fnv1a(s.sample_id)));
        return rng.next_unit();
    }

private:
    std::uint64_t seed_;
};

// Predictions preloaded from a JSONL file of {sample_id, p_yes} or
// {sample_id, answer}. Unknown sample ids are refused.
class ExternalFileAnswerer final : public Answerer {
public:
    explicit ExternalFileAnswerer(const std::string& path) {
        for_each_jsonl_line(path, [&](const json& j, int line_no) {
            std::string id = j.at("sample_id").get<std::string>();
            double p;
            if (j.contains("p_yes")) {
                p = j.at("p_yes").get<double>();
                if (!(p >= 0.0 && p <= 1.0))
                    throw domain_error(path + ":" + std::to_string(line_no) + ": p_yes outside [0,1]");
            } else if (j.contains("answer")) {
                p = answer_from_string(j.at("answer").get<std::string>()) ? 1.0 : 0.0;
            } else {
                throw format_error(path + ":" + std::to_string(line_no) + ": record needs p_yes or answer");
            }
            predictions_[std::move(id)] = p;
        });
    }

    std::string name() const override { return "file"; }
    std::optional<double> answer(const ComposedSample& s) override {
        auto it = predictions_.find(s.sample_id);
        if (it == predictions_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return predictions_.size(); }

private:
    std::map<std::string, double> predictions_;
};

// Answers one base question about one image; the recombiner's inner model.
using AtomicAnswerFn = std::function<std::optional<double>(std::int64_t image_id, const std::string& question)>;

// Ground-truth atomic answers harvested from a dataset's atom lists.
inline AtomicAnswerFn atomic_oracle(const std::vector<ComposedSample>& samples) {
    auto table = std::make_shared<std::map<std::pair<std::int64_t, std::string>, bool>>();
    for (const ComposedSample& s : samples)
        for (const AtomicQuestion& a : s.atoms)
            (*table)[{s.image_id, text_detail::normalize_spaces(a.text)}] = a.answer;
    return [table](std::int64_t image_id, const std::string& question) -> std::optional<double> {
        auto it = table->find({image_id, text_detail::normalize_spaces(question)});
        if (it == table->end()) return std::nullopt;
        return it->second ? 1.0 : 0.0;
    };
}

enum class RecombineMode { hard, frechet };

// Answer a composed question from its parts: parse the text, answer each
// recovered base question, then combine. Hard mode thresholds the component
// answers and evaluates the parsed formula; frechet mode folds component
// probabilities through the interval bounds and reports the midpoint.
inline std::optional<double> recombine_answer(std::int64_t image_id, const std::string& text,
                                              const AtomicAnswerFn& atomic, RecombineMode mode) {
    ParseResult parse = parse_composed(text);
    std::vector<double> probs;
    probs.reserve(parse.components.size());
    for (const ParsedComponent& c : parse.components) {
        std::optional<double> p = atomic(image_id, c.text);
        if (!p) return std::nullopt;
        probs.push_back(*p);
    }
    if (mode == RecombineMode::hard) {
        std::vector<bool> values;
        values.reserve(probs.size());
        for (double p : probs) values.push_back(p > 0.5);
        return eval(parse.formula, values) ? 1.0 : 0.0;
    }
    return frechet_for_formula(parse.formula, probs).mean;
}

class RecombinerAnswerer final : public Answerer {
public:
    RecombinerAnswerer(AtomicAnswerFn atomic, RecombineMode mode) : atomic_(std::move(atomic)), mode_(mode) {}

    std::string name() const override {
        return mode_ == RecombineMode::hard ? "recombine-hard" : "recombine-frechet";
    }
    std::optional<double> answer(const ComposedSample& s) override {
        return recombine_answer(s.image_id, s.text, atomic_, mode_);
    }

private:
    AtomicAnswerFn atomic_;
    RecombineMode mode_;
};

} // namespace vqlogic
