#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vqlogic/errors.hpp"

namespace vqlogic {

// Joint-loss mixing weights. The answering term gets the remainder
// 1 - alpha1 - alpha2, so the two alphas may not exceed 1 together.
struct LossWeights {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta = 0.0;

    void validate() const {
        if (alpha1 < 0.0 || alpha2 < 0.0 || beta < 0.0)
            throw config_error("loss weights must be non-negative");
        if (alpha1 + alpha2 > 1.0)
            throw config_error("alpha1 + alpha2 = " + std::to_string(alpha1 + alpha2) + " exceeds 1");
    }
};

// Prediction-head snapshot: answer distribution, the three question-type
// masks over the answer vocabulary, type probabilities, and raw logits for
// the type (3-way) and connective (AND, OR, NOT, none) heads.
struct AnswerHead {
    std::vector<double> yhat;
    std::vector<std::vector<std::uint8_t>> type_masks; // 3 binary vectors over the vocabulary
    std::vector<double> p_type;                        // 3 probabilities summing to 1
    std::vector<double> z_type;                        // 3 logits
    std::vector<double> z_conn;                        // 4 logits
};

namespace detail {

constexpr double kLogClamp = 1e-12;

inline double clamped_log(double x) { return std::log(x < kLogClamp ? kLogClamp : x); }

inline double bce_term(double p, double y) {
    return -(y * clamped_log(p) + (1.0 - y) * clamped_log(1.0 - p));
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline void check_masks(const AnswerHead& head) {
    std::size_t vocab = head.yhat.size();
    if (head.type_masks.size() != 3) throw config_error("expected 3 type masks");
    for (const auto& m : head.type_masks)
        if (m.size() != vocab) throw config_error("type mask length does not match vocabulary");
    for (std::size_t j = 0; j < vocab; ++j) {
        int hits = 0;
        for (const auto& m : head.type_masks) {
            if (m[j] != 0 && m[j] != 1) throw config_error("type masks must be 0/1-valued");
            hits += m[j];
        }
        if (hits != 1)
            throw config_error("type masks must partition the vocabulary; index " + std::to_string(j) +
                               " is covered " + std::to_string(hits) + " times");
    }
}

// Per-index scale applied to yhat by the mask/type mixing. With a valid
// partition this is just p_type of the index's own type.
inline double mix_weight(const AnswerHead& head, std::size_t j) {
    double w = 0.0;
    for (std::size_t i = 0; i < 3; ++i) w += head.type_masks[i][j] * head.p_type[i];
    return w;
}

} // namespace detail

// Binary cross-entropy between the type-mixed prediction sum_i(yhat .* M_i * P_i)
// and the answer target, summed over the vocabulary. Logs clamped at 1e-12.
inline double answering_loss(const AnswerHead& head, const std::vector<double>& y_ans) {
    detail::check_masks(head);
    if (head.p_type.size() != 3) throw config_error("expected 3 type probabilities");
    if (y_ans.size() != head.yhat.size()) throw arity_error("target length does not match vocabulary");
    double total = 0.0;
    for (std::size_t j = 0; j < head.yhat.size(); ++j)
        total += detail::bce_term(head.yhat[j] * detail::mix_weight(head, j), y_ans[j]);
    return total;
}

// d answering_loss / d yhat. Valid away from the log clamps.
inline std::vector<double> answering_loss_grad_yhat(const AnswerHead& head, const std::vector<double>& y_ans) {
    detail::check_masks(head);
    if (y_ans.size() != head.yhat.size()) throw arity_error("target length does not match vocabulary");
    std::vector<double> grad(head.yhat.size());
    for (std::size_t j = 0; j < head.yhat.size(); ++j) {
        double w = detail::mix_weight(head, j);
        double c = head.yhat[j] * w;
        grad[j] = w * (c - y_ans[j]) / std::max(c * (1.0 - c), detail::kLogClamp);
    }
    return grad;
}

// NLL of the softmax over the 3 type logits at the true class.
inline double type_loss(const std::vector<double>& z_type, int y_type) {
    if (z_type.size() != 3) throw arity_error("type head expects 3 logits");
    if (y_type < 0 || y_type >= 3) throw domain_error("type class index out of range");
    double zmax = std::max({z_type[0], z_type[1], z_type[2]});
    double sum = 0.0;
    for (double z : z_type) sum += std::exp(z - zmax);
    return -(z_type[static_cast<std::size_t>(y_type)] - zmax) + std::log(sum);
}

inline std::vector<double> type_loss_grad(const std::vector<double>& z_type, int y_type) {
    if (z_type.size() != 3) throw arity_error("type head expects 3 logits");
    if (y_type < 0 || y_type >= 3) throw domain_error("type class index out of range");
    double zmax = std::max({z_type[0], z_type[1], z_type[2]});
    double sum = 0.0;
    for (double z : z_type) sum += std::exp(z - zmax);
    std::vector<double> grad(3);
    for (std::size_t i = 0; i < 3; ++i)
        grad[i] = std::exp(z_type[i] - zmax) / sum - (static_cast<int>(i) == y_type ? 1.0 : 0.0);
    return grad;
}

// Multi-label BCE on sigmoids of the 4 connective logits; a question can
// carry several connectives at once.
inline double conn_loss(const std::vector<double>& z_conn, const std::vector<double>& y_conn) {
    if (z_conn.size() != 4 || y_conn.size() != 4) throw arity_error("connective head expects 4 logits and 4 labels");
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) total += detail::bce_term(detail::sigmoid(z_conn[i]), y_conn[i]);
    return total;
}

inline std::vector<double> conn_loss_grad(const std::vector<double>& z_conn, const std::vector<double>& y_conn) {
    if (z_conn.size() != 4 || y_conn.size() != 4) throw arity_error("connective head expects 4 logits and 4 labels");
    std::vector<double> grad(4);
    for (std::size_t i = 0; i < 4; ++i) grad[i] = detail::sigmoid(z_conn[i]) - y_conn[i];
    return grad;
}

inline double joint_loss(double l_ans, double l_type, double l_conn, double l_fc, const LossWeights& w) {
    w.validate();
    return (1.0 - w.alpha1 - w.alpha2) * l_ans + w.alpha1 * l_type + w.alpha2 * l_conn + w.beta * l_fc;
}

// Maximum relative disagreement between an analytic gradient and central
// finite differences at a point.
inline double grad_check(const std::function<double(const std::vector<double>&)>& fn,
                         const std::function<std::vector<double>(const std::vector<double>&)>& analytic,
                         const std::vector<double>& point, double step) {
    if (step <= 0.0) throw domain_error("finite-difference step must be positive");
    std::vector<double> ana = analytic(point);
    if (ana.size() != point.size()) throw arity_error("analytic gradient size does not match point");
    double worst = 0.0;
    std::vector<double> x = point;
    for (std::size_t i = 0; i < point.size(); ++i) {
        x[i] = point[i] + step;
        double hi = fn(x);
        x[i] = point[i] - step;
        double lo = fn(x);
        x[i] = point[i];
        double numeric = (hi - lo) / (2.0 * step);
        double scale = std::max({1e-8, std::fabs(numeric), std::fabs(ana[i])});
        worst = std::max(worst, std::fabs(numeric - ana[i]) / scale);
    }
    return worst;
}

} // namespace vqlogic
