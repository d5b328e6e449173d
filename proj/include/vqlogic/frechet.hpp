#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vqlogic/errors.hpp"
#include "vqlogic/formula.hpp"

namespace vqlogic {

// Interval constraining the probability of a conjunction or disjunction
// given only the marginal probabilities of its parts, plus the midpoint used
// as the point estimate.
struct FrechetBounds {
    double lower = 0.0;
    double upper = 0.0;
    double mean = 0.0;

    friend bool operator==(const FrechetBounds& a, const FrechetBounds& b) {
        return a.lower == b.lower && a.upper == b.upper && a.mean == b.mean;
    }
};

namespace detail {

inline void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw domain_error(std::string(what) + " = " + std::to_string(p) + " is outside [0,1]");
}

inline FrechetBounds bounds_from(double lower, double upper) {
    return {lower, upper, 0.5 * (lower + upper)};
}

} // namespace detail

inline FrechetBounds frechet_and(double p1, double p2) {
    detail::check_probability(p1, "p1");
    detail::check_probability(p2, "p2");
    return detail::bounds_from(std::max(0.0, p1 + p2 - 1.0), std::min(p1, p2));
}

inline FrechetBounds frechet_or(double p1, double p2) {
    detail::check_probability(p1, "p1");
    detail::check_probability(p2, "p2");
    return detail::bounds_from(std::max(p1, p2), std::min(1.0, p1 + p2));
}

namespace detail {

inline FrechetBounds frechet_walk(const Formula& f, int at, const std::vector<double>& probs) {
    const Formula::Node& n = f.node(at);
    switch (n.kind) {
    case NodeKind::atom: {
        double p = probs[static_cast<std::size_t>(n.a)];
        check_probability(p, "atom probability");
        return {p, p, p};
    }
    case NodeKind::negation: {
        const Formula::Node& child = f.node(n.a);
        if (child.kind != NodeKind::atom)
            throw shape_error("frechet_for_formula requires negation normal form");
        double p = probs[static_cast<std::size_t>(child.a)];
        check_probability(p, "atom probability");
        double q = 1.0 - p;
        return {q, q, q};
    }
    case NodeKind::conjunction:
    case NodeKind::disjunction: {
        // The two-operand bounds extend to chains by feeding each child
        // interval's mean forward as that child's probability.
        FrechetBounds l = frechet_walk(f, n.a, probs);
        FrechetBounds r = frechet_walk(f, n.b, probs);
        return n.kind == NodeKind::conjunction ? frechet_and(l.mean, r.mean) : frechet_or(l.mean, r.mean);
    }
    }
    throw shape_error("unreachable formula node kind");
}

} // namespace detail

inline FrechetBounds frechet_for_formula(const Formula& f, const std::vector<double>& atom_probs) {
    if (!f.is_nnf()) throw shape_error("frechet_for_formula requires negation normal form");
    if (static_cast<int>(atom_probs.size()) != f.atom_count())
        throw arity_error("got " + std::to_string(atom_probs.size()) + " probabilities for a formula with " +
                          std::to_string(f.atom_count()) + " atoms");
    return detail::frechet_walk(f, f.root(), atom_probs);
}

// Squared gap between the composed-answer probability and the indicator of
// the interval midpoint. The indicator is strictly "mean > 0.5": an exact
// tie counts as 0.
inline double fc_loss(double p_composed, const FrechetBounds& b) {
    detail::check_probability(p_composed, "p_composed");
    double indicator = b.mean > 0.5 ? 1.0 : 0.0;
    double d = p_composed - indicator;
    return d * d;
}

inline double fc_loss_grad(double p_composed, const FrechetBounds& b) {
    detail::check_probability(p_composed, "p_composed");
    double indicator = b.mean > 0.5 ? 1.0 : 0.0;
    return 2.0 * (p_composed - indicator);
}

} // namespace vqlogic
