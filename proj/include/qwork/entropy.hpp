#pragma once

#include "qwork/measurement.hpp"

#include <cmath>

namespace qwork {

/// -sum p log2 p in bits, with 0 log 0 = 0.
inline double shannon_entropy(const OutcomeDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probabilities())
        if (p > 0.0) h -= p * std::log2(p);
    return std::max(h, 0.0);
}

/// H(B|A) = H(A,B) - H(A), with A the row index.
inline double conditional_entropy(const OutcomeDistribution& joint) {
    return shannon_entropy(joint) - shannon_entropy(joint.marginal_a());
}

inline double mutual_information(const OutcomeDistribution& joint) {
    return shannon_entropy(joint.marginal_a()) + shannon_entropy(joint.marginal_b()) - shannon_entropy(joint);
}

}  // namespace qwork
