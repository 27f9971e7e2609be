#pragma once

#include <span>

#include "bsbm/signed_graph.hpp"

namespace bsbm {

/// Normalized mutual information I(A;B) / sqrt(H(A) H(B)), natural logs.
/// When either entropy vanishes the result is 1 for identical partitions,
/// else 0.
double nmi(std::span<const int> a, std::span<const int> b);
inline double nmi(const LabelVector& a, const LabelVector& b) { return nmi(a.z, b.z); }

/// Relabels `est` to maximize agreement with `truth`: exhaustive search over
/// label permutations when K <= 10, greedy confusion-matrix matching above.
LabelVector align_labels(const LabelVector& est, const LabelVector& truth);

/// Number of positions where the two labelings agree.
int agreement(const LabelVector& a, const LabelVector& b);

}  // namespace bsbm
