#pragma once

#include <vector>

#include "salt/types.hpp"

namespace salt {

// Mean of per-class recalls; classes absent from y_true are excluded.
double balanced_accuracy(const VectorXi& y_true, const VectorXi& y_pred,
                         int num_classes);

// Fraction of the whole pool made of self-labeled records whose label
// disagrees with the hidden ground truth. ground_truth[i] is the true label
// of pool record i; seed and oracle records never count as wrong.
double wrong_label_fraction(const LabeledPool& pool,
                            const std::vector<int>& ground_truth);

}  // namespace salt
