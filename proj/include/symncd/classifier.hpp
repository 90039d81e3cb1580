#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "symncd/dataset.hpp"
#include "symncd/distance.hpp"

namespace symncd {

struct Prediction {
  Label label = 0;
  /// min(k, |train|) train indices, nearest first.
  std::vector<std::size_t> neighbors;
  /// True when several labels shared the top vote count.
  bool tie_broken = false;
};

/// kNN vote over one distance row. Neighbors are ordered by (distance, train
/// index). The most frequent label among the first k wins; on a tie the
/// nearest neighbor carrying one of the tied labels decides. k > |row| is
/// clamped with a warning; k < 1 throws.
Prediction knn_predict(std::span<const double> row, std::span<const Label> train_labels, std::size_t k);

/// knn_predict per row, in test order. Rows are independent and classified
/// on up to `workers` threads (0 = hardware concurrency).
std::vector<Prediction> classify_all(const DistanceMatrix& matrix, std::size_t k, std::size_t workers = 1);

}  // namespace symncd
