#include "symncd/classifier.hpp"

#include <algorithm>
#include <numeric>

#include "symncd/error.hpp"
#include "symncd/log.hpp"
#include "symncd/parallel.hpp"

namespace symncd {

Prediction knn_predict(std::span<const double> row, std::span<const Label> train_labels, std::size_t k) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (row.empty()) throw ArgumentError("knn_predict: empty distance row");
  if (row.size() != train_labels.size()) throw ArgumentError("distance row and train labels differ in length");
  if (k > row.size()) {
    logger()->warn("k={} exceeds the {} training samples; using k={}", k, row.size(), row.size());
    k = row.size();
  }

  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return row[a] < row[b] || (row[a] == row[b] && a < b); });
  order.resize(k);

  // Vote counts in first-seen order; k is small so a flat scan is fine.
  std::vector<std::pair<Label, std::size_t>> votes;
  for (std::size_t idx : order) {
    const Label l = train_labels[idx];
    auto it = std::find_if(votes.begin(), votes.end(), [l](const auto& v) { return v.first == l; });
    if (it == votes.end()) votes.emplace_back(l, 1);
    else ++it->second;
  }
  std::size_t best = 0;
  for (const auto& v : votes) best = std::max(best, v.second);
  const auto tied = std::count_if(votes.begin(), votes.end(), [best](const auto& v) { return v.second == best; });

  Prediction p;
  p.neighbors = std::move(order);
  p.tie_broken = tied > 1;
  // Walking neighbors nearest-first, the first label with the top count is
  // both the unique winner and, on a tie, the tied class of the nearest sample.
  for (std::size_t idx : p.neighbors) {
    const Label l = train_labels[idx];
    const auto it = std::find_if(votes.begin(), votes.end(), [l](const auto& v) { return v.first == l; });
    if (it->second == best) {
      p.label = l;
      break;
    }
  }
  return p;
}

std::vector<Prediction> classify_all(const DistanceMatrix& matrix, std::size_t k, std::size_t workers) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (matrix.train_labels.size() != matrix.cols) throw ArgumentError("distance matrix label count mismatch");
  if (k > matrix.cols) {
    logger()->warn("k={} exceeds the {} training samples; using k={}", k, matrix.cols, matrix.cols);
    k = matrix.cols;
  }
  std::vector<Prediction> out(matrix.rows);
  parallel_for(matrix.rows, workers,
               [&](std::size_t r) { out[r] = knn_predict(matrix.row(r), matrix.train_labels, k); });
  return out;
}

}  // namespace symncd
