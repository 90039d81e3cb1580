#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "symncd/dataset.hpp"

namespace symncd {

/// Rows are ground truth, columns are predictions, both indexed by position
/// in `classes()` (ascending label order).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<Label> classes);

  const std::vector<Label>& classes() const noexcept { return classes_; }
  std::size_t class_count() const noexcept { return classes_.size(); }

  std::uint64_t at(std::size_t truth, std::size_t predicted) const noexcept {
    return counts_[truth * classes_.size() + predicted];
  }
  void add(Label truth, Label predicted);

  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept;
  std::uint64_t row_sum(std::size_t i) const noexcept;
  std::uint64_t col_sum(std::size_t j) const noexcept;

  std::vector<std::vector<std::uint64_t>> to_rows() const;

 private:
  std::size_t index_of(Label label) const;

  std::vector<Label> classes_;
  std::vector<std::uint64_t> counts_;
};

/// Classes are the union of labels in truth and pred plus `extra_classes`.
ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> pred,
                          std::span<const Label> extra_classes = {});

/// Percentages in [0, 100].
double overall_accuracy(const ConfusionMatrix& cm);
/// Mean per-class recall over classes present in the ground truth.
double average_accuracy(const ConfusionMatrix& cm);

struct IouResult {
  double miou = 0.0;
  /// Only classes with a non-zero union.
  std::map<Label, double> per_class;
};
/// IoU_i = TP / (TP + FP + FN); classes with a zero union are excluded.
IouResult mean_iou(const ConfusionMatrix& cm);

/// Two-sided 97.5% Student-t quantile at the given degrees of freedom.
double student_t_975(std::size_t degrees_of_freedom);

struct TrialAggregate {
  double mean = 0.0;
  /// 95% CI half-width: t*(n-1) * sd / sqrt(n), sample sd.
  double half_width = 0.0;
  std::vector<double> values;
};
TrialAggregate aggregate_trials(std::span<const double> values);

struct EvaluationReport {
  double oa = 0.0;
  double aa = 0.0;
  double miou = 0.0;
  std::map<Label, double> per_class_iou;
  ConfusionMatrix confusion{{}};
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  double runtime_seconds = 0.0;
};

EvaluationReport make_report(const ConfusionMatrix& cm);

/// {oa, aa, miou, per_class_iou, classes, confusion, config, runtime_seconds}
nlohmann::ordered_json to_json(const EvaluationReport& report);
nlohmann::ordered_json to_json(const TrialAggregate& aggregate);

}  // namespace symncd
