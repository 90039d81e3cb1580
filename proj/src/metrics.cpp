#include "symncd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "symncd/error.hpp"

namespace symncd {

ConfusionMatrix::ConfusionMatrix(std::vector<Label> classes) : classes_(std::move(classes)) {
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  counts_.assign(classes_.size() * classes_.size(), 0);
}

std::size_t ConfusionMatrix::index_of(Label label) const {
  const auto it = std::lower_bound(classes_.begin(), classes_.end(), label);
  if (it == classes_.end() || *it != label) throw ArgumentError("label " + std::to_string(label) + " not in confusion matrix");
  return static_cast<std::size_t>(it - classes_.begin());
}

void ConfusionMatrix::add(Label truth, Label predicted) {
  ++counts_[index_of(truth) * classes_.size() + index_of(predicted)];
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < classes_.size(); ++i) sum += at(i, i);
  return sum;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const noexcept {
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < classes_.size(); ++j) sum += at(i, j);
  return sum;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const noexcept {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < classes_.size(); ++i) sum += at(i, j);
  return sum;
}

std::vector<std::vector<std::uint64_t>> ConfusionMatrix::to_rows() const {
  std::vector<std::vector<std::uint64_t>> rows(classes_.size());
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    rows[i].assign(counts_.begin() + static_cast<std::ptrdiff_t>(i * classes_.size()),
                   counts_.begin() + static_cast<std::ptrdiff_t>((i + 1) * classes_.size()));
  }
  return rows;
}

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> pred,
                          std::span<const Label> extra_classes) {
  if (truth.size() != pred.size()) throw ArgumentError("truth and prediction lists differ in length");
  if (truth.empty()) throw ArgumentError("confusion matrix needs at least one sample");
  std::set<Label> classes(truth.begin(), truth.end());
  classes.insert(pred.begin(), pred.end());
  classes.insert(extra_classes.begin(), extra_classes.end());
  ConfusionMatrix cm({classes.begin(), classes.end()});
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], pred[i]);
  return cm;
}

double overall_accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw ArgumentError("overall accuracy of an empty confusion matrix");
  return 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double average_accuracy(const ConfusionMatrix& cm) {
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t i = 0; i < cm.class_count(); ++i) {
    const auto support = cm.row_sum(i);
    if (support == 0) continue;
    sum += 100.0 * static_cast<double>(cm.at(i, i)) / static_cast<double>(support);
    ++present;
  }
  if (present == 0) throw ArgumentError("average accuracy: no class has ground-truth samples");
  return sum / static_cast<double>(present);
}

IouResult mean_iou(const ConfusionMatrix& cm) {
  IouResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < cm.class_count(); ++i) {
    const auto tp = cm.at(i, i);
    const auto uni = cm.row_sum(i) + cm.col_sum(i) - tp;
    if (uni == 0) continue;
    const double iou = 100.0 * static_cast<double>(tp) / static_cast<double>(uni);
    out.per_class[cm.classes()[i]] = iou;
    sum += iou;
  }
  if (out.per_class.empty()) throw ArgumentError("mean IoU: every class has an empty union");
  out.miou = sum / static_cast<double>(out.per_class.size());
  return out;
}

double student_t_975(std::size_t degrees_of_freedom) {
  if (degrees_of_freedom == 0) throw ArgumentError("Student-t quantile needs >= 1 degree of freedom");
  const boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
  return boost::math::quantile(dist, 0.975);
}

TrialAggregate aggregate_trials(std::span<const double> values) {
  if (values.size() < 2) throw ArgumentError("confidence interval needs at least 2 trial values");
  TrialAggregate agg;
  agg.values.assign(values.begin(), values.end());
  // Sorted summation keeps the result independent of trial order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  agg.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - agg.mean) * (v - agg.mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  agg.half_width = student_t_975(sorted.size() - 1) * sd / std::sqrt(n);
  // Equal values can leave the mean one ulp outside [min, max].
  agg.mean = std::clamp(agg.mean, sorted.front(), sorted.back());
  return agg;
}

EvaluationReport make_report(const ConfusionMatrix& cm) {
  EvaluationReport r;
  r.oa = overall_accuracy(cm);
  r.aa = average_accuracy(cm);
  auto iou = mean_iou(cm);
  r.miou = iou.miou;
  r.per_class_iou = std::move(iou.per_class);
  r.confusion = cm;
  return r;
}

nlohmann::ordered_json to_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["oa"] = report.oa;
  j["aa"] = report.aa;
  j["miou"] = report.miou;
  auto per_class = nlohmann::ordered_json::object();
  for (const auto& [label, iou] : report.per_class_iou) per_class[std::to_string(label)] = iou;
  j["per_class_iou"] = per_class;
  j["classes"] = report.confusion.classes();
  j["confusion"] = report.confusion.to_rows();
  j["config"] = report.config;
  j["runtime_seconds"] = report.runtime_seconds;
  return j;
}

nlohmann::ordered_json to_json(const TrialAggregate& aggregate) {
  nlohmann::ordered_json j;
  j["mean"] = aggregate.mean;
  j["half_width"] = aggregate.half_width;
  j["trial_values"] = aggregate.values;
  return j;
}

}  // namespace symncd
