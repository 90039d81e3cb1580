#include <cmath>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "symncd/error.hpp"
#include "symncd/metrics.hpp"

using namespace symncd;

TEST(Confusion, LayoutAndCounts) {
  const std::vector<Label> truth{5, 5, 5, 9};
  const std::vector<Label> pred{5, 5, 9, 9};
  const auto cm = confusion(truth, pred);
  EXPECT_EQ(cm.classes(), (std::vector<Label>{5, 9}));
  EXPECT_EQ(cm.to_rows(), (std::vector<std::vector<std::uint64_t>>{{2, 1}, {0, 1}}));
  EXPECT_EQ(cm.total(), 4u);
  EXPECT_EQ(cm.trace(), 3u);
  EXPECT_EQ(cm.row_sum(0), 3u);
  EXPECT_EQ(cm.col_sum(1), 2u);
  EXPECT_THROW(confusion(truth, std::vector<Label>{5}), ArgumentError);
  EXPECT_THROW(confusion({}, {}), ArgumentError);
}

TEST(Metrics, TwoClassExample) {
  const std::vector<Label> truth{0, 0, 0, 1};
  const std::vector<Label> pred{0, 0, 1, 1};
  const auto cm = confusion(truth, pred);
  EXPECT_NEAR(overall_accuracy(cm), 75.0, 1e-9);
  EXPECT_NEAR(average_accuracy(cm), 250.0 / 3.0, 1e-9);
  const auto iou = mean_iou(cm);
  EXPECT_NEAR(iou.miou, 175.0 / 3.0, 1e-9);
  EXPECT_NEAR(iou.per_class.at(0), 200.0 / 3.0, 1e-9);
  EXPECT_NEAR(iou.per_class.at(1), 50.0, 1e-9);
}

TEST(Metrics, PerfectPredictions) {
  const std::vector<Label> y{1, 2, 3, 3, 2, 1, 7};
  const auto cm = confusion(y, y);
  EXPECT_DOUBLE_EQ(overall_accuracy(cm), 100.0);
  EXPECT_DOUBLE_EQ(average_accuracy(cm), 100.0);
  EXPECT_DOUBLE_EQ(mean_iou(cm).miou, 100.0);
}

TEST(Metrics, ClassOnlyPredictedCountsForIouNotAa) {
  // Class 2 never appears in truth: excluded from AA, IoU 0 (union > 0).
  const std::vector<Label> truth{0, 0, 1, 1};
  const std::vector<Label> pred{0, 2, 1, 1};
  const auto cm = confusion(truth, pred);
  EXPECT_NEAR(average_accuracy(cm), 75.0, 1e-9);
  const auto iou = mean_iou(cm);
  ASSERT_EQ(iou.per_class.size(), 3u);
  EXPECT_DOUBLE_EQ(iou.per_class.at(2), 0.0);
  EXPECT_NEAR(iou.miou, (50.0 + 100.0 + 0.0) / 3.0, 1e-9);
}

TEST(Metrics, ZeroUnionClassIsExcluded) {
  const std::vector<Label> truth{0, 1};
  const std::vector<Label> pred{0, 1};
  const std::vector<Label> extra{4};
  const auto with_extra = confusion(truth, pred, extra);
  const auto plain = confusion(truth, pred);
  EXPECT_EQ(with_extra.class_count(), 3u);
  EXPECT_DOUBLE_EQ(mean_iou(with_extra).miou, mean_iou(plain).miou);
  EXPECT_DOUBLE_EQ(average_accuracy(with_extra), average_accuracy(plain));
  EXPECT_EQ(mean_iou(with_extra).per_class.count(4), 0u);
}

TEST(StudentT, MatchesNumericalIntegration) {
  for (std::size_t df : {1u, 2u, 4u, 9u, 30u}) {
    EXPECT_NEAR(student_t_975(df), oracle::t_quantile_975(static_cast<double>(df)), 1e-6) << "df " << df;
  }
  EXPECT_NEAR(student_t_975(4), 2.7764451, 1e-6);
  EXPECT_THROW(student_t_975(0), ArgumentError);
}

TEST(Aggregate, FiveTrials) {
  const std::vector<double> v{10, 12, 14, 16, 18};
  const auto agg = aggregate_trials(v);
  EXPECT_DOUBLE_EQ(agg.mean, 14.0);
  const double sd = std::sqrt(10.0);
  EXPECT_NEAR(agg.half_width, oracle::t_quantile_975(4) * sd / std::sqrt(5.0), 1e-6);
  EXPECT_NEAR(agg.half_width, 3.93, 0.005);
  EXPECT_EQ(agg.values, v);
}

TEST(Aggregate, IdenticalValuesAndErrors) {
  const std::vector<double> same{0.3, 0.3, 0.3};
  const auto agg = aggregate_trials(same);
  EXPECT_DOUBLE_EQ(agg.mean, 0.3);
  EXPECT_DOUBLE_EQ(agg.half_width, 0.0);
  EXPECT_THROW(aggregate_trials(std::vector<double>{1.0}), ArgumentError);
}

TEST(Report, JsonShape) {
  const std::vector<Label> truth{0, 0, 0, 1};
  const std::vector<Label> pred{0, 0, 1, 1};
  auto report = make_report(confusion(truth, pred));
  report.config["k"] = 2;
  const auto j = to_json(report);
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"oa", "aa", "miou", "per_class_iou", "classes", "confusion", "config",
                                            "runtime_seconds"}));
  EXPECT_EQ(j["confusion"], nlohmann::ordered_json::parse("[[2,1],[0,1]]"));
  EXPECT_EQ(j["config"]["k"], 2);
}
