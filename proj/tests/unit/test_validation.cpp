#include <gtest/gtest.h>

#include <map>

#include "yeast/errors.hpp"
#include "yeast/validation.hpp"

TEST(Synth, ShapeAndDeterminism) {
  yeast::ClusteredSynthConfig cfg;
  cfg.n_subjects = 200;
  const auto a = yeast::generate_clustered_synth(cfg);
  const auto b = yeast::generate_clustered_synth(cfg);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.validation, b.validation);
  std::map<std::string, int> counts;
  std::map<std::string, yeast::Group> groups;
  for (const auto& e : a.history) {
    ++counts[e.subject_id];
    groups[e.subject_id] = e.group;
    EXPECT_GT(e.outcome, 0.0);
  }
  EXPECT_EQ(counts.size(), 200U);
  for (const auto& [id, n] : counts) {
    EXPECT_GE(n, 5);
  }
  for (std::size_t i = 1; i < a.validation.size(); ++i) {
    EXPECT_LE(a.validation[i - 1].timestamp, a.validation[i].timestamp);
    EXPECT_EQ(a.validation[i].index, static_cast<std::int64_t>(i + 1));
  }
  EXPECT_LT(a.history.back().timestamp, a.validation.front().timestamp);
  for (const auto& e : a.validation) {
    EXPECT_EQ(groups.at(e.subject_id), e.group);
  }
}

TEST(Synth, ConfigValidation) {
  yeast::ClusteredSynthConfig cfg;
  cfg.within_subject_corr = 1.0;
  EXPECT_THROW(cfg.validate(), yeast::DomainError);
  cfg = {};
  cfg.n_subjects = 1;
  EXPECT_THROW(cfg.validate(), yeast::DomainError);
}

TEST(Permutation, SingleReplicationIsBernoulli) {
  yeast::ClusteredSynthConfig sc;
  sc.n_subjects = 100;
  const auto data = yeast::generate_clustered_synth(sc);
  const yeast::TestConfig cfg{0.05, yeast::Sidedness::one_sided, static_cast<std::int64_t>(data.validation.size()),
                              1.0};
  const auto r = yeast::permutation_validation(data.validation, 1, 9, cfg, {yeast::MethodKind::yeast, 0});
  EXPECT_TRUE(r.detection_rate == 0.0 || r.detection_rate == 1.0);
  EXPECT_EQ(r.replications, 1);
}

TEST(Permutation, NeedsTwoSubjects) {
  std::vector<yeast::Event> events{{1, {}, "a", yeast::Group::control, 1.0}, {2, {}, "a", yeast::Group::control, 2.0}};
  const yeast::TestConfig cfg{0.05, yeast::Sidedness::one_sided, 2, 1.0};
  EXPECT_THROW(yeast::permutation_validation(events, 10, 1, cfg, {yeast::MethodKind::yeast, 0}), yeast::DataError);
}

TEST(Permutation, RobustVarianceControlsRateOnSmallData) {
  yeast::ClusteredSynthConfig sc;
  sc.n_subjects = 500;
  const auto data = yeast::generate_clustered_synth(sc);
  yeast::HistoryValidationOptions o;
  o.replications = 2000;
  o.variance = yeast::VarianceMethod::cluster_robust;
  const auto robust = yeast::validate_on_history(data.history, data.validation, o);
  o.variance = yeast::VarianceMethod::iid;
  const auto iid = yeast::validate_on_history(data.history, data.validation, o);
  EXPECT_LT(robust.result.detection_rate, iid.result.detection_rate);
  EXPECT_LE(robust.result.detection_rate, 0.07);
  EXPECT_GT(robust.variance.value, iid.variance.value);
  EXPECT_LE(robust.result.ci_low, robust.result.detection_rate);
  EXPECT_GE(robust.result.ci_high, robust.result.detection_rate);
}

TEST(Permutation, CapReducesData) {
  yeast::ClusteredSynthConfig sc;
  sc.n_subjects = 300;
  const auto data = yeast::generate_clustered_synth(sc);
  yeast::HistoryValidationOptions o;
  o.replications = 100;
  o.cap_percentile = 0.9;
  const auto r = yeast::validate_on_history(data.history, data.validation, o);
  ASSERT_TRUE(r.cap.has_value());
  EXPECT_LT(r.history_events, static_cast<std::int64_t>(data.history.size()));
}
