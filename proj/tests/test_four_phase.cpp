#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "vga/errors.hpp"
#include "vga/four_phase.hpp"

using namespace vga;
using vga::testing::table1;

namespace {

constexpr double kPublished = 2e-3;

std::shared_ptr<const Dataset> shared_table1() { return std::make_shared<const Dataset>(table1()); }

void expect_same(const VgaAssessment& a, const VgaAssessment& b, double tol) {
  auto near = [&](const std::vector<double>& x, const std::vector<double>& y) {
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(x[k], y[k], tol);
  };
  near(a.step1.intensities, b.step1.intensities);
  near(a.step1.input_slack_ratios, b.step1.input_slack_ratios);
  near(a.step1.output_slack_ratios, b.step1.output_slack_ratios);
  near(a.step1.input_prices, b.step1.input_prices);
  near(a.step1.output_prices, b.step1.output_prices);
  near(a.input_prices, b.input_prices);
  near(a.output_prices, b.output_prices);
  near(a.target_inputs, b.target_inputs);
  near(a.target_outputs, b.target_outputs);
  EXPECT_NEAR(a.step1.sic_price, b.step1.sic_price, tol);
  EXPECT_NEAR(a.sic_price, b.sic_price, tol);
  EXPECT_NEAR(a.gamma, b.gamma, tol);
  EXPECT_NEAR(a.t, b.t, tol);
  EXPECT_NEAR(a.efficiency(), b.efficiency(), tol);
  EXPECT_NEAR(a.decomposition.technical_efficiency, b.decomposition.technical_efficiency, tol);
  EXPECT_NEAR(a.decomposition.scale_efficiency, b.decomposition.scale_efficiency, tol);
  EXPECT_NEAR(a.decomposition.best_returns, b.decomposition.best_returns, tol);
  EXPECT_EQ(a.peers, b.peers);
}

class SessionK : public ::testing::Test {
 protected:
  Phase4Session s = Phase4Session::start(shared_table1(), "K");
};

}  // namespace

TEST(Phase1, SicScalarOfK) {
  const auto r = phase1(table1(), "K");
  EXPECT_NEAR(r.kappa1, 1.5153, 1e-4);
  EXPECT_NEAR(r.kappa1, r.pte.intensity("B") + r.pte.intensity("D"), 1e-12);
}

TEST(Phase1, BestPeerBenchmarksItself) {
  const auto r = phase1(table1(), "B");
  EXPECT_NEAR(r.pte.efficiency(), 1.0, 1e-9);
  EXPECT_NEAR(r.kappa1, 1.0, 1e-9);
  EXPECT_NEAR(r.pte.intensity("B"), 1.0, 1e-9);
}

TEST(Phase1, ExcludingAPeerChangesTheScalar) {
  const auto d = table1();
  const auto before = phase1(d, "K");
  const auto after = phase1(exclude_dmus(d, {"B"}), "K");
  EXPECT_NE(before.pte.peers, after.pte.peers);
  EXPECT_GT(std::abs(before.kappa1 - after.kappa1), 1e-6);
}

TEST_F(SessionK, Phase2Relationships) {
  const auto& p2 = s.phase2();
  EXPECT_NEAR(p2.ste1.efficiency(), 0.411, kPublished);
  EXPECT_LT(p2.ste1.efficiency(), s.phase1().pte.efficiency());
  EXPECT_NEAR(p2.ste1.step1.total_slack_price, 2.3010, 1e-4);
  EXPECT_TRUE(p2.same_slack_ratios);
  EXPECT_TRUE(p2.same_slack_price);
  EXPECT_TRUE(p2.intensity_sum_matches);
  EXPECT_TRUE(p2.prices_differ);
  EXPECT_EQ(p2.direction, ScalarDirection::decrease);
  EXPECT_GT(p2.ste1.sic_price, 0.0);
}

TEST(Phase2, EfficientUnitStaysEfficient) {
  const auto d = table1();
  const auto p1 = phase1(d, "B");
  const auto p2 = phase2(d, "B", p1);
  EXPECT_NEAR(p2.ste1.efficiency(), 1.0, 1e-9);
  EXPECT_TRUE(std::isfinite(p2.ste1.sic_price));
  const auto p3 = phase3(d, "B", p1, p2);
  EXPECT_TRUE(p3.interval.contains(p1.kappa1));
}

TEST_F(SessionK, Phase3Ranging) {
  const auto& p3 = s.phase3();
  EXPECT_NEAR(s.kappa2(), 0.5150, 1e-4);
  EXPECT_NEAR(p3.range.allowable_decrease, 1.0003, 1e-4);
  EXPECT_NEAR(s.interval().lower, s.kappa2(), 0.0);
  EXPECT_NEAR(s.interval().upper, s.kappa1(), 0.0);
  EXPECT_FALSE(s.interval().lower_open);
  EXPECT_FALSE(s.interval().upper_open);
  EXPECT_NEAR(p3.ste2.intensity("B"), 0.119, kPublished);
  EXPECT_NEAR(p3.ste2.intensity("D"), 0.396, kPublished);
  EXPECT_EQ(p3.ste2.peers, (std::vector<std::string>{"B", "D"}));
  EXPECT_NEAR(p3.ste2.step1.sic_price, 1.6362, 1e-4);
  EXPECT_NEAR(s.phase2().ste1.step1.sic_price, 1.6362, 1e-4);
  EXPECT_TRUE(p3.same_peers);
  EXPECT_TRUE(p3.same_step1_prices);
  EXPECT_TRUE(p3.intensities_differ);
  EXPECT_NEAR(p3.ste2.efficiency(), 0.668, kPublished);
  EXPECT_NEAR(p3.ste2.decomposition.scale_efficiency, 0.421, kPublished);
  EXPECT_NEAR(p3.ste2.decomposition.best_returns, 1.497, kPublished);
}

TEST_F(SessionK, WhatIfInsideInterval) {
  const auto r = s.what_if(1.0);
  ASSERT_TRUE(r.accepted());
  const auto& a = r.trial->assessment;
  EXPECT_NEAR(a.efficiency(), 0.508, kPublished);
  EXPECT_NEAR(a.intensity("B"), 0.75, kPublished);
  EXPECT_NEAR(a.intensity("D"), 0.25, kPublished);
  EXPECT_NEAR(a.target_inputs[0], 1.225, kPublished);
  EXPECT_NEAR(a.target_inputs[1], 91.90, 0.01);
  EXPECT_NEAR(a.target_outputs[0], 1036, 1e-9);
  EXPECT_NEAR(a.target_outputs[1], 91.00, 0.01);
  EXPECT_NEAR(a.gamma, 0.412, kPublished);
  ASSERT_EQ(s.what_if_log().size(), 1u);
  EXPECT_EQ(s.what_if_log()[0].kappa, 1.0);
}

TEST_F(SessionK, WhatIfOutsideIntervalIsRejected) {
  const auto r = s.what_if(2.0);
  EXPECT_FALSE(r.accepted());
  EXPECT_EQ(r.outcome, Outcome::outside_interval);
  EXPECT_EQ(r.reason, "outside feasible interval");
  EXPECT_FALSE(r.trial);
  EXPECT_TRUE(s.what_if_log().empty());
  EXPECT_FALSE(s.what_if(0.1).accepted());
  EXPECT_FALSE(s.what_if(std::nan("")).accepted());
  EXPECT_FALSE(s.what_if(-1.0).accepted());
}

TEST_F(SessionK, WhatIfAtKappa1ReproducesPhase2) {
  const auto r = s.what_if(s.kappa1());
  ASSERT_TRUE(r.accepted());
  expect_same(r.trial->assessment, s.phase2().ste1, 1e-9);
}

TEST_F(SessionK, WhatIfAtKappa2ReproducesPhase3) {
  const auto r = s.what_if(s.kappa2());
  ASSERT_TRUE(r.accepted());
  expect_same(r.trial->assessment, s.phase3().ste2, 1e-9);
}

TEST_F(SessionK, LogIsAppendOnly) {
  s.what_if(1.0);
  s.what_if(2.0);
  s.what_if(0.8);
  ASSERT_EQ(s.what_if_log().size(), 2u);
  EXPECT_EQ(s.what_if_log()[0].kappa, 1.0);
  EXPECT_EQ(s.what_if_log()[1].kappa, 0.8);
}

TEST_F(SessionK, BasisPersistsInsideInterval) {
  const auto& p2 = s.phase2();
  for (int k = 1; k < 20; ++k) {
    const double kappa = s.interval().lower + (s.interval().upper - s.interval().lower) * k / 20.0;
    const auto r = s.what_if(kappa);
    ASSERT_TRUE(r.accepted());
    EXPECT_EQ(r.trial->assessment.peers, p2.ste1.peers) << kappa;
    EXPECT_NEAR(r.trial->assessment.step1.sic_price, p2.ste1.step1.sic_price, 1e-9);
  }
}

TEST_F(SessionK, DirectionLaw) {
  const auto lo = s.what_if(s.interval().lower);
  const auto hi = s.what_if(s.interval().upper);
  ASSERT_TRUE(lo.accepted() && hi.accepted());
  const double dE = hi.trial->assessment.efficiency() - lo.trial->assessment.efficiency();
  EXPECT_LT(dE, 0.0);
  EXPECT_GT(s.phase2().ste1.sic_price, 0.0);
}

TEST_F(SessionK, FinalizeOnce) {
  auto copy = s;
  const auto r = s.finalize(1.0);
  ASSERT_TRUE(r.accepted());
  EXPECT_TRUE(s.finalized());
  const auto& a = s.final_choice()->assessment;
  EXPECT_NEAR(a.efficiency(), 0.508, kPublished);
  EXPECT_NEAR(a.decomposition.scale_efficiency, 0.552, kPublished);
  EXPECT_NEAR(a.decomposition.best_returns, 1.969, kPublished);
  EXPECT_EQ(s.finalize(1.0).outcome, Outcome::already_finalized);
  EXPECT_EQ(s.what_if(1.0).outcome, Outcome::already_finalized);
  EXPECT_NEAR(s.final_choice()->kappa, 1.0, 0.0);

  const auto at2 = copy.finalize(copy.kappa2());
  ASSERT_TRUE(at2.accepted());
  EXPECT_NEAR(at2.trial->assessment.efficiency(), 0.668, kPublished);
  auto other = Phase4Session::start(shared_table1(), "K");
  EXPECT_EQ(other.finalize(0.1).outcome, Outcome::outside_interval);
  EXPECT_FALSE(other.finalized());
}

TEST_F(SessionK, ExcludeAndRerun) {
  s.what_if(1.0);
  const auto next = s.exclude_and_rerun({"D"});
  EXPECT_EQ(next.dataset().n(), 5u);
  EXPECT_EQ(next.full_dataset().n(), 6u);
  EXPECT_EQ(next.excluded(), (std::set<std::string>{"D"}));
  EXPECT_EQ(next.round(), 1u);
  ASSERT_EQ(next.history().size(), 1u);
  EXPECT_EQ(next.history()[0]->what_if_log().size(), 1u);
  EXPECT_TRUE(next.what_if_log().empty());
  EXPECT_EQ(std::count(next.phase1().pte.peers.begin(), next.phase1().pte.peers.end(), "D"), 0);
  const auto direct = phase1(exclude_dmus(table1(), {"D"}), "K");
  EXPECT_EQ(next.phase1().pte.peers, direct.pte.peers);
  EXPECT_NEAR(next.kappa1(), direct.kappa1, 1e-12);
  EXPECT_EQ(s.dataset().n(), 6u);

  // A second round would leave four units for four indices.
  EXPECT_TRUE(next.peers().contains("G"));
  EXPECT_THROW(next.exclude_and_rerun({"G"}), ValidationError);
}

TEST_F(SessionK, ExcludeEdgeCases) {
  const auto same = s.exclude_and_rerun({});
  EXPECT_EQ(same.round(), 0u);
  EXPECT_EQ(same.kappa1(), s.kappa1());
  EXPECT_EQ(same.kappa2(), s.kappa2());
  EXPECT_EQ(same.excluded(), s.excluded());
  EXPECT_THROW(s.exclude_and_rerun({"A"}), ValidationError);
  EXPECT_THROW(s.exclude_and_rerun({"K"}), ValidationError);
  EXPECT_THROW(s.exclude_and_rerun({"Z"}), ValidationError);
}

TEST(Session, StartValidation) {
  EXPECT_THROW(Phase4Session::start(nullptr, "K"), std::invalid_argument);
  EXPECT_THROW(Phase4Session::start(shared_table1(), "K", {"K"}), ValidationError);
  EXPECT_THROW(Phase4Session::start(shared_table1(), "Z"), ValidationError);
}

TEST(Session, DirectionNames) {
  EXPECT_EQ(to_string(ScalarDirection::decrease), "decrease");
  EXPECT_EQ(to_string(Outcome::outside_interval), "outside feasible interval");
}

TEST(Interval, Contains) {
  KappaInterval iv{0.5, 1.5, false, false};
  EXPECT_TRUE(iv.contains(0.5));
  EXPECT_TRUE(iv.contains(1.5));
  EXPECT_TRUE(iv.contains(1.5 + 1e-12));
  EXPECT_FALSE(iv.contains(1.6));
  EXPECT_FALSE(iv.collapsed());
  KappaInterval point{1.0, 1.0, false, false};
  EXPECT_TRUE(point.collapsed());
  EXPECT_TRUE(point.contains(1.0));
  EXPECT_FALSE(point.contains(1.01));
}
