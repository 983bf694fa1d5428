#include <gtest/gtest.h>

#include <numeric>

#include "oracle.hpp"
#include "vga/errors.hpp"
#include "vga/four_phase.hpp"
#include "vga/models.hpp"

using namespace vga;
using vga::testing::table1;

namespace {

constexpr double kPublished = 2e-3;
constexpr double kKappa1 = 1.5153064952144;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

class ModelsK : public ::testing::Test {
 protected:
  Dataset d = table1();
  VgaAssessment pte = assess(d, "K", ProgramKind::pte());
  Phase1Result p1{pte, pte.step1.intensity_sum()};
  Phase2Result p2 = phase2(d, "K", p1);
  VgaAssessment ste1 = p2.ste1;
  VgaAssessment ste2 = phase3(d, "K", p1, p2).ste2;
};

}  // namespace

TEST(BuildTsp, Dimensions) {
  const auto d = table1();
  const auto p = build_tsp(d, "K", ProgramKind::pte());
  EXPECT_EQ(p.num_vars(), 10u);
  EXPECT_EQ(p.num_rows(), 4u);
  const auto q = build_tsp(d, "K", ProgramKind::stea(1.5153));
  EXPECT_EQ(q.num_vars(), 10u);
  EXPECT_EQ(q.num_rows(), 5u);
  EXPECT_DOUBLE_EQ(q.rows[sic_row(d)].rhs, 1.5153);
  EXPECT_EQ(sic_row(d), 4u);
  EXPECT_DOUBLE_EQ(q.rows[2].rhs, -1036.0);
}

TEST(BuildTsp, RejectsZeroValuesOfAssessedUnit) {
  auto d = table1();
  auto rows = d.dmus();
  rows[0].inputs[0] = 0.0;
  const Dataset z(d.input_names(), d.output_names(), rows);
  EXPECT_THROW(build_tsp(z, "K", ProgramKind::pte()), AssessmentError);
  EXPECT_NO_THROW(build_tsp(z, "A", ProgramKind::pte()));
}

TEST(BuildTsp, ProgramKindValidation) {
  EXPECT_THROW(ProgramKind::stea(0.0), std::invalid_argument);
  EXPECT_THROW(ProgramKind::stea(-1.0), std::invalid_argument);
  EXPECT_TRUE(ProgramKind::stea(1.0).is_stea());
  EXPECT_FALSE(ProgramKind::pte().is_stea());
}

TEST_F(ModelsK, PteStepOne) {
  const auto& s = pte.step1;
  EXPECT_NEAR(s.total_slack_price, 2.3010, 1e-4);
  EXPECT_NEAR(s.total_gap_price, s.total_slack_price, 1e-7);
  EXPECT_NEAR(s.input_slack_ratios[0], 0.0, 1e-9);
  EXPECT_NEAR(s.input_slack_ratios[1], 0.5334, 1e-4);
  EXPECT_NEAR(s.output_slack_ratios[0], 0.0, 1e-9);
  EXPECT_NEAR(s.output_slack_ratios[1], 1.7677, 1e-4);
  EXPECT_NEAR(pte.intensity("B"), 1.421, kPublished);
  EXPECT_NEAR(pte.intensity("D"), 0.094, kPublished);
  EXPECT_NEAR(s.input_prices[0], 2.8713, 1e-4);
  EXPECT_NEAR(s.input_prices[1], 0.0069, 1e-4);
  EXPECT_NEAR(s.output_prices[0], 0.0022, 1e-4);
  EXPECT_NEAR(s.output_prices[1], 0.0204, 1e-4);
  EXPECT_EQ(s.sic_price, 0.0);
}

TEST_F(ModelsK, Ste1StepOne) {
  const auto& s = ste1.step1;
  EXPECT_EQ(s.input_slack_ratios, pte.step1.input_slack_ratios);
  EXPECT_NEAR(s.output_slack_ratios[1], 1.7677, 1e-4);
  EXPECT_NEAR(s.intensity_sum(), kKappa1, 1e-9);
  EXPECT_NEAR(s.input_prices[0], 0.6250, 1e-4);
  EXPECT_NEAR(s.input_prices[1], 0.0069, 1e-4);
  EXPECT_NEAR(s.output_prices[0], 0.0011, 1e-4);
  EXPECT_NEAR(s.output_prices[1], 0.0204, 1e-4);
  EXPECT_NEAR(s.sic_price, 1.6362, 1e-4);
}

TEST_F(ModelsK, Ste2StepOne) {
  const auto& s = ste2.step1;
  EXPECT_NEAR(s.input_slack_ratios[0], 0.4554, 1e-4);
  EXPECT_NEAR(s.input_slack_ratios[1], 0.2089, 1e-4);
  EXPECT_NEAR(s.output_slack_ratios[0], 0.0, 1e-9);
  EXPECT_NEAR(s.output_slack_ratios[1], 0.0, 1e-9);
  EXPECT_NEAR(ste2.intensity("B"), 0.119, kPublished);
  EXPECT_NEAR(ste2.intensity("D"), 0.396, kPublished);
  EXPECT_NEAR(s.total_slack_price, 0.6643, 1e-4);
  EXPECT_NEAR(s.sic_price, 1.6362, 1e-4);
}

TEST(Gamma, Examples) {
  StepISolution s;
  s.kind = ProgramKind::stea(1.5153);
  s.sic_price = 1.6362;
  s.input_slack_ratios = {0.0, 0.5334};
  s.output_slack_ratios = {0.0, 1.7677};
  EXPECT_NEAR(compute_gamma(s), 0.232, kPublished);
  s.kind = ProgramKind::stea(0.5150);
  s.input_slack_ratios = {0.4554, 0.2089};
  s.output_slack_ratios = {0.0, 0.0};
  EXPECT_NEAR(compute_gamma(s), 1.0, 1e-12);
  s.sic_price = 0.0;
  EXPECT_DOUBLE_EQ(compute_gamma(s), 0.5);
  s.sic_price = 1.0;
  s.input_slack_ratios = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(compute_gamma(s), 0.5);
  s.kind = ProgramKind::pte();
  s.input_slack_ratios = {0.1, 0.2};
  s.output_slack_ratios = {0.3, 0.0};
  EXPECT_DOUBLE_EQ(compute_gamma(s), 0.5);
}

TEST_F(ModelsK, NormalizedPte) {
  EXPECT_NEAR(pte.t, 0.179, kPublished);
  EXPECT_NEAR(pte.tau_star(), pte.t, 0.0);
  EXPECT_NEAR(pte.normalized.gap_price, 0.4113, 1e-4);
  EXPECT_NEAR(pte.normalized.input, 1.0, 1e-9);
  EXPECT_NEAR(pte.normalized.output, 0.589, kPublished);
  EXPECT_NEAR(pte.efficiency(), 0.589, kPublished);
  EXPECT_NEAR(pte.input_prices[0], 0.5133, 1e-4);
  EXPECT_NEAR(pte.output_prices[1], 0.0036, 1e-4);
}

TEST_F(ModelsK, NormalizedSte1) {
  EXPECT_NEAR(ste1.gamma, 0.232, kPublished);
  EXPECT_NEAR(ste1.t, 0.256, kPublished);
  EXPECT_NEAR(ste1.normalized.gap_price, 0.5893, 1e-4);
  EXPECT_NEAR(ste1.normalized.affected_input, 1.0, 1e-9);
  EXPECT_NEAR(ste1.normalized.affected_output, 0.411, kPublished);
  EXPECT_NEAR(ste1.efficiency(), 0.411, kPublished);
  EXPECT_NEAR(ste1.normalized.scalar_price, 0.635, kPublished);
  EXPECT_NEAR(ste1.sic_price, 0.4190, 1e-4);
  EXPECT_NEAR(ste1.interim.scalar_price, 2.479, kPublished);
  EXPECT_NEAR(ste1.interim.affected_input, 3.905, kPublished);
  EXPECT_NEAR(ste1.interim.affected_output, 1.604, kPublished);
}

TEST_F(ModelsK, NormalizedSte2) {
  EXPECT_NEAR(ste2.t, 0.5, kPublished);
  EXPECT_NEAR(ste2.efficiency(), 0.668, kPublished);
  EXPECT_NEAR(ste2.normalized.scalar_price, 0.421, kPublished);
  EXPECT_NEAR(ste2.gamma, 1.0, 1e-12);
}

TEST_F(ModelsK, Targets) {
  const auto t = compute_targets(pte);
  EXPECT_NEAR(t.inputs[0], 1.6, 1e-9);
  EXPECT_NEAR(t.inputs[1], 67.66, 0.01);
  EXPECT_NEAR(t.outputs[0], 1036, 1e-9);
  EXPECT_NEAR(t.outputs[1], 135.6, 0.05);
  const auto t2 = compute_targets(ste2);
  EXPECT_NEAR(t2.inputs[0], 0.8713, 1e-4);
  EXPECT_NEAR(t2.inputs[1], 114.72, 0.01);
  EXPECT_NEAR(t2.outputs[1], 49.0, 1e-9);
  for (const auto* a : {&pte, &ste1, &ste2}) {
    const auto pt = peer_targets(d, *a);
    const auto ct = compute_targets(*a);
    for (std::size_t i = 0; i < d.m(); ++i) EXPECT_NEAR(pt.inputs[i], ct.inputs[i], 1e-7 * ct.inputs[i]);
    for (std::size_t r = 0; r < d.s(); ++r) EXPECT_NEAR(pt.outputs[r], ct.outputs[r], 1e-7 * ct.outputs[r]);
    EXPECT_EQ(a->target_inputs, ct.inputs);
  }
}

TEST(Targets, EfficientUnitKeepsItsData) {
  const auto d = table1();
  const auto b = assess(d, "B", ProgramKind::pte());
  EXPECT_NEAR(b.efficiency(), 1.0, 1e-9);
  const auto t = compute_targets(b);
  for (std::size_t i = 0; i < d.m(); ++i) EXPECT_NEAR(t.inputs[i], d.dmu("B").inputs[i], 1e-9);
  for (std::size_t r = 0; r < d.s(); ++r) EXPECT_NEAR(t.outputs[r], d.dmu("B").outputs[r], 1e-9);
}

TEST_F(ModelsK, BoundaryEfficiency) {
  EXPECT_NEAR(pte.normalized.target_input, 0.905, kPublished);
  EXPECT_NEAR(pte.normalized.target_output, 0.905, kPublished);
  EXPECT_NEAR(boundary_efficiency(pte), 1.0, 1e-7);
  EXPECT_NEAR(ste1.normalized.affected_target_input, 0.863, kPublished);
  EXPECT_NEAR(ste1.normalized.affected_target_output, 0.863, kPublished);
  EXPECT_NEAR(boundary_efficiency(ste1), 1.0, 1e-7);
  EXPECT_NEAR(ste2.normalized.affected_target_input, 0.668, kPublished);
}

TEST_F(ModelsK, DualityCertificates) {
  for (const auto* a : {&pte, &ste1, &ste2}) {
    const auto r = verify_duality(d, *a);
    EXPECT_TRUE(r.passed()) << a->kind().sic_scalar;
    EXPECT_LE(r.max_residual(), 1e-7);
    EXPECT_GE(r.checks.size(), 8u);
  }
  for (const char* id : {"B", "D"}) {
    const auto& u = d.dmu(id);
    EXPECT_NEAR(dot(pte.input_prices, u.inputs) - dot(pte.output_prices, u.outputs), 0.0, 1e-9);
    EXPECT_NEAR(dot(ste1.input_prices, u.inputs) - dot(ste1.output_prices, u.outputs) + ste1.sic_price, 0.0, 1e-9);
  }
  EXPECT_NEAR(pte.input_prices[1] * 145.0, pte.tau_star(), 1e-9);
  EXPECT_NEAR(pte.tau_star(), 0.179, kPublished);
}

TEST_F(ModelsK, DualityReportFlagsTamperedPrices) {
  auto bad = pte;
  bad.input_prices[0] *= 1.5;
  const auto r = verify_duality(d, bad);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.max_residual(), 1e-3);
}

TEST_F(ModelsK, GoalPrices) {
  EXPECT_NEAR(pte.input_goal_prices[0], pte.t / 1.6, 1e-12);
  EXPECT_NEAR(pte.output_goal_prices[1], pte.t / 49.0, 1e-12);
  for (std::size_t i = 0; i < d.m(); ++i) EXPECT_GE(pte.input_prices[i], pte.input_goal_prices[i] - 1e-12);
}

TEST(Assess, InfeasibleScalarIsAnAssessmentError) {
  const auto d = table1();
  EXPECT_THROW(assess(d, "K", ProgramKind::stea(2.0)), AssessmentError);
  EXPECT_THROW(assess(d, "nope", ProgramKind::pte()), ValidationError);
}

TEST(Assess, WarmStartFallsBackToColdSolve) {
  const auto d = table1();
  const auto ste = solve_step1(d, "K", ProgramKind::stea(1.0));
  const auto pte = solve_step1(d, "K", ProgramKind::pte());
  const auto warm = solve_step1_from_basis(d, "K", ProgramKind::stea(1.0), pte.solution.basis);
  EXPECT_NEAR(warm.total_slack_price, ste.total_slack_price, 1e-9);
}
