#include <gtest/gtest.h>

#include "oracle.hpp"
#include "vga/report.hpp"

using namespace vga;
using vga::testing::table1;

TEST(Report, RoundSignificant) {
  EXPECT_EQ(round_significant(0.0), 0.0);
  EXPECT_EQ(round_significant(1.0 / 3.0), 0.333333333333333);
  EXPECT_EQ(round_significant(123456.7890123456789), 123456.789012346);
  EXPECT_EQ(round_significant(-2.5e-20, 3), -2.5e-20);
  const auto j = rounded(Json{{"a", 1.0 / 3.0}, {"b", {0.1 + 0.2}}, {"c", std::nan("")}, {"d", 3}});
  EXPECT_EQ(j["a"].get<double>(), 0.333333333333333);
  EXPECT_EQ(j["b"][0].get<double>(), 0.3);
  EXPECT_TRUE(j["c"].is_null());
  EXPECT_EQ(j["d"].get<int>(), 3);
}

TEST(Report, AssessmentReportShape) {
  const auto d = table1();
  const auto a = assess(d, "K", ProgramKind::stea(1.0));
  const auto j = Json::parse(dump_report(assessment_report(d, a)));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["dmu"], "K");
  EXPECT_EQ(j["program"], "ste");
  EXPECT_EQ(j["kappa"].get<double>(), 1.0);
  EXPECT_NEAR(j["decomposition"]["efficiency"].get<double>(), 0.508, 2e-3);
  EXPECT_EQ(j["peers"], (Json{"B", "D"}));
  EXPECT_TRUE(j["duality"]["passed"].get<bool>());
  EXPECT_EQ(j["geometry"]["frame"], "ste");
  EXPECT_EQ(j["geometry"]["boundary"], "diagonal");
  EXPECT_EQ(j["geometry"]["points"].size(), 6u);
  EXPECT_TRUE(j["step1"]["intensities"].contains("B"));
  EXPECT_EQ(j["step1"]["tau"].get<double>(), 1.0);
  EXPECT_EQ(j["interlinkage"]["inputs"].size(), 2u);
  EXPECT_EQ(j["input_labels"][1]["unit"], "Hrs");
}

TEST(Report, PteReportHasNullKappa) {
  const auto d = table1();
  const auto j = Json::parse(dump_report(assessment_report(d, assess(d, "K", ProgramKind::pte()))));
  EXPECT_TRUE(j["kappa"].is_null());
  EXPECT_EQ(j["decomposition"]["scale_class"], "not_applicable");
  EXPECT_EQ(j["geometry"]["frame"], "pte");
}

TEST(Report, RoundTripIsByteIdentical) {
  const auto d = table1();
  auto s = Phase4Session::start(std::make_shared<const Dataset>(d), "K");
  s.what_if(1.0);
  s.finalize(0.8);
  for (const auto& text : {dump_report(assessment_report(d, s.phase2().ste1)), dump_report(session_report(s)),
                           dump_report(sbm_report(compare_sbm_vga(d, "K")))}) {
    const auto again = dump_report(Json::parse(text));
    EXPECT_EQ(text, again);
  }
}

TEST(Report, SessionSnapshotShape) {
  auto s = Phase4Session::start(std::make_shared<const Dataset>(table1()), "K");
  s.what_if(1.0);
  const auto j = Json::parse(dump_report(session_report(s)));
  for (const char* key : {"o", "excluded", "kappa1", "kappa2", "interval", "phase_reports", "what_if_log", "final"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_NEAR(j["kappa1"].get<double>(), 1.5153, 1e-4);
  EXPECT_NEAR(j["kappa2"].get<double>(), 0.5150, 1e-4);
  EXPECT_TRUE(j["final"].is_null());
  EXPECT_EQ(j["what_if_log"].size(), 1u);
  EXPECT_EQ(j["direction"], "decrease");
  for (const char* key : {"pte", "ste1", "ste2"}) EXPECT_TRUE(j["phase_reports"].contains(key));
  EXPECT_FALSE(j["notes"].empty());
}

TEST(Report, SbmShape) {
  const auto j = Json::parse(dump_report(sbm_report(compare_sbm_vga(table1(), "K"))));
  for (const char* key : {"rho", "e_rel", "e_pte", "goal_ratio", "flagged"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["flagged"].get<bool>());
  EXPECT_EQ(j["verdict"], "incomplete");
}

TEST(Report, GeometryReportAnchor) {
  const auto d = table1();
  const auto p1 = phase1(d, "K");
  const auto a = phase2(d, "K", p1).ste1;
  const auto j = Json::parse(dump_report(geometry_report(d, a, Frame::ste)));
  EXPECT_NEAR(j["anchor"]["x"].get<double>(), 0.488, 2e-3);
  EXPECT_NEAR(j["anchor"]["y"].get<double>(), -0.147, 2e-3);
  EXPECT_EQ(j["anchor"]["quadrant"], 4);
  EXPECT_EQ(j["vectors"].size(), 3u);
}

TEST(Report, CsvAtFourDecimals) {
  const auto d = table1();
  const auto csv = assessment_csv(d, assess(d, "K", ProgramKind::pte()));
  EXPECT_NE(csv.find("E,0.5887\n"), std::string::npos);
  EXPECT_NE(csv.find("delta#,2.3010\n"), std::string::npos);
  EXPECT_NE(csv.find("Xi,1.6988\n"), std::string::npos);
  EXPECT_NE(csv.find("x_hat[x2],67.6581\n"), std::string::npos);
  EXPECT_NE(csv.find("peers,B;D\n"), std::string::npos);
  EXPECT_EQ(csv.rfind("field,value\n", 0), 0u);
}

TEST(Report, ErrorReport) {
  const auto j = Json::parse(dump_report(error_report("rejected", "outside feasible interval")));
  EXPECT_EQ(j["error"], "rejected");
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
}
