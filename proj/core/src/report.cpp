#include "vga/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace vga {

namespace {

Json values(const VirtualValues& v) {
  return {{"input", v.input},
          {"output", v.output},
          {"scalar_price", v.scalar_price},
          {"affected_input", v.affected_input},
          {"affected_output", v.affected_output},
          {"target_input", v.target_input},
          {"target_output", v.target_output},
          {"affected_target_input", v.affected_target_input},
          {"affected_target_output", v.affected_target_output},
          {"slack_price", v.slack_price},
          {"gap_price", v.gap_price}};
}

Json point(const GeometryPoint& p) {
  return {{"id", p.id}, {"x", p.x}, {"y", p.y}, {"kind", to_string(p.kind)}, {"quadrant", p.quadrant}};
}

Json labels(const std::vector<IndexLabel>& ls) {
  Json out = Json::array();
  for (const auto& l : ls) out.push_back({{"name", l.name}, {"unit", l.unit}});
  return out;
}

Json trial(const Dataset& d, const ScalarTrial& t) {
  return {{"kappa", t.kappa}, {"report", assessment_report(d, t.assessment)}};
}

Json bound(double v) { return std::isinf(v) ? Json(nullptr) : Json(v); }

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", kCsvDecimals, v);
  return buf;
}

}  // namespace

double round_significant(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

Json rounded(Json j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    return std::isfinite(v) ? Json(round_significant(v)) : Json(nullptr);
  }
  if (j.is_structured())
    for (auto& el : j) el = rounded(std::move(el));
  return j;
}

Json to_json(const Decomposition& dc) {
  return {{"efficiency", dc.efficiency},
          {"inefficiency", dc.inefficiency},
          {"technical_efficiency", dc.technical_efficiency},
          {"technical_inefficiency", dc.technical_inefficiency},
          {"technical_gap_ratio", dc.technical_gap_ratio},
          {"scale_efficiency", dc.scale_efficiency},
          {"best_returns", dc.best_returns},
          {"scale_class", to_string(dc.scale_class)}};
}

Json to_json(const Geometry& g) {
  Json pts = Json::array();
  for (const auto& p : g.points) pts.push_back(point(p));
  Json vecs = Json::array();
  for (const auto& v : g.vectors)
    vecs.push_back({{"from", v.from}, {"to", v.to}, {"label", v.label}, {"dx", v.dx}, {"dy", v.dy}});
  return {{"frame", to_string(g.frame)},
          {"points", std::move(pts)},
          {"assessed", point(g.assessed)},
          {"target", point(g.target)},
          {"anchor", point(g.anchor)},
          {"boundary", "diagonal"},
          {"vectors", std::move(vecs)}};
}

Json to_json(const Interlinkage& il) {
  auto side = [](const std::vector<IndexShare>& xs) {
    Json out = Json::array();
    for (const auto& s : xs)
      out.push_back({{"name", s.name},
                     {"share", s.share},
                     {"virtual_price", s.virtual_price},
                     {"affected_price", s.affected_price}});
    return out;
  };
  return {{"inputs", side(il.inputs)},
          {"outputs", side(il.outputs)},
          {"affected_input_sum", il.affected_input_sum()},
          {"affected_output_sum", il.affected_output_sum()}};
}

Json to_json(const DualityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}});
  return {{"passed", r.passed()}, {"max_residual", r.max_residual()}, {"checks", std::move(checks)}};
}

Json assessment_report(const Dataset& d, const VgaAssessment& a) {
  const auto& s1 = a.step1;
  Json intensities = Json::object();
  for (std::size_t j = 0; j < s1.dmu_ids.size(); ++j) intensities[s1.dmu_ids[j]] = s1.intensities[j];

  Json step1 = {{"tau", s1.tau},
                {"input_slack_ratios", s1.input_slack_ratios},
                {"output_slack_ratios", s1.output_slack_ratios},
                {"intensities", std::move(intensities)},
                {"input_prices", s1.input_prices},
                {"output_prices", s1.output_prices},
                {"sic_price", s1.sic_price},
                {"total_slack_price", s1.total_slack_price},
                {"total_gap_price", s1.total_gap_price},
                {"degenerate", s1.degenerate},
                {"virtual", values(a.interim)}};
  Json step2 = {{"tau", a.tau_star()},
                {"input_prices", a.input_prices},
                {"output_prices", a.output_prices},
                {"sic_price", a.sic_price},
                {"virtual", values(a.normalized)}};

  const Frame frame = a.kind().is_stea() ? Frame::ste : Frame::pte;
  const auto g = geometry(d, a, frame);
  Json geo = to_json(g);
  geo["identity_residual"] = g.vector_identity_residual(a);

  return {{"dmu", a.dmu()},
          {"program", to_string(a.kind().variant)},
          {"kappa", a.kind().is_stea() ? Json(a.kind().sic_scalar) : Json(nullptr)},
          {"input_labels", labels(d.input_names())},
          {"output_labels", labels(d.output_names())},
          {"gamma", a.gamma},
          {"t", a.t},
          {"step1", std::move(step1)},
          {"step2", std::move(step2)},
          {"target_inputs", a.target_inputs},
          {"target_outputs", a.target_outputs},
          {"peers", a.peers},
          {"input_goal_prices", a.input_goal_prices},
          {"output_goal_prices", a.output_goal_prices},
          {"decomposition", to_json(a.decomposition)},
          {"boundary_efficiency", a.boundary_efficiency},
          {"interlinkage", to_json(interlinkage(d, a))},
          {"geometry", std::move(geo)},
          {"duality", to_json(verify_duality(d, a))}};
}

Json geometry_report(const Dataset& d, const VgaAssessment& a, Frame frame) {
  const auto g = geometry(d, a, frame);
  Json out = to_json(g);
  out["dmu"] = a.dmu();
  out["identity_residual"] = g.vector_identity_residual(a);
  return out;
}

Json session_report(const Phase4Session& s) {
  const auto& d = s.dataset();
  const auto& p2 = s.phase2();
  const auto& p3 = s.phase3();
  Json log = Json::array();
  for (const auto& t : s.what_if_log()) log.push_back(trial(d, t));

  return {{"o", s.dmu()},
          {"excluded", s.excluded()},
          {"round", s.round()},
          {"kappa1", s.kappa1()},
          {"kappa2", s.kappa2()},
          {"direction", to_string(s.direction())},
          {"interval",
           {{"lower", p3.interval.lower},
            {"upper", p3.interval.upper},
            {"lower_open", p3.interval.lower_open},
            {"upper_open", p3.interval.upper_open},
            {"collapsed", p3.interval.collapsed()}}},
          {"ranging",
           {{"allowable_decrease", bound(p3.range.allowable_decrease)},
            {"allowable_increase", bound(p3.range.allowable_increase)}}},
          {"phase_reports",
           {{"pte", assessment_report(d, s.phase1().pte)},
            {"ste1", assessment_report(d, p2.ste1)},
            {"ste2", assessment_report(d, p3.ste2)}}},
          {"phase_checks",
           {{"ste1",
             {{"same_slack_ratios", p2.same_slack_ratios},
              {"same_slack_price", p2.same_slack_price},
              {"intensity_sum_matches", p2.intensity_sum_matches},
              {"prices_differ", p2.prices_differ}}},
            {"ste2",
             {{"same_peers", p3.same_peers},
              {"same_step1_prices", p3.same_step1_prices},
              {"intensities_differ", p3.intensities_differ}}}}},
          {"peers", s.peers()},
          {"what_if_log", std::move(log)},
          {"final", s.final_choice() ? trial(d, *s.final_choice()) : Json(nullptr)},
          {"notes",
           {"With w* > 0 the feasible scalars lie below kappa1 (kappa2 < kappa1); the opposite reading of "
            "the interval is treated as an erratum."}}};
}

Json sbm_report(const SbmComparison& c) {
  const auto& r = c.sbm;
  return {{"dmu", c.dmu},
          {"rho", c.rho},
          {"e_rel", c.e_rel},
          {"e_pte", c.e_pte},
          {"goal_ratio", c.goal_ratio},
          {"flagged", c.flagged},
          {"verdict", c.flagged ? "incomplete" : "complete"},
          {"reasons", c.reasons},
          {"sbm",
           {{"t_cc", r.t_cc},
            {"input_slacks", r.input_slacks},
            {"output_slacks", r.output_slacks},
            {"input_slack_ratios", r.input_slack_ratios},
            {"output_slack_ratios", r.output_slack_ratios},
            {"intensities", r.intensities},
            {"input_prices", r.input_prices},
            {"output_prices", r.output_prices},
            {"alpha", r.alpha},
            {"beta", r.beta},
            {"alpha_hat", r.alpha_hat},
            {"beta_hat", r.beta_hat},
            {"goal_ratio_rescaled", r.goal_ratio_rescaled}}}};
}

Json error_report(const std::string& kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

std::string dump_report(Json j) {
  j = rounded(std::move(j));
  if (j.is_object()) j["schema_version"] = kSchemaVersion;
  return j.dump(2) + "\n";
}

std::string assessment_csv(const Dataset& d, const VgaAssessment& a) {
  std::ostringstream os;
  auto row = [&](const std::string& key, double v) { os << key << ',' << fixed(v) << '\n'; };
  const auto& s1 = a.step1;
  const auto& nv = a.normalized;
  const auto& dc = a.decomposition;
  os << "field,value\n";
  os << "dmu," << a.dmu() << '\n';
  os << "program," << to_string(a.kind().variant) << '\n';
  if (a.kind().is_stea()) row("kappa", a.kind().sic_scalar);
  row("delta#", s1.total_slack_price);
  row("w#", s1.sic_price);
  row("gamma", a.gamma);
  row("t", a.t);
  for (std::size_t i = 0; i < d.m(); ++i) row("Q[" + d.input_names()[i].name + "]", s1.input_slack_ratios[i]);
  for (std::size_t r = 0; r < d.s(); ++r) row("P[" + d.output_names()[r].name + "]", s1.output_slack_ratios[r]);
  for (std::size_t j = 0; j < s1.dmu_ids.size(); ++j) row("pi[" + s1.dmu_ids[j] + "]", s1.intensities[j]);
  for (std::size_t i = 0; i < d.m(); ++i) row("v*[" + d.input_names()[i].name + "]", a.input_prices[i]);
  for (std::size_t r = 0; r < d.s(); ++r) row("u*[" + d.output_names()[r].name + "]", a.output_prices[r]);
  row("w*", a.sic_price);
  row("omega*", nv.scalar_price);
  row("alpha_aff*", nv.affected_input);
  row("beta_aff*", nv.affected_output);
  for (std::size_t i = 0; i < d.m(); ++i) row("x_hat[" + d.input_names()[i].name + "]", a.target_inputs[i]);
  for (std::size_t r = 0; r < d.s(); ++r) row("y_hat[" + d.output_names()[r].name + "]", a.target_outputs[r]);
  row("E", dc.efficiency);
  row("F", dc.inefficiency);
  row("T", dc.technical_efficiency);
  row("T_check", dc.technical_inefficiency);
  row("T_dot", dc.technical_gap_ratio);
  row("S", dc.scale_efficiency);
  row("Xi", dc.best_returns);
  row("bE", a.boundary_efficiency);
  os << "scale_class," << to_string(dc.scale_class) << '\n';
  os << "peers,";
  for (std::size_t k = 0; k < a.peers.size(); ++k) os << (k ? ";" : "") << a.peers[k];
  os << '\n';
  return os.str();
}

}  // namespace vga
