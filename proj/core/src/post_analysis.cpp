#include "vga/post_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vga {

namespace {

int quadrant_of(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0;
  if (x > 0.0) return y > 0.0 ? 1 : 4;
  return y > 0.0 ? 2 : 3;
}

GeometryPoint make_point(std::string id, double x, double y, PointKind kind) {
  return {std::move(id), x, y, kind, quadrant_of(x, y)};
}

}  // namespace

Decomposition decompose(const VgaAssessment& a) {
  const auto& nv = a.normalized;
  Decomposition dc;
  dc.inefficiency = nv.gap_price / nv.affected_input;
  dc.efficiency = nv.affected_output / nv.affected_input;
  const double technical_gap = nv.input - nv.output;
  dc.technical_inefficiency = technical_gap / nv.affected_input;
  dc.technical_gap_ratio = technical_gap / nv.input;
  dc.technical_efficiency = 1.0 - dc.technical_inefficiency;
  dc.scale_efficiency = nv.scalar_price / nv.affected_input;
  dc.best_returns = brtp(a);
  dc.scale_class = rts_classify(a);
  return dc;
}

double brtp(const VgaAssessment& a) {
  const auto& nv = a.normalized;
  return (nv.affected_target_output / nv.affected_output) / (nv.affected_target_input / nv.affected_input);
}

ScaleClass rts_classify(const VgaAssessment& a, double tol) {
  if (!a.kind().is_stea()) return ScaleClass::not_applicable;
  if (a.sic_price > tol) return ScaleClass::decreasing;
  if (a.sic_price < -tol) return ScaleClass::increasing;
  return ScaleClass::constant;
}

std::string to_string(Frame f) { return f == Frame::pte ? "pte" : "ste"; }

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::peer: return "peer";
    case PointKind::unit: return "dmu";
    case PointKind::assessed: return "assessed";
    case PointKind::target: return "target";
    case PointKind::anchor: return "anchor";
    case PointKind::origin: return "origin";
  }
  return "unknown";
}

Geometry geometry(const Dataset& d, const VgaAssessment& a, Frame frame) {
  Geometry g;
  g.frame = a.kind().is_stea() ? frame : Frame::pte;
  const bool affected = g.frame == Frame::ste;
  const double w = affected ? a.sic_price : 0.0;
  const double omega = affected ? a.normalized.scalar_price : 0.0;

  for (std::size_t j = 0; j < d.n(); ++j) {
    const auto& rec = d.dmus()[j];
    double x = std::inner_product(a.input_prices.begin(), a.input_prices.end(), rec.inputs.begin(), 0.0);
    double y = std::inner_product(a.output_prices.begin(), a.output_prices.end(), rec.outputs.begin(), 0.0);
    x += (1.0 - a.gamma) * w;
    y -= a.gamma * w;
    const bool peer = std::find(a.peers.begin(), a.peers.end(), rec.id) != a.peers.end();
    g.points.push_back(make_point(rec.id, x, y, peer ? PointKind::peer : PointKind::unit));
  }

  const auto& nv = a.normalized;
  if (affected) {
    g.assessed = make_point("K", nv.affected_input, nv.affected_output, PointKind::assessed);
    g.target = make_point("T", nv.affected_target_input, nv.affected_target_output, PointKind::target);
  } else {
    g.assessed = make_point("K", nv.input, nv.output, PointKind::assessed);
    g.target = make_point("T", nv.target_input, nv.target_output, PointKind::target);
  }
  g.anchor = make_point("AP", (1.0 - a.gamma) * omega, -a.gamma * omega, PointKind::anchor);

  auto vec = [](const GeometryPoint& from, const GeometryPoint& to, std::string label) {
    return GeometryVector{from.id, to.id, std::move(label), to.x - from.x, to.y - from.y};
  };
  const auto origin = make_point("O", 0.0, 0.0, PointKind::origin);
  g.vectors.push_back(vec(origin, g.assessed, "relative"));
  g.vectors.push_back(vec(origin, g.anchor, "scale"));
  g.vectors.push_back(vec(g.anchor, g.assessed, "technical"));
  return g;
}

double Geometry::vector_identity_residual(const VgaAssessment& a) const {
  // O->K minus O->AP lands on (v*·x_o, u*·y_o); AP->K has the same components.
  const auto& ok = vectors.at(0);
  const auto& apo = vectors.at(1);
  const auto& apk = vectors.at(2);
  const double ex = ok.dx - apo.dx;
  const double ey = ok.dy - apo.dy;
  double r = std::max(std::abs(ex - a.normalized.input), std::abs(ey - a.normalized.output));
  r = std::max(r, std::max(std::abs(ex - apk.dx), std::abs(ey - apk.dy)));
  return r;
}

// With no slack on one side the side's share of omega is spread evenly, so
// the per-index prices still add up to the affected totals.
Interlinkage interlinkage(const Dataset& d, const VgaAssessment& a) {
  Interlinkage out;
  const auto& s1 = a.step1;
  const double omega = a.normalized.scalar_price;
  const double sum_q = s1.slack_sum_inputs();
  const double sum_p = s1.slack_sum_outputs();
  for (std::size_t i = 0; i < d.m(); ++i) {
    IndexShare sh;
    sh.name = d.input_names()[i].name;
    sh.share = (1.0 - a.gamma) * (sum_q > 0.0 ? s1.input_slack_ratios[i] / sum_q : 1.0 / double(d.m()));
    sh.virtual_price = a.input_prices[i] * s1.x_o[i];
    sh.affected_price = sh.virtual_price + sh.share * omega;
    out.inputs.push_back(std::move(sh));
  }
  for (std::size_t r = 0; r < d.s(); ++r) {
    IndexShare sh;
    sh.name = d.output_names()[r].name;
    sh.share = a.gamma * (sum_p > 0.0 ? s1.output_slack_ratios[r] / sum_p : 1.0 / double(d.s()));
    sh.virtual_price = a.output_prices[r] * s1.y_o[r];
    sh.affected_price = sh.virtual_price - sh.share * omega;
    out.outputs.push_back(std::move(sh));
  }
  return out;
}

double Interlinkage::affected_input_sum() const {
  double t = 0.0;
  for (const auto& s : inputs) t += s.affected_price;
  return t;
}

double Interlinkage::affected_output_sum() const {
  double t = 0.0;
  for (const auto& s : outputs) t += s.affected_price;
  return t;
}

}  // namespace vga
