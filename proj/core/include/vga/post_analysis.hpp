#pragma once

#include <string>
#include <vector>

#include "vga/dataset.hpp"
#include "vga/models.hpp"

namespace vga {

Decomposition decompose(const VgaAssessment& a);

/// Best returns to practice: (target output / output) over (target input /
/// input), on affected values for STEa and plain values for PTE.
double brtp(const VgaAssessment& a);

/// Direction of scale change from the sign of w*; not_applicable for PTE.
ScaleClass rts_classify(const VgaAssessment& a, double tol = kScaleSignTol);

enum class Frame { pte, ste };
std::string to_string(Frame f);

enum class PointKind { peer, unit, assessed, target, anchor, origin };
std::string to_string(PointKind k);

struct GeometryPoint {
  std::string id;
  double x = 0.0;  // virtual input coordinate ($)
  double y = 0.0;  // virtual output coordinate ($)
  PointKind kind = PointKind::unit;
  int quadrant = 0;  // 1..4, 0 on an axis
};

struct GeometryVector {
  std::string from;
  std::string to;
  std::string label;
  double dx = 0.0;
  double dy = 0.0;
};

/// Virtual technology set for one assessment. Every DMU is a point; the
/// diagonal through the origin is the best efficiency boundary.
struct Geometry {
  Frame frame = Frame::pte;
  std::vector<GeometryPoint> points;   // one per DMU, in dataset order
  GeometryPoint assessed;              // K: (alpha_aff, beta_aff)
  GeometryPoint target;                // T: (alpha_hat_aff, beta_hat_aff)
  GeometryPoint anchor;                // AP: ((1-gamma)omega, -gamma omega)
  std::vector<GeometryVector> vectors; // O->K, O->AP, AP->K

  /// max coordinate error of O->K - O->AP = AP->K against v·x_o and u·y_o.
  double vector_identity_residual(const VgaAssessment& a) const;
};

/// Frame::ste on a PTE assessment is reported in the PTE frame.
Geometry geometry(const Dataset& d, const VgaAssessment& a, Frame frame);

struct IndexShare {
  std::string name;
  double share = 0.0;          // gamma_i^Q or gamma_r^P
  double virtual_price = 0.0;  // v_i* x_io or u_r* y_ro
  double affected_price = 0.0; // virtual_price +/- share·omega
};

struct Interlinkage {
  std::vector<IndexShare> inputs;
  std::vector<IndexShare> outputs;
  double affected_input_sum() const;
  double affected_output_sum() const;
};

Interlinkage interlinkage(const Dataset& d, const VgaAssessment& a);

}  // namespace vga
