#pragma once

// Total-slack-price programs for one assessed unit: the pure technical (PTE)
// program and its sum-of-intensities variant (STEa), solved at a goal price
// of $1 (Step I) and then rescaled so the affected virtual input is $1
// (Step II).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vga/dataset.hpp"
#include "vga/simplex.hpp"

namespace vga {

inline constexpr double kCsTol = 1e-7;        // complementary slackness / duality checks
inline constexpr double kScaleSignTol = 1e-7;  // |w*| below this asserts no scale direction
inline constexpr double kPeerTol = 1e-9;       // intensity above which a unit counts as a peer

enum class Variant { pte, stea };

struct ProgramKind {
  Variant variant = Variant::pte;
  double sic_scalar = 0.0;  // kappa, only meaningful for STEa

  static ProgramKind pte() { return {}; }
  /// Throws std::invalid_argument unless kappa > 0.
  static ProgramKind stea(double kappa);

  bool is_stea() const noexcept { return variant == Variant::stea; }
  bool operator==(const ProgramKind&) const = default;
};

std::string to_string(Variant v);

/// Step I (goal price tau = $1) optimum of the total-slack-price program.
struct StepISolution {
  std::string dmu;
  ProgramKind kind;
  std::vector<std::string> dmu_ids;  // order of `intensities`
  std::vector<double> x_o;           // assessed unit's inputs
  std::vector<double> y_o;           // assessed unit's outputs

  double tau = 1.0;
  std::vector<double> input_slack_ratios;   // Q
  std::vector<double> output_slack_ratios;  // P
  std::vector<double> intensities;          // pi
  std::vector<double> input_prices;         // v#
  std::vector<double> output_prices;        // u#
  double sic_price = 0.0;                   // w#, zero for PTE
  double total_slack_price = 0.0;           // delta# = sum Q + sum P
  double total_gap_price = 0.0;             // Delta# from the dual objective
  bool degenerate = false;

  lp::LinearProgram program;
  lp::LpSolution solution;

  double slack_sum_inputs() const;
  double slack_sum_outputs() const;
  double intensity_sum() const;
};

/// Virtual (money) aggregates of one step, all in $.
struct VirtualValues {
  double input = 0.0;                   // alpha = v·x_o
  double output = 0.0;                  // beta = u·y_o
  double scalar_price = 0.0;            // omega = kappa·w
  double affected_input = 0.0;          // alpha + (1-gamma)·omega
  double affected_output = 0.0;         // beta - gamma·omega
  double target_input = 0.0;            // v·x_hat
  double target_output = 0.0;           // u·y_hat
  double affected_target_input = 0.0;
  double affected_target_output = 0.0;
  double slack_price = 0.0;             // delta
  double gap_price = 0.0;               // Delta
};

enum class ScaleClass { not_applicable, increasing, constant, decreasing };
std::string to_string(ScaleClass c);

struct Decomposition {
  double efficiency = 0.0;               // E
  double inefficiency = 0.0;             // F
  double technical_inefficiency = 0.0;   // T-check = (v·x - u·y) / alpha_aff
  double technical_gap_ratio = 0.0;      // T-dot   = (v·x - u·y) / v·x
  double technical_efficiency = 0.0;     // T = 1 - T-check
  double scale_efficiency = 0.0;         // S = omega / alpha_aff
  double best_returns = 0.0;             // Xi
  ScaleClass scale_class = ScaleClass::not_applicable;
};

/// Normalized (Step II) assessment plus everything derived from it.
struct VgaAssessment {
  StepISolution step1;
  double gamma = 0.5;
  double t = 0.0;  // dimensionless normalizer; tau* = $t

  std::vector<double> input_prices;   // v*
  std::vector<double> output_prices;  // u*
  double sic_price = 0.0;             // w*

  VirtualValues interim;     // Step I
  VirtualValues normalized;  // Step II

  std::vector<double> target_inputs;   // x_hat
  std::vector<double> target_outputs;  // y_hat
  std::vector<std::string> peers;      // ids with positive intensity
  std::vector<double> input_goal_prices;   // tau*/x_io
  std::vector<double> output_goal_prices;  // tau*/y_ro

  Decomposition decomposition;
  double boundary_efficiency = 0.0;

  const std::string& dmu() const noexcept { return step1.dmu; }
  const ProgramKind& kind() const noexcept { return step1.kind; }
  double tau_star() const noexcept { return t; }
  double efficiency() const noexcept { return decomposition.efficiency; }
  double intensity(std::string_view id) const;
};

/// Variable order: pi_1..pi_n, Q_1..Q_m, P_1..P_s. Rows: m input equalities,
/// s output equalities written as -sum y pi + P y_o = -y_o, then the SIC row
/// for STEa. Throws AssessmentError when the assessed unit has a zero value.
lp::LinearProgram build_tsp(const Dataset& d, std::string_view o, const ProgramKind& kind);
std::size_t sic_row(const Dataset& d);

StepISolution solve_step1(const Dataset& d, std::string_view o, const ProgramKind& kind,
                          const lp::SolverOptions& opts = {});

/// Reads a Step I solution off an optimal solution of build_tsp(d, o, kind).
StepISolution interpret_step1(const Dataset& d, std::string_view o, const ProgramKind& kind,
                              lp::LinearProgram program, lp::LpSolution solution);

/// Solves with `basis` when it is still optimal for this kappa, otherwise
/// falls back to a cold solve.
StepISolution solve_step1_from_basis(const Dataset& d, std::string_view o, const ProgramKind& kind,
                                     const std::vector<std::size_t>& basis,
                                     const lp::SolverOptions& opts = {});

double compute_gamma(const StepISolution& step1);

VgaAssessment normalize_step2(const StepISolution& step1, double gamma);

/// Step I, gamma, Step II in one call.
VgaAssessment assess(const Dataset& d, std::string_view o, const ProgramKind& kind);

struct Targets {
  std::vector<double> inputs;
  std::vector<double> outputs;
};

/// x_hat = x_o(1 - Q), y_hat = y_o(1 + P).
Targets compute_targets(const VgaAssessment& a);
/// Same targets recomposed from the peers' data and intensities.
Targets peer_targets(const Dataset& d, const VgaAssessment& a);

double boundary_efficiency(const VgaAssessment& a);

struct DualityCheck {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct DualityReport {
  std::vector<DualityCheck> checks;
  bool passed() const;
  double max_residual() const;
};

DualityReport verify_duality(const Dataset& d, const VgaAssessment& a, double tol = kCsTol);

}  // namespace vga
