#pragma once

// Constant-returns slack-based measure (Tone), used as a baseline against
// the gap-analysis assessment.

#include <string>
#include <string_view>
#include <vector>

#include "vga/dataset.hpp"
#include "vga/simplex.hpp"

namespace vga {

struct SbmResult {
  std::string dmu;
  double rho = 0.0;   // SBM efficiency
  double t_cc = 0.0;  // Charnes-Cooper normalizer
  std::vector<double> input_slacks;    // q
  std::vector<double> output_slacks;   // p
  std::vector<double> input_slack_ratios;   // q / x_o
  std::vector<double> output_slack_ratios;  // p / y_o
  std::vector<double> intensities;     // lambda
  std::vector<double> input_prices;    // v
  std::vector<double> output_prices;   // u
  double alpha = 0.0;      // v·x_o
  double beta = 0.0;       // u·y_o
  double e_rel = 0.0;      // beta / alpha
  double alpha_hat = 0.0;  // v·(x_o - t_cc q)
  double beta_hat = 0.0;   // u·(y_o + t_cc p)
  double goal_ratio = 0.0;           // beta_hat / alpha_hat
  double goal_ratio_rescaled = 0.0;  // same on x_o - q, y_o + p

  /// (1 - mean q/x_o) / (1 + mean p/y_o) from the returned slacks.
  double rho_from_slacks() const;
};

/// Linearized as: min t - (1/m) sum S-_i/x_io subject to
/// t + (1/s) sum S+_r/y_ro = 1, t x_o = X Lambda + S-, t y_o = Y Lambda - S+.
SbmResult solve_sbm(const Dataset& d, std::string_view o, const lp::SolverOptions& opts = {});

struct SbmComparison {
  std::string dmu;
  double rho = 0.0;
  double e_rel = 0.0;
  double e_pte = 0.0;
  double goal_ratio = 0.0;
  bool flagged = false;  // SBM solution is incomplete
  std::vector<std::string> reasons;
  SbmResult sbm;
};

inline constexpr double kSbmCompareTol = 1e-6;

SbmComparison compare_sbm_vga(const Dataset& d, std::string_view o);

}  // namespace vga
