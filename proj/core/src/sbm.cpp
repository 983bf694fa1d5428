#include "vga/sbm.hpp"

#include <cmath>
#include <numeric>

#include "vga/errors.hpp"
#include "vga/models.hpp"

namespace vga {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double SbmResult::rho_from_slacks() const {
  const double m = double(input_slack_ratios.size());
  const double s = double(output_slack_ratios.size());
  const double q = std::accumulate(input_slack_ratios.begin(), input_slack_ratios.end(), 0.0);
  const double p = std::accumulate(output_slack_ratios.begin(), output_slack_ratios.end(), 0.0);
  return (1.0 - q / m) / (1.0 + p / s);
}

SbmResult solve_sbm(const Dataset& d, std::string_view o, const lp::SolverOptions& opts) {
  const auto& unit = d.dmu(o);
  const auto n = d.n(), m = d.m(), s = d.s();
  for (double v : unit.inputs)
    if (!(v > 0.0)) throw AssessmentError("SBM needs positive inputs for DMU '" + unit.id + "'");
  for (double v : unit.outputs)
    if (!(v > 0.0)) throw AssessmentError("SBM needs positive outputs for DMU '" + unit.id + "'");

  // columns: t, Lambda_1..n, S-_1..m, S+_1..s
  const std::size_t cl = 1, cq = 1 + n, cp = 1 + n + m, vars = 1 + n + m + s;
  lp::LinearProgram prog;
  prog.sense = lp::Sense::minimize;
  prog.objective.assign(vars, 0.0);
  prog.objective[0] = 1.0;
  for (std::size_t i = 0; i < m; ++i) prog.objective[cq + i] = -1.0 / (double(m) * unit.inputs[i]);

  lp::Constraint norm{std::vector<double>(vars, 0.0), lp::Relation::equal, 1.0};
  norm.coefficients[0] = 1.0;
  for (std::size_t r = 0; r < s; ++r) norm.coefficients[cp + r] = 1.0 / (double(s) * unit.outputs[r]);
  prog.rows.push_back(std::move(norm));
  for (std::size_t i = 0; i < m; ++i) {
    lp::Constraint row{std::vector<double>(vars, 0.0), lp::Relation::equal, 0.0};
    row.coefficients[0] = unit.inputs[i];
    for (std::size_t j = 0; j < n; ++j) row.coefficients[cl + j] = -d.x(i, j);
    row.coefficients[cq + i] = -1.0;
    prog.rows.push_back(std::move(row));
  }
  for (std::size_t r = 0; r < s; ++r) {
    lp::Constraint row{std::vector<double>(vars, 0.0), lp::Relation::equal, 0.0};
    row.coefficients[0] = unit.outputs[r];
    for (std::size_t j = 0; j < n; ++j) row.coefficients[cl + j] = -d.y(r, j);
    row.coefficients[cp + r] = 1.0;
    prog.rows.push_back(std::move(row));
  }

  const auto sol = lp::solve(prog, opts);
  if (sol.status != lp::Status::optimal) throw AssessmentError("SBM program is " + lp::to_string(sol.status));

  SbmResult out;
  out.dmu = unit.id;
  out.rho = sol.objective;
  out.t_cc = sol.primal[0];
  if (!(out.t_cc > 0.0)) throw NumericalError("SBM normalizer is not positive");
  for (std::size_t j = 0; j < n; ++j) out.intensities.push_back(sol.primal[cl + j] / out.t_cc);
  for (std::size_t i = 0; i < m; ++i) {
    out.input_slacks.push_back(sol.primal[cq + i] / out.t_cc);
    out.input_slack_ratios.push_back(out.input_slacks.back() / unit.inputs[i]);
    out.input_prices.push_back(sol.dual[1 + i]);
  }
  for (std::size_t r = 0; r < s; ++r) {
    out.output_slacks.push_back(sol.primal[cp + r] / out.t_cc);
    out.output_slack_ratios.push_back(out.output_slacks.back() / unit.outputs[r]);
    out.output_prices.push_back(-sol.dual[1 + m + r]);
  }

  out.alpha = dot(out.input_prices, unit.inputs);
  out.beta = dot(out.output_prices, unit.outputs);
  out.e_rel = out.beta / out.alpha;

  std::vector<double> xh(m), yh(s), xr(m), yr(s);
  for (std::size_t i = 0; i < m; ++i) {
    xh[i] = unit.inputs[i] - sol.primal[cq + i];
    xr[i] = unit.inputs[i] - out.input_slacks[i];
  }
  for (std::size_t r = 0; r < s; ++r) {
    yh[r] = unit.outputs[r] + sol.primal[cp + r];
    yr[r] = unit.outputs[r] + out.output_slacks[r];
  }
  out.alpha_hat = dot(out.input_prices, xh);
  out.beta_hat = dot(out.output_prices, yh);
  out.goal_ratio = out.beta_hat / out.alpha_hat;
  out.goal_ratio_rescaled = dot(out.output_prices, yr) / dot(out.input_prices, xr);
  return out;
}

SbmComparison compare_sbm_vga(const Dataset& d, std::string_view o) {
  SbmComparison c;
  c.sbm = solve_sbm(d, o);
  c.dmu = c.sbm.dmu;
  c.rho = c.sbm.rho;
  c.e_rel = c.sbm.e_rel;
  c.goal_ratio = c.sbm.goal_ratio;
  c.e_pte = assess(d, o, ProgramKind::pte()).efficiency();
  if (c.rho < c.e_rel - kSbmCompareTol) c.reasons.push_back("rho below relative efficiency");
  if (std::abs(c.goal_ratio - 1.0) > kSbmCompareTol) c.reasons.push_back("goal ratio differs from 1");
  c.flagged = !c.reasons.empty();
  return c;
}

}  // namespace vga
