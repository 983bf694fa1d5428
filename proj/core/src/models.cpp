#include "vga/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vga/errors.hpp"
#include "vga/post_analysis.hpp"

namespace vga {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> scaled(const std::vector<double>& v, double f) {
  std::vector<double> out(v);
  for (auto& x : out) x *= f;
  return out;
}

void fill_virtual(VirtualValues& vv, const std::vector<double>& v, const std::vector<double>& u, double w,
                  const VgaAssessment& a) {
  const auto& s1 = a.step1;
  vv.input = dot(v, s1.x_o);
  vv.output = dot(u, s1.y_o);
  vv.scalar_price = s1.kind.is_stea() ? s1.kind.sic_scalar * w : 0.0;
  vv.affected_input = vv.input + (1.0 - a.gamma) * vv.scalar_price;
  vv.affected_output = vv.output - a.gamma * vv.scalar_price;
  vv.target_input = dot(v, a.target_inputs);
  vv.target_output = dot(u, a.target_outputs);
  vv.affected_target_input = vv.target_input + (1.0 - a.gamma) * vv.scalar_price;
  vv.affected_target_output = vv.target_output - a.gamma * vv.scalar_price;
  vv.gap_price = vv.affected_input - vv.affected_output;
}

}  // namespace

ProgramKind ProgramKind::stea(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("SIC scalar must be positive");
  return {Variant::stea, kappa};
}

std::string to_string(Variant v) { return v == Variant::pte ? "pte" : "ste"; }

std::string to_string(ScaleClass c) {
  switch (c) {
    case ScaleClass::not_applicable: return "not_applicable";
    case ScaleClass::increasing: return "increasing";
    case ScaleClass::constant: return "constant";
    case ScaleClass::decreasing: return "decreasing";
  }
  return "unknown";
}

double StepISolution::slack_sum_inputs() const { return sum(input_slack_ratios); }
double StepISolution::slack_sum_outputs() const { return sum(output_slack_ratios); }
double StepISolution::intensity_sum() const { return sum(intensities); }

double VgaAssessment::intensity(std::string_view id) const {
  for (std::size_t j = 0; j < step1.dmu_ids.size(); ++j)
    if (step1.dmu_ids[j] == id) return step1.intensities[j];
  throw std::out_of_range("unknown DMU id '" + std::string(id) + "'");
}

std::size_t sic_row(const Dataset& d) { return d.m() + d.s(); }

lp::LinearProgram build_tsp(const Dataset& d, std::string_view o, const ProgramKind& kind) {
  const auto& unit = d.dmu(o);
  const auto n = d.n(), m = d.m(), s = d.s();
  for (std::size_t i = 0; i < m; ++i)
    if (!(unit.inputs[i] > 0.0))
      throw AssessmentError("DMU '" + unit.id + "' has zero input '" + d.input_names()[i].name +
                            "'; the goal-price bound on it cannot hold");
  for (std::size_t r = 0; r < s; ++r)
    if (!(unit.outputs[r] > 0.0))
      throw AssessmentError("DMU '" + unit.id + "' has zero output '" + d.output_names()[r].name +
                            "'; the goal-price bound on it cannot hold");
  if (kind.is_stea() && !(kind.sic_scalar > 0.0)) throw AssessmentError("SIC scalar must be positive");

  const auto vars = n + m + s;
  lp::LinearProgram prog;
  prog.sense = lp::Sense::maximize;
  prog.objective.assign(vars, 0.0);
  for (std::size_t k = n; k < vars; ++k) prog.objective[k] = 1.0;  // tau# = $1

  for (std::size_t i = 0; i < m; ++i) {
    lp::Constraint row{std::vector<double>(vars, 0.0), lp::Relation::equal, unit.inputs[i]};
    for (std::size_t j = 0; j < n; ++j) row.coefficients[j] = d.x(i, j);
    row.coefficients[n + i] = unit.inputs[i];
    prog.rows.push_back(std::move(row));
  }
  for (std::size_t r = 0; r < s; ++r) {
    lp::Constraint row{std::vector<double>(vars, 0.0), lp::Relation::equal, -unit.outputs[r]};
    for (std::size_t j = 0; j < n; ++j) row.coefficients[j] = -d.y(r, j);
    row.coefficients[n + m + r] = unit.outputs[r];
    prog.rows.push_back(std::move(row));
  }
  if (kind.is_stea()) {
    lp::Constraint row{std::vector<double>(vars, 0.0), lp::Relation::equal, kind.sic_scalar};
    for (std::size_t j = 0; j < n; ++j) row.coefficients[j] = 1.0;
    prog.rows.push_back(std::move(row));
  }
  return prog;
}

StepISolution interpret_step1(const Dataset& d, std::string_view o, const ProgramKind& kind,
                              lp::LinearProgram program, lp::LpSolution solution) {
  if (solution.status == lp::Status::infeasible) {
    throw AssessmentError(kind.is_stea() ? "SIC scalar " + std::to_string(kind.sic_scalar) +
                                               " is infeasible for DMU '" + std::string(o) + "'"
                                         : "total slack price program is infeasible");
  }
  if (solution.status == lp::Status::unbounded) throw AssessmentError("total slack price program is unbounded");

  const auto n = d.n(), m = d.m(), s = d.s();
  const auto& unit = d.dmu(o);
  StepISolution out;
  out.dmu = unit.id;
  out.kind = kind;
  out.x_o = unit.inputs;
  out.y_o = unit.outputs;
  for (const auto& rec : d.dmus()) out.dmu_ids.push_back(rec.id);

  auto clamp0 = [](double v) { return v < 0.0 && v > -1e-12 ? 0.0 : v; };
  for (std::size_t j = 0; j < n; ++j) out.intensities.push_back(clamp0(solution.primal[j]));
  for (std::size_t i = 0; i < m; ++i) out.input_slack_ratios.push_back(clamp0(solution.primal[n + i]));
  for (std::size_t r = 0; r < s; ++r) out.output_slack_ratios.push_back(clamp0(solution.primal[n + m + r]));

  // Output rows are kept in their printed orientation (rhs -y_ro), so their
  // duals are u# directly.
  for (std::size_t i = 0; i < m; ++i) out.input_prices.push_back(solution.dual[i]);
  for (std::size_t r = 0; r < s; ++r) out.output_prices.push_back(solution.dual[m + r]);
  out.sic_price = kind.is_stea() ? solution.dual[m + s] : 0.0;

  out.total_slack_price = out.slack_sum_inputs() + out.slack_sum_outputs();
  double gap = 0.0;
  for (std::size_t k = 0; k < program.rows.size(); ++k) gap += solution.dual[k] * program.rows[k].rhs;
  out.total_gap_price = gap;
  out.degenerate = solution.degenerate;

  for (double v : out.input_prices)
    if (!(v > 0.0)) throw NumericalError("non-positive input price in Step I duals");
  for (double u : out.output_prices)
    if (!(u > 0.0)) throw NumericalError("non-positive output price in Step I duals");

  out.program = std::move(program);
  out.solution = std::move(solution);
  return out;
}

StepISolution solve_step1(const Dataset& d, std::string_view o, const ProgramKind& kind,
                          const lp::SolverOptions& opts) {
  auto prog = build_tsp(d, o, kind);
  auto sol = lp::solve(prog, opts);
  return interpret_step1(d, o, kind, std::move(prog), std::move(sol));
}

StepISolution solve_step1_from_basis(const Dataset& d, std::string_view o, const ProgramKind& kind,
                                     const std::vector<std::size_t>& basis, const lp::SolverOptions& opts) {
  auto prog = build_tsp(d, o, kind);
  if (auto warm = lp::solve_from_basis(prog, basis, opts)) {
    return interpret_step1(d, o, kind, std::move(prog), std::move(*warm));
  }
  auto sol = lp::solve(prog, opts);
  return interpret_step1(d, o, kind, std::move(prog), std::move(sol));
}

double compute_gamma(const StepISolution& step1) {
  const double scalar_price = step1.kind.is_stea() ? step1.kind.sic_scalar * step1.sic_price : 0.0;
  const double total = step1.slack_sum_inputs() + step1.slack_sum_outputs();
  if (std::abs(scalar_price) <= kScaleSignTol || total <= kPeerTol) return 0.5;
  return step1.slack_sum_inputs() / total;
}

VgaAssessment normalize_step2(const StepISolution& step1, double gamma) {
  VgaAssessment a;
  a.step1 = step1;
  a.gamma = gamma;

  const auto m = step1.x_o.size(), s = step1.y_o.size();
  a.target_inputs.resize(m);
  a.target_outputs.resize(s);
  for (std::size_t i = 0; i < m; ++i) a.target_inputs[i] = step1.x_o[i] * (1.0 - step1.input_slack_ratios[i]);
  for (std::size_t r = 0; r < s; ++r) a.target_outputs[r] = step1.y_o[r] * (1.0 + step1.output_slack_ratios[r]);

  fill_virtual(a.interim, step1.input_prices, step1.output_prices, step1.sic_price, a);
  a.interim.slack_price = step1.total_slack_price;

  a.t = 1.0 / a.interim.affected_input;
  a.input_prices = scaled(step1.input_prices, a.t);
  a.output_prices = scaled(step1.output_prices, a.t);
  a.sic_price = a.t * step1.sic_price;
  fill_virtual(a.normalized, a.input_prices, a.output_prices, a.sic_price, a);
  a.normalized.slack_price = a.t * step1.total_slack_price;

  for (std::size_t j = 0; j < step1.intensities.size(); ++j)
    if (step1.intensities[j] > kPeerTol) a.peers.push_back(step1.dmu_ids[j]);
  for (double x : step1.x_o) a.input_goal_prices.push_back(a.t / x);
  for (double y : step1.y_o) a.output_goal_prices.push_back(a.t / y);

  a.decomposition = decompose(a);
  a.boundary_efficiency = boundary_efficiency(a);
  return a;
}

VgaAssessment assess(const Dataset& d, std::string_view o, const ProgramKind& kind) {
  auto s1 = solve_step1(d, o, kind);
  const double gamma = compute_gamma(s1);
  return normalize_step2(s1, gamma);
}

Targets compute_targets(const VgaAssessment& a) { return {a.target_inputs, a.target_outputs}; }

Targets peer_targets(const Dataset& d, const VgaAssessment& a) {
  Targets t{std::vector<double>(d.m(), 0.0), std::vector<double>(d.s(), 0.0)};
  for (const auto& id : a.peers) {
    const auto j = d.require_index(id);
    const double pi = a.intensity(id);
    for (std::size_t i = 0; i < d.m(); ++i) t.inputs[i] += d.x(i, j) * pi;
    for (std::size_t r = 0; r < d.s(); ++r) t.outputs[r] += d.y(r, j) * pi;
  }
  return t;
}

double boundary_efficiency(const VgaAssessment& a) {
  return a.normalized.affected_target_output / a.normalized.affected_target_input;
}

bool DualityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const DualityCheck& c) { return c.passed; });
}

double DualityReport::max_residual() const {
  double r = 0.0;
  for (const auto& c : checks) r = std::max(r, c.residual);
  return r;
}

DualityReport verify_duality(const Dataset& d, const VgaAssessment& a, double tol) {
  DualityReport rep;
  auto add = [&](std::string name, double residual) {
    rep.checks.push_back({std::move(name), residual, residual <= tol});
  };
  const auto& s1 = a.step1;
  const auto m = d.m(), s = d.s();
  const double tau = a.tau_star();

  add("strong duality (delta* = Delta*)", std::abs(a.normalized.slack_price - a.normalized.gap_price));

  // Peer composition equals the targets, using every unit's intensity.
  Targets combo{std::vector<double>(m, 0.0), std::vector<double>(s, 0.0)};
  for (std::size_t j = 0; j < d.n(); ++j) {
    const double pi = a.intensity(d.dmus()[j].id);
    for (std::size_t i = 0; i < m; ++i) combo.inputs[i] += d.x(i, j) * pi;
    for (std::size_t r = 0; r < s; ++r) combo.outputs[r] += d.y(r, j) * pi;
  }
  double target_res = 0.0, target_cs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double gap = combo.inputs[i] - a.target_inputs[i];
    target_res = std::max(target_res, std::abs(gap) / std::max(1.0, s1.x_o[i]));
    target_cs = std::max(target_cs, std::abs(gap * a.input_prices[i]));
  }
  for (std::size_t r = 0; r < s; ++r) {
    const double gap = combo.outputs[r] - a.target_outputs[r];
    target_res = std::max(target_res, std::abs(gap) / std::max(1.0, s1.y_o[r]));
    target_cs = std::max(target_cs, std::abs(gap * a.output_prices[r]));
  }
  add("peer combination equals targets", target_res);
  add("index slackness (peer combination - target)·price", target_cs);

  double peer_cs = 0.0, min_gap = 0.0;
  for (std::size_t j = 0; j < d.n(); ++j) {
    double gap = a.sic_price;
    for (std::size_t i = 0; i < m; ++i) gap += a.input_prices[i] * d.x(i, j);
    for (std::size_t r = 0; r < s; ++r) gap -= a.output_prices[r] * d.y(r, j);
    peer_cs = std::max(peer_cs, std::abs(gap * s1.intensities[j]));
    min_gap = std::min(min_gap, gap);
  }
  add("best peers have zero virtual gap", peer_cs);
  add("every unit has nonnegative virtual gap", -min_gap);

  double bound_cs = 0.0, bound_floor = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double excess = a.input_prices[i] * s1.x_o[i] - tau;
    bound_cs = std::max(bound_cs, std::abs(excess * s1.input_slack_ratios[i]));
    bound_floor = std::max(bound_floor, -excess);
  }
  for (std::size_t r = 0; r < s; ++r) {
    const double excess = a.output_prices[r] * s1.y_o[r] - tau;
    bound_cs = std::max(bound_cs, std::abs(excess * s1.output_slack_ratios[r]));
    bound_floor = std::max(bound_floor, -excess);
  }
  add("positive slack ratio binds the goal-price bound", bound_cs);
  add("virtual prices respect the goal-price floor", bound_floor);

  if (s1.kind.is_stea()) {
    add("SIC slackness", std::abs((s1.intensity_sum() - s1.kind.sic_scalar) * a.sic_price));
  }
  add("boundary efficiency equals 1", std::abs(a.boundary_efficiency - 1.0));
  return rep;
}

}  // namespace vga
