#pragma once

// Dense two-phase primal simplex with exact dual values and right-hand-side
// ranging. Built for the tiny programs of the gap-analysis models: a handful
// of rows, a few dozen columns, and a need to inspect the optimal basis.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace vga::lp {

enum class Sense { maximize, minimize };
enum class Relation { equal, less_equal, greater_equal };
enum class VarSign { nonnegative, free };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::equal;
  double rhs = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<Constraint> rows;
  std::vector<VarSign> signs;  // empty means all nonnegative

  std::size_t num_vars() const noexcept { return objective.size(); }
  std::size_t num_rows() const noexcept { return rows.size(); }
  VarSign sign(std::size_t j) const { return signs.empty() ? VarSign::nonnegative : signs[j]; }

  /// Throws std::invalid_argument unless rectangular and finite.
  void check() const;
};

struct Tolerances {
  double feasibility = 1e-9;
  double duality = 1e-7;
  double complementary_slackness = 1e-7;
  double pivot = 1e-10;
};

enum class Status { optimal, infeasible, unbounded };

std::string to_string(Status s);

/// Result of a solve. `basis` lists, per standardized row, the column of the
/// internal standard form that is basic there; columns [0, num_vars) are the
/// original variables (the positive part for free variables). Dual values
/// are reported in the orientation of the original rows, as the rate of
/// change of the optimal objective per unit increase of that row's rhs.
struct LpSolution {
  Status status = Status::infeasible;
  std::vector<double> primal;
  std::vector<double> dual;
  std::vector<double> reduced_costs;  // c_j - y·A_j in the caller's sense
  double objective = 0.0;
  std::vector<std::size_t> basis;
  bool degenerate = false;
  std::size_t iterations = 0;

  bool optimal() const noexcept { return status == Status::optimal; }
  /// Original variables that are basic.
  std::vector<std::size_t> basic_variables(std::size_t num_vars) const;
};

struct RhsRange {
  std::size_t constraint = 0;
  double allowable_decrease = 0.0;
  double allowable_increase = 0.0;

  static constexpr double infinity = std::numeric_limits<double>::infinity();
};

enum class RhsDirection { decrease, increase };

struct SolverOptions {
  Tolerances tol;
  std::size_t max_iterations = 10000;
  /// Consecutive degenerate pivots tolerated under the largest-coefficient
  /// rule before switching permanently to Bland's rule.
  std::size_t degeneracy_limit = 25;
};

LpSolution solve(const LinearProgram& lp, const SolverOptions& opts = {});

/// Rebuilds the solution for `basis` (as reported in LpSolution::basis).
/// Returns nullopt when that basis is singular, primal infeasible or not
/// optimal for `lp`; used to carry a basis across rhs changes.
std::optional<LpSolution> solve_from_basis(const LinearProgram& lp, const std::vector<std::size_t>& basis,
                                           const SolverOptions& opts = {});

/// Standard rhs ranging for row `constraint` from the optimal basis of `sol`:
/// the largest changes that keep every basic value nonnegative.
/// Throws std::invalid_argument if `sol` is not optimal.
RhsRange rhs_range(const LinearProgram& lp, const LpSolution& sol, std::size_t constraint,
                   const SolverOptions& opts = {});

/// At a degenerate optimum several bases are optimal and the duals are not
/// unique. This picks, by dual simplex pivots on the degenerate rows, the
/// optimal basis that stays feasible when row `constraint`'s rhs moves a
/// little in `direction`. Primal values are unchanged. Returns nullopt when
/// any move in that direction makes the program infeasible.
std::optional<LpSolution> orient_basis(const LinearProgram& lp, const LpSolution& sol,
                                       std::size_t constraint, RhsDirection direction,
                                       const SolverOptions& opts = {});

}  // namespace vga::lp
