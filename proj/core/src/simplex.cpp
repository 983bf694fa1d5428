#include "vga/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vga/errors.hpp"

namespace vga::lp {

namespace {

enum class ColumnKind { original, negative_part, slack, artificial };

// max cost·z  s.t.  A z = b,  z >= 0,  b >= 0
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t num_vars = 0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> cost;
  std::vector<ColumnKind> kind;
  std::vector<std::size_t> var_of;   // original variable behind original/negative_part columns
  std::vector<double> row_sign;      // -1 where the row was negated to make b >= 0
  std::vector<std::size_t> unit_col; // column that is e_k in the starting tableau
  double objective_sign = 1.0;       // -1 when the caller minimizes
  double rhs_scale = 1.0;
};

StandardForm standardize(const LinearProgram& lp) {
  lp.check();
  StandardForm sf;
  sf.rows = lp.num_rows();
  sf.num_vars = lp.num_vars();
  sf.objective_sign = lp.sense == Sense::maximize ? 1.0 : -1.0;

  std::vector<Relation> rel(sf.rows);
  sf.row_sign.assign(sf.rows, 1.0);
  sf.b.resize(sf.rows);
  for (std::size_t k = 0; k < sf.rows; ++k) {
    const auto& row = lp.rows[k];
    rel[k] = row.relation;
    sf.b[k] = row.rhs;
    if (row.rhs < 0.0) {
      sf.row_sign[k] = -1.0;
      sf.b[k] = -row.rhs;
      if (rel[k] == Relation::less_equal) rel[k] = Relation::greater_equal;
      else if (rel[k] == Relation::greater_equal) rel[k] = Relation::less_equal;
    }
    sf.rhs_scale = std::max(sf.rhs_scale, sf.b[k]);
  }

  auto add_column = [&](ColumnKind kind, std::size_t var, double cost) {
    sf.kind.push_back(kind);
    sf.var_of.push_back(var);
    sf.cost.push_back(cost);
    for (auto& r : sf.a) r.push_back(0.0);
    return sf.cols++;
  };
  sf.a.assign(sf.rows, {});

  for (std::size_t j = 0; j < sf.num_vars; ++j) {
    auto c = add_column(ColumnKind::original, j, sf.objective_sign * lp.objective[j]);
    for (std::size_t k = 0; k < sf.rows; ++k) sf.a[k][c] = sf.row_sign[k] * lp.rows[k].coefficients[j];
  }
  for (std::size_t j = 0; j < sf.num_vars; ++j) {
    if (lp.sign(j) != VarSign::free) continue;
    auto c = add_column(ColumnKind::negative_part, j, -sf.objective_sign * lp.objective[j]);
    for (std::size_t k = 0; k < sf.rows; ++k) sf.a[k][c] = -sf.row_sign[k] * lp.rows[k].coefficients[j];
  }
  sf.unit_col.assign(sf.rows, 0);
  for (std::size_t k = 0; k < sf.rows; ++k) {
    if (rel[k] == Relation::equal) continue;
    auto c = add_column(ColumnKind::slack, k, 0.0);
    sf.a[k][c] = rel[k] == Relation::less_equal ? 1.0 : -1.0;
    if (rel[k] == Relation::less_equal) sf.unit_col[k] = c;
  }
  for (std::size_t k = 0; k < sf.rows; ++k) {
    if (rel[k] == Relation::less_equal) continue;
    auto c = add_column(ColumnKind::artificial, k, 0.0);
    sf.a[k][c] = 1.0;
    sf.unit_col[k] = c;
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, const SolverOptions& opts)
      : sf_(sf), opts_(opts), width_(sf.cols + 1), t_(sf.rows * width_, 0.0), basis_(sf.unit_col) {
    for (std::size_t i = 0; i < sf.rows; ++i) {
      for (std::size_t j = 0; j < sf.cols; ++j) at(i, j) = sf.a[i][j];
      rhs(i) = sf.b[i];
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return t_[i * width_ + sf_.cols]; }
  double rhs(std::size_t i) const { return t_[i * width_ + sf_.cols]; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t iterations() const { return iterations_; }

  bool is_artificial(std::size_t j) const { return sf_.kind[j] == ColumnKind::artificial; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < sf_.rows; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
    ++iterations_;
  }

  // d_j = c_B·B^-1 A_j - c_j; a max-tableau is optimal when d_j >= 0.
  std::vector<double> reduced_costs(const std::vector<double>& cost) const {
    std::vector<double> d(sf_.cols);
    for (std::size_t j = 0; j < sf_.cols; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < sf_.rows; ++i) z += cost[basis_[i]] * at(i, j);
      d[j] = z - cost[j];
    }
    return d;
  }

  bool is_basic(std::size_t j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

  enum class Outcome { optimal, unbounded };

  Outcome run_primal(const std::vector<double>& cost) {
    bool bland = false;
    std::size_t degenerate_streak = 0;
    std::size_t tiny_pivots = 0;
    const double zero_tol = opts_.tol.feasibility * sf_.rhs_scale;
    for (;;) {
      if (iterations_ >= opts_.max_iterations) throw NumericalError("simplex iteration limit reached");
      const auto d = reduced_costs(cost);
      std::vector<bool> rejected(sf_.cols, false);
      for (;;) {
        std::optional<std::size_t> enter;
        for (std::size_t j = 0; j < sf_.cols; ++j) {
          if (rejected[j] || is_artificial(j) || is_basic(j)) continue;
          if (d[j] >= -opts_.tol.feasibility) continue;
          if (!enter) {
            enter = j;
            if (bland) break;
          } else if (d[j] < d[*enter]) {
            enter = j;
          }
        }
        if (!enter) return Outcome::optimal;

        const std::size_t c = *enter;
        std::optional<std::size_t> leave;
        double best = 0.0;
        bool saw_tiny = false;
        for (std::size_t i = 0; i < sf_.rows; ++i) {
          const double a = at(i, c);
          if (a <= opts_.tol.pivot) {
            if (a > 1e-14) saw_tiny = true;
            continue;
          }
          const double ratio = std::max(rhs(i), 0.0) / a;
          const double tie = 1e-12 * std::max(1.0, best);
          if (!leave || ratio < best - tie) {
            leave = i;
            best = ratio;
          } else if (ratio <= best + tie && basis_[i] < basis_[*leave]) {
            leave = i;
            best = std::min(best, ratio);
          }
        }
        if (!leave) {
          if (!saw_tiny) return Outcome::unbounded;
          if (++tiny_pivots > 50) throw NumericalError("pivot magnitudes repeatedly below tolerance");
          rejected[c] = true;
          continue;
        }
        if (rhs(*leave) <= zero_tol) {
          if (++degenerate_streak > opts_.degeneracy_limit) bland = true;
        } else {
          degenerate_streak = 0;
        }
        pivot(*leave, c);
        break;
      }
    }
  }

  // Gauss-Jordan pivots until `target` columns are basic; false if singular.
  bool install_basis(const std::vector<std::size_t>& target) {
    if (target.size() != sf_.rows) return false;
    std::vector<bool> done(sf_.rows, false);
    for (std::size_t c : target) {
      if (c >= sf_.cols) return false;
      std::optional<std::size_t> row;
      double best = opts_.tol.pivot;
      for (std::size_t i = 0; i < sf_.rows; ++i) {
        if (done[i]) continue;
        if (std::abs(at(i, c)) > best) {
          best = std::abs(at(i, c));
          row = i;
        }
      }
      if (!row) return false;
      pivot(*row, c);
      done[*row] = true;
    }
    return true;
  }

  // Column j of B^-1 (the tableau column of the k-th starting unit vector).
  std::vector<double> binv_column(std::size_t k) const {
    std::vector<double> col(sf_.rows);
    for (std::size_t i = 0; i < sf_.rows; ++i) col[i] = at(i, sf_.unit_col[k]);
    return col;
  }

 private:
  const StandardForm& sf_;
  const SolverOptions& opts_;
  std::size_t width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::size_t iterations_ = 0;
};

std::vector<double> phase2_cost(const StandardForm& sf) { return sf.cost; }

LpSolution extract(const LinearProgram& lp, const StandardForm& sf, const Tableau& tab,
                   const SolverOptions& opts) {
  LpSolution sol;
  sol.status = Status::optimal;
  sol.basis = tab.basis();
  sol.iterations = tab.iterations();

  std::vector<double> z(sf.cols, 0.0);
  const double zero_tol = opts.tol.feasibility * sf.rhs_scale;
  for (std::size_t i = 0; i < sf.rows; ++i) {
    double v = tab.rhs(i);
    if (std::abs(v) <= 1e-13 * sf.rhs_scale) v = 0.0;
    z[sol.basis[i]] = v;
    if (v <= zero_tol) sol.degenerate = true;
  }
  sol.primal.assign(sf.num_vars, 0.0);
  for (std::size_t c = 0; c < sf.cols; ++c) {
    if (sf.kind[c] == ColumnKind::original) sol.primal[sf.var_of[c]] += z[c];
    if (sf.kind[c] == ColumnKind::negative_part) sol.primal[sf.var_of[c]] -= z[c];
  }

  const auto cost = phase2_cost(sf);
  sol.dual.assign(sf.rows, 0.0);
  for (std::size_t k = 0; k < sf.rows; ++k) {
    const auto col = tab.binv_column(k);
    double y = 0.0;
    for (std::size_t i = 0; i < sf.rows; ++i) y += cost[sol.basis[i]] * col[i];
    sol.dual[k] = sf.objective_sign * sf.row_sign[k] * y;
  }

  sol.objective = 0.0;
  for (std::size_t j = 0; j < sf.num_vars; ++j) sol.objective += lp.objective[j] * sol.primal[j];
  sol.reduced_costs.assign(sf.num_vars, 0.0);
  for (std::size_t j = 0; j < sf.num_vars; ++j) {
    double ya = 0.0;
    for (std::size_t k = 0; k < sf.rows; ++k) ya += sol.dual[k] * lp.rows[k].coefficients[j];
    sol.reduced_costs[j] = lp.objective[j] - ya;
  }
  return sol;
}

bool dual_feasible(const StandardForm& sf, const Tableau& tab, const SolverOptions& opts) {
  const auto d = tab.reduced_costs(phase2_cost(sf));
  for (std::size_t j = 0; j < sf.cols; ++j) {
    if (sf.kind[j] == ColumnKind::artificial || tab.is_basic(j)) continue;
    if (d[j] < -opts.tol.feasibility) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "unknown";
}

void LinearProgram::check() const {
  const auto n = num_vars();
  if (!signs.empty() && signs.size() != n) throw std::invalid_argument("sign vector length mismatch");
  for (double c : objective)
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite objective coefficient");
  for (const auto& row : rows) {
    if (row.coefficients.size() != n) throw std::invalid_argument("constraint matrix is not rectangular");
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite right-hand side");
    for (double a : row.coefficients)
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite constraint coefficient");
  }
}

std::vector<std::size_t> LpSolution::basic_variables(std::size_t num_vars) const {
  std::vector<std::size_t> out;
  for (auto c : basis)
    if (c < num_vars) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

LpSolution solve(const LinearProgram& lp, const SolverOptions& opts) {
  const auto sf = standardize(lp);
  Tableau tab(sf, opts);

  std::vector<double> phase1(sf.cols, 0.0);
  bool any_artificial = false;
  for (std::size_t j = 0; j < sf.cols; ++j) {
    if (sf.kind[j] == ColumnKind::artificial) {
      phase1[j] = -1.0;
      any_artificial = true;
    }
  }
  if (any_artificial) {
    tab.run_primal(phase1);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < sf.rows; ++i)
      if (tab.is_artificial(tab.basis()[i])) infeasibility += std::max(tab.rhs(i), 0.0);
    if (infeasibility > opts.tol.feasibility * sf.rhs_scale) {
      LpSolution sol;
      sol.status = Status::infeasible;
      sol.iterations = tab.iterations();
      return sol;
    }
    // Drive zero-level artificials out of the basis where the row allows it.
    for (std::size_t i = 0; i < sf.rows; ++i) {
      if (!tab.is_artificial(tab.basis()[i])) continue;
      tab.rhs(i) = 0.0;
      std::optional<std::size_t> col;
      double best = opts.tol.pivot;
      for (std::size_t j = 0; j < sf.cols; ++j) {
        if (tab.is_artificial(j) || tab.is_basic(j)) continue;
        if (std::abs(tab.at(i, j)) > best) {
          best = std::abs(tab.at(i, j));
          col = j;
        }
      }
      if (col) tab.pivot(i, *col);
    }
  }

  if (tab.run_primal(phase2_cost(sf)) == Tableau::Outcome::unbounded) {
    LpSolution sol;
    sol.status = Status::unbounded;
    sol.iterations = tab.iterations();
    return sol;
  }
  return extract(lp, sf, tab, opts);
}

std::optional<LpSolution> solve_from_basis(const LinearProgram& lp, const std::vector<std::size_t>& basis,
                                           const SolverOptions& opts) {
  const auto sf = standardize(lp);
  Tableau tab(sf, opts);
  if (!tab.install_basis(basis)) return std::nullopt;
  const double zero_tol = opts.tol.feasibility * sf.rhs_scale;
  for (std::size_t i = 0; i < sf.rows; ++i) {
    if (tab.rhs(i) < -zero_tol) return std::nullopt;
    if (tab.is_artificial(tab.basis()[i]) && tab.rhs(i) > zero_tol) return std::nullopt;
    if (tab.rhs(i) < 0.0) tab.rhs(i) = 0.0;
  }
  if (!dual_feasible(sf, tab, opts)) return std::nullopt;
  return extract(lp, sf, tab, opts);
}

RhsRange rhs_range(const LinearProgram& lp, const LpSolution& sol, std::size_t constraint,
                   const SolverOptions& opts) {
  if (!sol.optimal()) throw std::invalid_argument("rhs ranging needs an optimal solution");
  if (constraint >= lp.num_rows()) throw std::out_of_range("constraint index out of range");
  const auto sf = standardize(lp);
  Tableau tab(sf, opts);
  if (!tab.install_basis(sol.basis)) throw NumericalError("optimal basis is singular");

  RhsRange range{constraint, RhsRange::infinity, RhsRange::infinity};
  auto d = tab.binv_column(constraint);
  for (auto& v : d) v *= sf.row_sign[constraint];
  for (std::size_t i = 0; i < sf.rows; ++i) {
    const double x = std::max(tab.rhs(i), 0.0);
    if (std::abs(d[i]) <= 1e-12) continue;
    if (tab.is_artificial(tab.basis()[i])) {
      range.allowable_decrease = range.allowable_increase = 0.0;
      break;
    }
    if (d[i] < 0.0) range.allowable_increase = std::min(range.allowable_increase, x / -d[i]);
    else range.allowable_decrease = std::min(range.allowable_decrease, x / d[i]);
  }
  return range;
}

std::optional<LpSolution> orient_basis(const LinearProgram& lp, const LpSolution& sol, std::size_t constraint,
                                       RhsDirection direction, const SolverOptions& opts) {
  if (!sol.optimal()) throw std::invalid_argument("basis orientation needs an optimal solution");
  if (constraint >= lp.num_rows()) throw std::out_of_range("constraint index out of range");
  const auto sf = standardize(lp);
  Tableau tab(sf, opts);
  if (!tab.install_basis(sol.basis)) throw NumericalError("optimal basis is singular");

  const double sign = (direction == RhsDirection::increase ? 1.0 : -1.0) * sf.row_sign[constraint];
  const double zero_tol = opts.tol.feasibility * sf.rhs_scale;
  const auto cost = phase2_cost(sf);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > opts.max_iterations) throw NumericalError("basis orientation did not terminate");
    auto d = tab.binv_column(constraint);
    std::optional<std::size_t> leave;
    for (std::size_t i = 0; i < sf.rows; ++i) {
      const double di = sign * d[i];
      if (tab.rhs(i) > zero_tol || di >= -1e-12) continue;
      if (!leave || tab.basis()[i] < tab.basis()[*leave]) leave = i;
    }
    if (!leave) break;
    if (tab.is_artificial(tab.basis()[*leave])) return std::nullopt;

    // Dual ratio test keeps every reduced cost nonnegative.
    const auto rc = tab.reduced_costs(cost);
    std::optional<std::size_t> enter;
    double best = 0.0;
    for (std::size_t j = 0; j < sf.cols; ++j) {
      if (tab.is_artificial(j) || tab.is_basic(j)) continue;
      const double a = tab.at(*leave, j);
      if (a >= -opts.tol.pivot) continue;
      const double ratio = std::max(rc[j], 0.0) / -a;
      if (!enter || ratio < best - 1e-12) {
        enter = j;
        best = ratio;
      }
    }
    if (!enter) return std::nullopt;
    tab.rhs(*leave) = 0.0;
    tab.pivot(*leave, *enter);
  }
  auto out = extract(lp, sf, tab, opts);
  out.iterations += sol.iterations;
  return out;
}

}  // namespace vga::lp
