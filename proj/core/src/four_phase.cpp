#include "vga/four_phase.hpp"

#include <algorithm>
#include <cmath>

#include "vga/errors.hpp"

namespace vga {

namespace {

constexpr double kSameTol = 1e-9;

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol * std::max(1.0, std::abs(a[k]))) return false;
  return true;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

VgaAssessment finish(const StepISolution& s1) { return normalize_step2(s1, compute_gamma(s1)); }

}  // namespace

bool KappaInterval::contains(double kappa) const {
  const double slack = 1e-9 * std::max(1.0, std::abs(upper));
  return kappa >= lower - slack && kappa <= upper + slack;
}

std::string to_string(ScalarDirection d) {
  switch (d) {
    case ScalarDirection::none: return "none";
    case ScalarDirection::decrease: return "decrease";
    case ScalarDirection::increase: return "increase";
  }
  return "unknown";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::accepted: return "accepted";
    case Outcome::outside_interval: return "outside feasible interval";
    case Outcome::already_finalized: return "already finalized";
  }
  return "unknown";
}

Phase1Result phase1(const Dataset& d, std::string_view o) {
  Phase1Result r;
  r.pte = assess(d, o, ProgramKind::pte());
  r.kappa1 = r.pte.step1.intensity_sum();
  if (!(r.kappa1 > 0.0)) throw AssessmentError("PTE intensities sum to zero; no SIC scalar");
  return r;
}

Phase2Result phase2(const Dataset& d, std::string_view o, const Phase1Result& p1) {
  const auto kind = ProgramKind::stea(p1.kappa1);
  auto program = build_tsp(d, o, kind);
  const auto cold = lp::solve(program);
  if (!cold.optimal()) throw AssessmentError("STE1 program is not solvable at kappa1");

  // At kappa1 the SIC row is typically degenerate and w# is not unique. Take
  // the basis that stays optimal as kappa moves away from kappa1: first
  // downward (w# >= 0 there), else upward (w# <= 0).
  const auto row = sic_row(d);
  auto down = lp::orient_basis(program, cold, row, lp::RhsDirection::decrease);
  auto up = lp::orient_basis(program, cold, row, lp::RhsDirection::increase);
  const auto w_of = [&](const lp::LpSolution& s) { return s.dual[row]; };

  Phase2Result r;
  const lp::LpSolution* chosen = &cold;
  if (down && w_of(*down) > kScaleSignTol) {
    chosen = &*down;
    r.direction = ScalarDirection::decrease;
  } else if (up && w_of(*up) < -kScaleSignTol) {
    chosen = &*up;
    r.direction = ScalarDirection::increase;
  } else if (down) {
    chosen = &*down;
  } else if (up) {
    chosen = &*up;
  }
  r.ste1 = finish(interpret_step1(d, o, kind, program, *chosen));

  const auto& a = p1.pte.step1;
  const auto& b = r.ste1.step1;
  r.same_slack_ratios = close(a.input_slack_ratios, b.input_slack_ratios, kSameTol) &&
                        close(a.output_slack_ratios, b.output_slack_ratios, kSameTol);
  r.same_slack_price = close(a.total_slack_price, b.total_slack_price, kSameTol);
  r.intensity_sum_matches = close(b.intensity_sum(), p1.kappa1, kSameTol);
  r.prices_differ = !(close(a.input_prices, b.input_prices, kSameTol) &&
                      close(a.output_prices, b.output_prices, kSameTol));
  return r;
}

Phase3Result phase3(const Dataset& d, std::string_view o, const Phase1Result& p1, const Phase2Result& p2) {
  Phase3Result r;
  const auto& ste1 = p2.ste1.step1;
  r.range = lp::rhs_range(ste1.program, ste1.solution, sic_row(d));
  const double k1 = p1.kappa1;

  switch (p2.direction) {
    case ScalarDirection::decrease:
      if (std::isinf(r.range.allowable_decrease)) throw NumericalError("unbounded decrease of the SIC scalar");
      r.kappa2 = std::max(k1 - r.range.allowable_decrease, 0.0);
      r.interval = {r.kappa2, k1, false, false};
      break;
    case ScalarDirection::increase:
      if (std::isinf(r.range.allowable_increase)) {
        r.kappa2 = k1 + kUnboundedRangeCap * k1;
        r.interval = {k1, r.kappa2, false, true};
      } else {
        r.kappa2 = k1 + r.range.allowable_increase;
        r.interval = {k1, r.kappa2, false, false};
      }
      break;
    case ScalarDirection::none:
      r.kappa2 = k1;
      r.interval = {k1, k1, false, false};
      break;
  }

  if (r.kappa2 > 0.0 && r.kappa2 != k1) {
    r.ste2 = finish(solve_step1_from_basis(d, o, ProgramKind::stea(r.kappa2), ste1.solution.basis));
  } else {
    r.ste2 = p2.ste1;
  }

  const auto& b = r.ste2.step1;
  r.same_peers = p2.ste1.peers == r.ste2.peers;
  r.same_step1_prices = close(ste1.input_prices, b.input_prices, kSameTol) &&
                        close(ste1.output_prices, b.output_prices, kSameTol) &&
                        close(ste1.sic_price, b.sic_price, kSameTol);
  r.intensities_differ = !close(ste1.intensities, b.intensities, kSameTol);
  return r;
}

Phase4Session Phase4Session::start(std::shared_ptr<const Dataset> full, std::string o,
                                   std::set<std::string> excluded) {
  if (!full) throw std::invalid_argument("dataset is null");
  if (excluded.contains(o)) throw ValidationError({"cannot exclude the assessed DMU '" + o + "'"});
  Phase4Session s;
  s.full_ = std::move(full);
  s.working_ = excluded.empty() ? s.full_ : std::make_shared<const Dataset>(exclude_dmus(*s.full_, excluded));
  s.dmu_ = s.working_->dmu(o).id;
  s.excluded_ = std::move(excluded);
  s.p1_ = vga::phase1(*s.working_, s.dmu_);
  s.p2_ = vga::phase2(*s.working_, s.dmu_, s.p1_);
  s.p3_ = vga::phase3(*s.working_, s.dmu_, s.p1_, s.p2_);
  return s;
}

std::set<std::string> Phase4Session::peers() const {
  std::set<std::string> out(p1_.pte.peers.begin(), p1_.pte.peers.end());
  out.insert(p2_.ste1.peers.begin(), p2_.ste1.peers.end());
  return out;
}

TrialResult Phase4Session::try_scalar(double kappa) {
  if (final_) return {Outcome::already_finalized, "session is already finalized", std::nullopt};
  if (!std::isfinite(kappa) || !(kappa > 0.0) || !interval().contains(kappa)) {
    return {Outcome::outside_interval, "outside feasible interval", std::nullopt};
  }
  const auto& basis = p2_.ste1.step1.solution.basis;
  auto s1 = solve_step1_from_basis(*working_, dmu_, ProgramKind::stea(kappa), basis);
  return {Outcome::accepted, {}, ScalarTrial{kappa, finish(s1)}};
}

TrialResult Phase4Session::what_if(double kappa) {
  auto result = try_scalar(kappa);
  if (result.accepted()) log_.push_back(*result.trial);
  return result;
}

TrialResult Phase4Session::finalize(double kappa) {
  auto result = try_scalar(kappa);
  if (result.accepted()) final_ = result.trial;
  return result;
}

Phase4Session Phase4Session::exclude_and_rerun(const std::set<std::string>& ids) const {
  if (ids.empty()) return *this;
  const auto candidates = peers();
  std::vector<std::string> problems;
  for (const auto& id : ids) {
    if (id == dmu_) problems.push_back("cannot exclude the assessed DMU '" + id + "'");
    else if (!candidates.contains(id)) problems.push_back("'" + id + "' is not a best peer");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  auto all = excluded_;
  all.insert(ids.begin(), ids.end());
  auto next = start(full_, dmu_, std::move(all));
  next.history_ = history_;
  next.history_.push_back(std::make_shared<const Phase4Session>(*this));
  return next;
}

}  // namespace vga
