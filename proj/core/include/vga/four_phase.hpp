#pragma once

// The four-phase procedure for one unit:
//   1. PTE gives the first SIC scalar kappa1 = sum of peer intensities.
//   2. STE1 solves the SIC program at kappa1.
//   3. Rhs ranging on the SIC row of STE1 gives the second scalar kappa2.
//   4. The unit tries scalars inside [kappa2, kappa1] (or [kappa1, kappa2]),
//      optionally drops incompatible peers and reruns 1-3, then commits.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vga/dataset.hpp"
#include "vga/models.hpp"
#include "vga/simplex.hpp"

namespace vga {

inline constexpr double kUnboundedRangeCap = 10.0;  // open bound reported at kappa1 * (1 +/- cap)

struct KappaInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_open = false;  // capped because ranging was unbounded
  bool upper_open = false;

  bool contains(double kappa) const;
  bool collapsed() const { return lower == upper; }
};

enum class ScalarDirection { none, decrease, increase };
std::string to_string(ScalarDirection d);

struct Phase1Result {
  VgaAssessment pte;
  double kappa1 = 0.0;
};

struct Phase2Result {
  VgaAssessment ste1;
  ScalarDirection direction = ScalarDirection::none;
  // Step I relationships between PTE and STE1 at kappa1.
  bool same_slack_ratios = false;
  bool same_slack_price = false;
  bool intensity_sum_matches = false;
  bool prices_differ = false;
};

struct Phase3Result {
  lp::RhsRange range;
  double kappa2 = 0.0;
  KappaInterval interval;
  VgaAssessment ste2;
  // Relationships between STE1 and STE2.
  bool same_peers = false;
  bool same_step1_prices = false;
  bool intensities_differ = false;
};

Phase1Result phase1(const Dataset& d, std::string_view o);
Phase2Result phase2(const Dataset& d, std::string_view o, const Phase1Result& p1);
Phase3Result phase3(const Dataset& d, std::string_view o, const Phase1Result& p1, const Phase2Result& p2);

enum class Outcome { accepted, outside_interval, already_finalized };
std::string to_string(Outcome o);

struct ScalarTrial {
  double kappa = 0.0;
  VgaAssessment assessment;
};

struct TrialResult {
  Outcome outcome = Outcome::accepted;
  std::string reason;
  std::optional<ScalarTrial> trial;

  bool accepted() const noexcept { return outcome == Outcome::accepted; }
};

/// Mutating calls (what_if, finalize) need external serialization per
/// session; const access is safe to share.
class Phase4Session {
 public:
  /// Runs phases 1-3 on `full` minus `excluded`.
  static Phase4Session start(std::shared_ptr<const Dataset> full, std::string o,
                             std::set<std::string> excluded = {});

  const Dataset& full_dataset() const { return *full_; }
  const Dataset& dataset() const { return *working_; }
  const std::string& dmu() const { return dmu_; }
  const std::set<std::string>& excluded() const { return excluded_; }

  const Phase1Result& phase1() const { return p1_; }
  const Phase2Result& phase2() const { return p2_; }
  const Phase3Result& phase3() const { return p3_; }
  double kappa1() const { return p1_.kappa1; }
  double kappa2() const { return p3_.kappa2; }
  const KappaInterval& interval() const { return p3_.interval; }
  ScalarDirection direction() const { return p2_.direction; }

  /// Peers of PTE and STE1 (candidates for exclusion).
  std::set<std::string> peers() const;

  const std::vector<ScalarTrial>& what_if_log() const { return log_; }
  const std::optional<ScalarTrial>& final_choice() const { return final_; }
  bool finalized() const { return final_.has_value(); }
  std::size_t round() const { return history_.size(); }
  const std::vector<std::shared_ptr<const Phase4Session>>& history() const { return history_; }

  /// Solves STEa(kappa) with the STE1 basis and appends it to the log.
  TrialResult what_if(double kappa);
  TrialResult finalize(double kappa);

  /// Fresh session without the given peers; this one is kept in history.
  /// Throws ValidationError for non-peers, the assessed unit itself or a
  /// dataset that becomes too small.
  Phase4Session exclude_and_rerun(const std::set<std::string>& ids) const;

 private:
  Phase4Session() = default;
  TrialResult try_scalar(double kappa);

  std::shared_ptr<const Dataset> full_;
  std::shared_ptr<const Dataset> working_;
  std::string dmu_;
  std::set<std::string> excluded_;
  Phase1Result p1_;
  Phase2Result p2_;
  Phase3Result p3_;
  std::vector<ScalarTrial> log_;
  std::optional<ScalarTrial> final_;
  std::vector<std::shared_ptr<const Phase4Session>> history_;
};

}  // namespace vga
