#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vga {

/// Name and measurement unit of one input or output index, e.g. "fuel" [ton].
struct IndexLabel {
  std::string name;
  std::string unit;

  bool operator==(const IndexLabel&) const = default;
};

struct DmuRecord {
  std::string id;
  std::vector<double> inputs;   // x_ij, one per input index
  std::vector<double> outputs;  // y_rj, one per output index

  bool operator==(const DmuRecord&) const = default;
};

/// Observed (X, Y) of n units with m inputs and s outputs. Column order of
/// the source file defines index order; DMU order is preserved everywhere.
class Dataset {
 public:
  Dataset() = default;
  /// Throws ValidationError when any invariant is violated.
  Dataset(std::vector<IndexLabel> input_names, std::vector<IndexLabel> output_names,
          std::vector<DmuRecord> dmus);

  /// Builds without validation; used to report violations instead of throwing.
  static Dataset unchecked(std::vector<IndexLabel> input_names,
                           std::vector<IndexLabel> output_names,
                           std::vector<DmuRecord> dmus);

  std::size_t n() const noexcept { return dmus_.size(); }
  std::size_t m() const noexcept { return input_names_.size(); }
  std::size_t s() const noexcept { return output_names_.size(); }

  const std::vector<IndexLabel>& input_names() const noexcept { return input_names_; }
  const std::vector<IndexLabel>& output_names() const noexcept { return output_names_; }
  const std::vector<DmuRecord>& dmus() const noexcept { return dmus_; }

  double x(std::size_t i, std::size_t j) const { return dmus_[j].inputs[i]; }
  double y(std::size_t r, std::size_t j) const { return dmus_[j].outputs[r]; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  /// Throws ValidationError for unknown ids.
  std::size_t require_index(std::string_view id) const;
  const DmuRecord& dmu(std::string_view id) const { return dmus_[require_index(id)]; }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<IndexLabel> input_names_;
  std::vector<IndexLabel> output_names_;
  std::vector<DmuRecord> dmus_;
};

/// Every invariant violation found; empty when the dataset is valid.
std::vector<std::string> validate(const Dataset& d);

/// Returns a copy without the listed units. Throws ValidationError on unknown
/// ids or when the remaining set breaks the n > m + s rule.
Dataset exclude_dmus(const Dataset& d, const std::set<std::string>& ids);

// CSV header: id,x:<name>[unit],...,y:<name>[unit],...
Dataset parse_csv(std::string_view text);
std::string to_csv(const Dataset& d);
Dataset load_csv(const std::filesystem::path& path);
void write_csv(const Dataset& d, const std::filesystem::path& path);

// JSON mirror: {input_names, output_names, dmus:[{id, inputs, outputs}]}
Dataset parse_json(std::string_view text);
std::string to_json_text(const Dataset& d);

/// Dispatches on extension: ".json" reads the JSON mirror, anything else CSV.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace vga
