#include "vga/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "vga/errors.hpp"

namespace vga {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// "fuel[ton]" -> {fuel, ton}; a missing bracket means no unit.
IndexLabel parse_label(std::string_view text) {
  text = trim(text);
  auto open = text.find('[');
  if (open == std::string_view::npos) return {std::string(text), {}};
  if (text.back() != ']') throw ParseError("unterminated unit in column label '" + std::string(text) + "'");
  return {std::string(trim(text.substr(0, open))),
          std::string(text.substr(open + 1, text.size() - open - 2))};
}

std::string format_label(const IndexLabel& l) {
  return l.unit.empty() ? l.name : l.name + "[" + l.unit + "]";
}

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(field) +
                     "' is not a number");
  }
  return value;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset::Dataset(std::vector<IndexLabel> input_names, std::vector<IndexLabel> output_names,
                 std::vector<DmuRecord> dmus)
    : input_names_(std::move(input_names)),
      output_names_(std::move(output_names)),
      dmus_(std::move(dmus)) {
  if (auto violations = validate(*this); !violations.empty()) throw ValidationError(std::move(violations));
}

Dataset Dataset::unchecked(std::vector<IndexLabel> input_names,
                           std::vector<IndexLabel> output_names, std::vector<DmuRecord> dmus) {
  Dataset d;
  d.input_names_ = std::move(input_names);
  d.output_names_ = std::move(output_names);
  d.dmus_ = std::move(dmus);
  return d;
}

std::optional<std::size_t> Dataset::index_of(std::string_view id) const {
  for (std::size_t j = 0; j < dmus_.size(); ++j)
    if (dmus_[j].id == id) return j;
  return std::nullopt;
}

std::size_t Dataset::require_index(std::string_view id) const {
  if (auto j = index_of(id)) return *j;
  throw ValidationError({"unknown DMU id '" + std::string(id) + "'"});
}

std::vector<std::string> validate(const Dataset& d) {
  std::vector<std::string> out;
  const auto m = d.m();
  const auto s = d.s();
  if (m == 0) out.emplace_back("dataset needs at least one input index");
  if (s == 0) out.emplace_back("dataset needs at least one output index");
  if (d.n() <= m + s) {
    out.push_back("n must exceed m+s (n=" + std::to_string(d.n()) + ", m+s=" + std::to_string(m + s) + ")");
  }

  std::unordered_set<std::string> seen;
  bool shape_ok = true;
  for (const auto& dmu : d.dmus()) {
    if (dmu.id.empty()) out.emplace_back("empty DMU id");
    if (!seen.insert(dmu.id).second) out.push_back("duplicate id '" + dmu.id + "'");
    if (dmu.inputs.size() != m || dmu.outputs.size() != s) {
      out.push_back("DMU '" + dmu.id + "' has wrong number of values");
      shape_ok = false;
      continue;
    }
    auto check = [&](double v, const IndexLabel& label) {
      if (!std::isfinite(v)) {
        out.push_back("non-finite value for DMU '" + dmu.id + "' index '" + label.name + "'");
      } else if (v < 0.0) {
        out.push_back("negative value for DMU '" + dmu.id + "' index '" + label.name + "'");
      }
    };
    for (std::size_t i = 0; i < m; ++i) check(dmu.inputs[i], d.input_names()[i]);
    for (std::size_t r = 0; r < s; ++r) check(dmu.outputs[r], d.output_names()[r]);
  }

  if (shape_ok && d.n() > 0) {
    auto column_positive = [&](auto value_of) {
      return std::any_of(d.dmus().begin(), d.dmus().end(),
                         [&](const DmuRecord& r) { return value_of(r) > 0.0; });
    };
    for (std::size_t i = 0; i < m; ++i)
      if (!column_positive([i](const DmuRecord& r) { return r.inputs[i]; }))
        out.push_back("zero index column: input '" + d.input_names()[i].name + "'");
    for (std::size_t r = 0; r < s; ++r)
      if (!column_positive([r](const DmuRecord& rec) { return rec.outputs[r]; }))
        out.push_back("zero index column: output '" + d.output_names()[r].name + "'");
  }
  return out;
}

Dataset exclude_dmus(const Dataset& d, const std::set<std::string>& ids) {
  if (ids.empty()) return d;
  std::vector<std::string> unknown;
  for (const auto& id : ids)
    if (!d.index_of(id)) unknown.push_back("unknown DMU id '" + id + "'");
  if (!unknown.empty()) throw ValidationError(std::move(unknown));

  std::vector<DmuRecord> kept;
  kept.reserve(d.n());
  for (const auto& dmu : d.dmus())
    if (!ids.contains(dmu.id)) kept.push_back(dmu);
  return Dataset(d.input_names(), d.output_names(), std::move(kept));
}

Dataset parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto& l : split(text, '\n'))
    if (!l.empty()) lines.push_back(l);
  if (lines.empty()) throw ParseError("empty CSV");

  // strip a UTF-8 byte order mark
  std::string_view header_line = lines.front();
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  auto header = split(header_line, ',');
  if (header.empty() || header.front() != "id") throw ParseError("header must start with 'id'");

  std::vector<IndexLabel> inputs, outputs;
  for (std::size_t c = 1; c < header.size(); ++c) {
    auto h = header[c];
    if (h.starts_with("x:")) {
      if (!outputs.empty()) throw ParseError("input column '" + std::string(h) + "' after output columns");
      inputs.push_back(parse_label(h.substr(2)));
    } else if (h.starts_with("y:")) {
      outputs.push_back(parse_label(h.substr(2)));
    } else {
      throw ParseError("column '" + std::string(h) + "' must be prefixed x: or y:");
    }
  }

  std::vector<DmuRecord> dmus;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto fields = split(lines[k], ',');
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(k + 1) + ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    }
    DmuRecord rec;
    rec.id = std::string(fields[0]);
    for (std::size_t i = 0; i < inputs.size(); ++i) rec.inputs.push_back(parse_number(fields[1 + i], k + 1));
    for (std::size_t r = 0; r < outputs.size(); ++r)
      rec.outputs.push_back(parse_number(fields[1 + inputs.size() + r], k + 1));
    dmus.push_back(std::move(rec));
  }
  return Dataset(std::move(inputs), std::move(outputs), std::move(dmus));
}

std::string to_csv(const Dataset& d) {
  std::ostringstream out;
  out << "id";
  for (const auto& l : d.input_names()) out << ",x:" << format_label(l);
  for (const auto& l : d.output_names()) out << ",y:" << format_label(l);
  out << '\n';
  for (const auto& dmu : d.dmus()) {
    out << dmu.id;
    for (double v : dmu.inputs) out << ',' << format_number(v);
    for (double v : dmu.outputs) out << ',' << format_number(v);
    out << '\n';
  }
  return out.str();
}

namespace {
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

Dataset load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_csv(d);
}

Dataset parse_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    auto labels = [](const json& arr) {
      std::vector<IndexLabel> out;
      for (const auto& item : arr) {
        if (item.is_string()) {
          out.push_back(parse_label(item.get<std::string>()));
        } else {
          out.push_back({item.at("name").get<std::string>(), item.value("unit", std::string{})});
        }
      }
      return out;
    };
    auto inputs = labels(doc.at("input_names"));
    auto outputs = labels(doc.at("output_names"));
    std::vector<DmuRecord> dmus;
    for (const auto& item : doc.at("dmus")) {
      dmus.push_back({item.at("id").get<std::string>(), item.at("inputs").get<std::vector<double>>(),
                      item.at("outputs").get<std::vector<double>>()});
    }
    return Dataset(std::move(inputs), std::move(outputs), std::move(dmus));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed dataset JSON: ") + e.what());
  }
}

std::string to_json_text(const Dataset& d) {
  using nlohmann::json;
  json doc;
  doc["input_names"] = json::array();
  doc["output_names"] = json::array();
  for (const auto& l : d.input_names()) doc["input_names"].push_back(format_label(l));
  for (const auto& l : d.output_names()) doc["output_names"].push_back(format_label(l));
  doc["dmus"] = json::array();
  for (const auto& dmu : d.dmus())
    doc["dmus"].push_back({{"id", dmu.id}, {"inputs", dmu.inputs}, {"outputs", dmu.outputs}});
  return doc.dump(2);
}

Dataset load_dataset(const std::filesystem::path& path) {
  if (path.extension() == ".json") return parse_json(read_file(path));
  return load_csv(path);
}

}  // namespace vga
