#include "vga/tools/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "common.hpp"
#include "vga/errors.hpp"
#include "vga/four_phase.hpp"
#include "vga/report.hpp"
#include "vga/sbm.hpp"
#include "vga/tools/service.hpp"

namespace vga::tools {

namespace {

struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError({"cannot write '" + out_path + "'"});
  f << text;
}

std::set<std::string> split_ids(const std::vector<std::string>& raw) {
  std::set<std::string> ids;
  for (const auto& item : raw) {
    std::istringstream is(item);
    std::string id;
    while (std::getline(is, id, ','))
      if (!id.empty()) ids.insert(id);
  }
  return ids;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Virtual gap analysis: assessments, four-phase sessions and an SBM baseline", "vga"};
  app.require_subcommand(1);

  std::string data, dmu, program = "pte", out_path, format = "json", frame = "ste", data_dir, host = "0.0.0.0";
  std::optional<double> kappa, kappa_target;
  std::optional<int> port;
  std::vector<std::string> exclude;

  auto* assess_cmd = app.add_subcommand("assess", "Assess one DMU under PTE or STEa");
  assess_cmd->add_option("--data", data, "Dataset file (.csv or .json)")->required();
  assess_cmd->add_option("--dmu", dmu, "Assessed DMU id")->required();
  assess_cmd->add_option("--program", program, "pte or ste")->check(CLI::IsMember({"pte", "ste"}));
  assess_cmd->add_option("--kappa", kappa, "SIC scalar for --program ste");
  assess_cmd->add_option("--out", out_path, "Report file (stdout if omitted)");
  assess_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* phases_cmd = app.add_subcommand("phases", "Run the four-phase procedure and write a session snapshot");
  phases_cmd->add_option("--data", data, "Dataset file")->required();
  phases_cmd->add_option("--dmu", dmu, "Assessed DMU id")->required();
  phases_cmd->add_option("--exclude", exclude, "Peers to drop before rerunning (comma separated)");
  phases_cmd->add_option("--kappa-target", kappa_target, "Scalar to finalize");
  phases_cmd->add_option("--out", out_path, "Snapshot file (stdout if omitted)");

  auto* sbm_cmd = app.add_subcommand("sbm", "Compare the CRS SBM with the PTE assessment");
  sbm_cmd->add_option("--data", data, "Dataset file")->required();
  sbm_cmd->add_option("--dmu", dmu, "Assessed DMU id")->required();
  sbm_cmd->add_option("--out", out_path, "Report file (stdout if omitted)");

  auto* geo_cmd = app.add_subcommand("geometry", "Export the virtual technology plot");
  geo_cmd->add_option("--data", data, "Dataset file")->required();
  geo_cmd->add_option("--dmu", dmu, "Assessed DMU id")->required();
  geo_cmd->add_option("--program", program, "pte or ste")->check(CLI::IsMember({"pte", "ste"}));
  geo_cmd->add_option("--kappa", kappa, "SIC scalar for --program ste");
  geo_cmd->add_option("--frame", frame, "pte or ste")->check(CLI::IsMember({"pte", "ste"}));
  geo_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");

  auto* serve_cmd = app.add_subcommand("serve", "Run the JSON service");
  serve_cmd->add_option("--port", port, std::string("Port (default $") + kPortEnv + " or 8080)");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--data-dir", data_dir, "Directory for dataset and session snapshots");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*assess_cmd) {
      const auto d = load_dataset(data);
      const auto a = assess(d, dmu, program_kind(program, kappa));
      emit(format == "csv" ? assessment_csv(d, a) : dump_report(assessment_report(d, a)), out_path, out);
    } else if (*phases_cmd) {
      auto d = std::make_shared<const Dataset>(load_dataset(data));
      auto session = Phase4Session::start(d, dmu);
      const auto ids = split_ids(exclude);
      if (!ids.empty()) session = session.exclude_and_rerun(ids);
      if (kappa_target) {
        const auto r = session.finalize(*kappa_target);
        if (!r.accepted()) throw Rejected(r.reason);
      }
      emit(dump_report(session_report(session)), out_path, out);
    } else if (*sbm_cmd) {
      const auto d = load_dataset(data);
      emit(dump_report(sbm_report(compare_sbm_vga(d, dmu))), out_path, out);
    } else if (*geo_cmd) {
      const auto d = load_dataset(data);
      const auto a = assess(d, dmu, program_kind(program, kappa));
      emit(dump_report(geometry_report(d, a, frame == "pte" ? Frame::pte : Frame::ste)), out_path, out);
    } else if (*serve_cmd) {
      std::optional<std::filesystem::path> dir;
      if (!data_dir.empty()) dir = data_dir;
      return serve(resolve_port(port), dir, host);
    }
  } catch (const Rejected& e) {
    err << "vga: rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const AssessmentError& e) {
    err << "vga: " << e.what() << '\n';
    return kExitRejected;
  } catch (const ParseError& e) {
    err << "vga: parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "vga: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "vga: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "vga: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace vga::tools
