#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "vga/errors.hpp"
#include "vga/models.hpp"

namespace vga::tools {

/// Maps --program/--kappa (or the JSON equivalents) to a program kind.
inline ProgramKind program_kind(const std::string& program, std::optional<double> kappa) {
  if (program == "pte") {
    if (kappa) throw ValidationError({"kappa applies only to program 'ste'"});
    return ProgramKind::pte();
  }
  if (program == "ste" || program == "stea") {
    if (!kappa) throw ValidationError({"program 'ste' needs kappa"});
    if (!(*kappa > 0.0)) throw ValidationError({"kappa must be positive"});
    return ProgramKind::stea(*kappa);
  }
  throw ValidationError({"unknown program '" + program + "' (expected pte or ste)"});
}

}  // namespace vga::tools
