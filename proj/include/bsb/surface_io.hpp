#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bsb/stepper.hpp"

namespace bsb {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Long-form CSV, header "tau,s,value,policy", one row per (level, node).
/// The policy column carries the volatility selected by the step that
/// produced the level; level 0 and the boundary nodes leave it empty.
/// Numbers are printed with 17 significant digits, so repeated runs of the
/// same configuration are byte-identical.
void write_surface_csv(std::ostream& os, const PriceSurface& surface);
void write_surface_csv(const std::string& path, const PriceSurface& surface);

nlohmann::json report_to_json(const PolicyIterationReport& report);

/// Metadata sidecar: side, parameters, grid, solver options, per-step
/// iteration counts, and the verbatim run configuration under "config".
nlohmann::json surface_metadata(const PriceSurface& surface,
                                const nlohmann::json& config);
void write_surface_metadata(const std::string& path,
                            const PriceSurface& surface,
                            const nlohmann::json& config);

}  // namespace bsb
