#pragma once

// Artifact serialization: fixed-format CSV, JSON text, a small SVG line
// renderer and all-or-nothing file output.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cstirap/chain_model.hpp"
#include "cstirap/propagator.hpp"

namespace cstirap {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits in scientific notation.
[[nodiscard]] std::string format_number(double value);

/// Lower-case alphanumerics with runs of anything else collapsed to '_'.
[[nodiscard]] std::string sanitize_label(const std::string& label);

/// Column names "pop_<label>", made unique by appending the level index on clashes.
[[nodiscard]] std::vector<std::string> population_columns(const ChainSystem& system);

[[nodiscard]] std::string csv_escape(const std::string& field);

[[nodiscard]] std::string timeseries_csv(const ChainSystem& system, const Trajectory& traj);

/// Three stacked panels: pump/Stokes Rabi frequencies, intermediate ground
/// populations, initial and target populations.
[[nodiscard]] std::string populations_svg(const ChainSystem& system, const Trajectory& traj);

using Artifact = std::pair<std::string, std::string>;  // file name, contents

/// Writes every artifact to a temporary file in `dir`, then renames them all
/// into place. Throws IoError; on failure no temporary file is left behind.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

}  // namespace cstirap
