#ifndef OPTOMECH_COMMANDS_HPP
#define OPTOMECH_COMMANDS_HPP

#include <iosfwd>

#include "optomech/runconfig.hpp"

namespace optomech {

// Process exit codes of the command layer.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInstability = 3;
inline constexpr int kExitNumericalFailure = 4;

// Runs the configured mode: point evaluation to `out`, sweep/figure CSV (and
// SVG when enabled) into config.output_dir. Returns the process exit code and
// reports failures on `err`.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace optomech

#endif  // OPTOMECH_COMMANDS_HPP
