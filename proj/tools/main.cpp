// optomech: steady-state output entanglement of a three-mode optomechanical
// system. Single-point evaluation, parameter sweeps, coupling/delay
// optimization and figure reproduction with CSV/SVG output.

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "optomech/commands.hpp"

namespace {

constexpr const char* kUsage = R"(usage: optomech [config-file] [--key=value ...] [flags]

The optional config file is a sectioned key = value text file; every field
can be overridden on the command line as --key=value (sections addressed as
--section.key=value, e.g. --params.g2=0.9).

modes (mode = point | sweep | optimize | figure):
  point      print moments, E_N and closed-form predictions for one setup
  sweep      write sweep.csv over g2_over_g1 / g1_over_kappa /
             omega_over_kappa / tau
  optimize   locate the optimal coupling (target = g2) or delay (target = tau)
  figure     write <figure_id>.csv (+ .svg) for figure_id = 2a..3c

flags:
  --json       structured point report on stdout
  --emit-svg   also write an SVG chart next to each CSV
  --output=DIR output directory (default ".")
  --help       this text

units: rates are configured in units of kappa, kappa itself in units of the
mechanical decay rate (gamma = 1), tau in units of 1/kappa.

exit codes: 0 success, 2 config error, 3 unstable parameters,
            4 numerical failure.
)";

}  // namespace

int main(int argc, char** argv) {
  std::string config_path;
  std::vector<std::string> overrides;

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--help" || arg == "-h") {
      std::cout << kUsage;
      return 0;
    }
    if (arg == "--json") {
      overrides.push_back("json=true");
    } else if (arg == "--emit-svg") {
      overrides.push_back("emit_svg=true");
    } else if (arg.rfind("--", 0) == 0) {
      const std::string body = arg.substr(2);
      if (body.find('=') == std::string::npos) {
        std::cerr << "config error: flag '" << arg << "' expects --key=value\n";
        return optomech::kExitConfigError;
      }
      overrides.push_back(body);
    } else if (config_path.empty()) {
      config_path = arg;
    } else {
      std::cerr << "config error: unexpected positional argument '" << arg << "'\n";
      return optomech::kExitConfigError;
    }
  }

  try {
    const optomech::RunConfig config = optomech::RunConfig::load(config_path, overrides);
    return optomech::dispatch(config, std::cout, std::cerr);
  } catch (const optomech::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return optomech::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
