#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scgtf/if_trajectory.hpp"

namespace scgtf {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitUsage = 2, kExitValidation = 3, kExitIo = 4 };

// Entry point behind the `scgtf` executable: synth | analyze | compare.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct TruthFile {
  std::string signal_id;
  double sample_rate_hz{0.0};
  std::size_t dominant_component{0};
  std::vector<IFTrajectory> trajectories;
};

TruthFile parse_truth_json(const std::string& text);

}  // namespace scgtf
