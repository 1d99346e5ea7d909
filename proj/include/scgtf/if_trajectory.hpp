#pragma once

#include <cstddef>
#include <vector>

namespace scgtf {

// Instantaneous-frequency estimate per time instant; entries with
// valid[i] == false carry no information.
struct IFTrajectory {
  std::vector<double> times_s;
  std::vector<double> freqs_hz;
  std::vector<bool> valid;

  std::size_t size() const { return times_s.size(); }
  std::size_t count_valid() const;

  // Throws InvalidArgument on length mismatch or non-increasing times.
  void validate() const;
};

}  // namespace scgtf
