#pragma once

// End-to-end run of the worked examples: the constructed example against its
// closed form, the zero-curvature families, the local sign censuses, the
// disputed table entries and the CMC identities.

#include <cstdint>
#include <string>
#include <vector>

namespace modsurf {

struct ReproItem {
  std::string name;
  bool passed = false;
  bool disputed = false;  // the printed claim disagrees with direct evaluation
  std::string detail;
  double seconds = 0;
};

struct ReproReport {
  std::vector<ReproItem> items;
  bool all_passed() const;
};

ReproReport run_repro(std::uint64_t seed = 1);

}  // namespace modsurf
