// Rule-based stochastic document generation over the composition-link
// structure: seeded track creation, per-(track, section) place/reuse/new
// choices, and the four predefined transformations.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomi/gen/icl_prompt.h"

namespace tomi {

struct KeywordPools {
  std::vector<std::string> tonal;
  std::vector<std::string> percussion;
  std::vector<std::string> sfx;  // each entry is "riser" or "faller" flavored

  static KeywordPools defaults();
};

/// JSON file with "tonal" / "percussion" / "sfx" string arrays; built-in
/// defaults on a missing file.
KeywordPools loadKeywordPools(const std::string& path);

struct RandomGenConfig {
  double skip_probability = 0.5;
  double reuse_probability = 0.25;  // remainder creates a new clip
  KeywordPools pools = KeywordPools::defaults();
};

/// Seeded document generation. The context must carry a section sequence.
/// Bass clip progressions always copy some chord clip's progression; every
/// clip is linked through exactly one of the four predefined transforms.
/// The result always passes validation with zero blocking issues.
TomiDocument randomGenerate(const GenerationContext& ctx,
                            const RandomGenConfig& config, uint64_t seed);

}  // namespace tomi
