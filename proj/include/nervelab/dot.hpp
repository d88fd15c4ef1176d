#pragma once

#include <string>
#include <vector>

#include "nervelab/poset.hpp"

namespace nervelab {

// Graphviz text for the Hasse diagram of a poset; nodes listed in index order,
// edges in (src, dst) order, so output is byte-stable. Nodes whose index is in
// `filled` are drawn as filled bullets, matching the figures' convention.
std::string hasse_dot(const FinPoset& p, const std::vector<int>& filled = {},
                      const std::string& graph_name = "hasse");

// Crt^n export: nodes labeled by up-set bitstrings, sigma-image nodes filled.
std::string crt_dot(const CrtLattice& c);

struct DegreeProfile {
  std::vector<int> indeg, outdeg;  // sorted multisets over Hasse edges
};
DegreeProfile hasse_degrees(const FinPoset& p);

}  // namespace nervelab
