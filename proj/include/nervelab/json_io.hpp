#pragma once

#include <map>
#include <string>

#include "nervelab/fincat.hpp"
#include "nervelab/poset.hpp"

namespace nervelab {

// Category document:
//   {"objects": [...],
//    "morphisms": [{"id": "...", "src": "...", "dst": "..."}, ...],
//    "compose": [["g", "f", "gf"], ...],           // g o f = gf
//    "identities": {"X": "idX", ...},              // optional; missing ones are auto-added
//    "classes": {"E1": ["p", "+ids"], ...}}        // optional; "+ids" expands to all identities
// Identity composites are filled in automatically; everything else must be total.
struct CategoryDoc {
  FinCat cat;
  std::map<std::string, EdgeClass> classes;

  int mor_by_name(const std::string& name) const;
  const EdgeClass& named_class(const std::string& name) const;
};

CategoryDoc parse_category(const std::string& json_text);
CategoryDoc load_category(const std::string& path);

std::string category_to_json(const FinCat& c,
                             const std::map<std::string, EdgeClass>& classes = {});
std::string poset_to_json(const FinPoset& p);     // {"elements": [...], "leq_pairs": [[i,j],...]}
std::string lattice_to_json(const FinLattice& l);
FinPoset poset_from_json(const std::string& json_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace nervelab
