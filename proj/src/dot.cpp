#include "nervelab/dot.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace nervelab {

std::string hasse_dot(const FinPoset& p, const std::vector<int>& filled,
                      const std::string& graph_name) {
  std::set<int> fill(filled.begin(), filled.end());
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n";
  os << "  rankdir=TB;\n";
  for (int i = 0; i < p.n; ++i) {
    os << "  n" << i << " [label=\"" << p.label(i) << "\"";
    if (fill.count(i)) os << ", shape=circle, style=filled, fillcolor=black, fontcolor=white";
    os << "];\n";
  }
  for (auto [a, b] : p.covers()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

std::string crt_dot(const CrtLattice& c) {
  FinPoset order = c.u.lat.order;  // labels are already up-set bitstrings
  std::vector<int> filled;
  for (int p = 0; p <= c.n; ++p)
    for (int q = 0; q <= c.n; ++q) filled.push_back(c.sigma(p, q));
  std::sort(filled.begin(), filled.end());
  filled.erase(std::unique(filled.begin(), filled.end()), filled.end());
  return hasse_dot(order, filled, cat("crt", c.n));
}

DegreeProfile hasse_degrees(const FinPoset& p) {
  DegreeProfile d;
  d.indeg.assign(p.n, 0);
  d.outdeg.assign(p.n, 0);
  for (auto [a, b] : p.covers()) {
    ++d.outdeg[a];
    ++d.indeg[b];
  }
  std::sort(d.indeg.begin(), d.indeg.end());
  std::sort(d.outdeg.begin(), d.outdeg.end());
  return d;
}

}  // namespace nervelab
