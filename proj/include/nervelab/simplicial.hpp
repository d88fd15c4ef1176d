#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nervelab/fincat.hpp"
#include "nervelab/poset.hpp"

namespace nervelab {

// Monotone surjection [n] ->> [p], stored pointwise (size n+1, values 0..p).
// Degeneracy words in Eilenberg-Zilber normal form are exactly these maps, so a
// possibly-degenerate simplex is one (nondegenerate core, surjection) pair and
// equality of simplices is equality of pairs.
using Surj = std::vector<int>;

Surj identity_surj(int n);
Surj compose_surj(const Surj& outer, const Surj& inner);  // outer o inner
bool is_surjection_onto(const Surj& s, int p);

struct SimplexRef {
  int core_dim = 0;
  int core_id = 0;
  Surj surj;  // [dim] ->> [core_dim]

  int dim() const { return static_cast<int>(surj.size()) - 1; }
  bool nondegenerate() const { return core_dim == dim(); }
  bool operator==(const SimplexRef& o) const {
    return core_dim == o.core_dim && core_id == o.core_id && surj == o.surj;
  }
  bool operator!=(const SimplexRef& o) const { return !(*this == o); }
};

SimplexRef nondeg_ref(int dim, int id);

inline constexpr int kDimCap = 8;

// Dimension-truncated simplicial set: only nondegenerate simplices are stored,
// with full face tables; degeneracies are implicit through the normal form.
struct TruncSSet {
  struct Simplex {
    std::vector<int> vertices;       // labels = indices into dims[0]
    std::vector<SimplexRef> faces;   // n+1 refs of dimension n-1 (empty in dim 0)
  };

  int max_dim = 0;
  bool lossless = true;  // false when truncation cut nondegenerate data
  std::vector<std::vector<Simplex>> dims;
  std::vector<std::string> vertex_labels;

  int count(int n) const {
    return n >= 0 && n <= max_dim ? static_cast<int>(dims[n].size()) : 0;
  }
  int total() const;
  const Simplex& at(int n, int id) const { return dims[n][id]; }
  SimplexRef face(const SimplexRef& r, int i) const;
  SimplexRef degeneracy(const SimplexRef& r, int j) const;
  std::vector<int> vertices_of(const SimplexRef& r) const;

  // nondegenerate simplex lookup by vertex tuple; only complexes whose simplices
  // are determined by their vertices (poset nerves, standard complexes) may call it
  std::optional<int> by_vertices(int n, const std::vector<int>& vs) const;

  void validate() const;           // face-table consistency + simplicial identities
  std::uint64_t digest() const;    // canonical digest of the nondegenerate inventory
};

TruncSSet nerve_of(const FinCat& c, int dim_cap, int hard_cap = kDimCap);
TruncSSet nerve_of(const FinPoset& p, int dim_cap, int hard_cap = kDimCap);

enum class StdKind { simplex, boundary, horn };
TruncSSet standard_complex(StdKind kind, int n, int k = -1);

// Product through dimension out_dim (default: the common truncation). Requesting
// more than a factor's stored truncation is allowed only when that factor is
// lossless, in which case the higher simplices are all degenerate and computable.
TruncSSet product(const TruncSSet& x, const TruncSSet& y, int out_dim = -1);

// Face-closed subcomplex spanned by the given nondegenerate ids (per dimension);
// keep[n] must be sorted. id_maps[n][old] = new id or -1.
TruncSSet subcomplex(const TruncSSet& x, const std::vector<std::vector<int>>& keep,
                     std::vector<std::vector<int>>* id_maps = nullptr);

// Simplicial map: image of every nondegenerate source simplex (the image may be
// degenerate). Degeneracy compatibility is automatic in this representation, so
// only face commutation is a real condition.
struct SMap {
  const TruncSSet* src = nullptr;
  const TruncSSet* dst = nullptr;
  std::vector<std::vector<SimplexRef>> image;  // [dim][id]

  SimplexRef apply(const SimplexRef& r) const;
};

struct SMapCheck {
  bool ok = true;
  int dim = -1, id = -1, face_index = -1;  // first violation
};
SMapCheck check_simplicial_map(const SMap& f);

struct HornReport {
  bool inner_fibrant = true;   // every inner horn has >= 1 filler
  bool nerve_like = true;      // every inner horn has exactly 1 filler
  long long horns_checked = 0;
  bool cap_exceeded = false;
  struct Horn {
    int m = 0, k = 0;
    std::vector<std::vector<int>> face_vertices;  // vertex tuples of the horn faces
    long long fillers = 0;
  };
  std::vector<Horn> unfillable;      // first few
  std::vector<Horn> multi_filler;    // first few
};
HornReport inner_horn_report(const TruncSSet& x, int max_dim,
                             long long horn_cap = 1000000);

std::string complex_to_json(const TruncSSet& x);
TruncSSet complex_from_json(const std::string& text);

}  // namespace nervelab
