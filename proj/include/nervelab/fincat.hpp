#pragma once

#include <array>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "nervelab/common.hpp"
#include "nervelab/poset.hpp"

namespace nervelab {

// Finite category with a total composition table. Objects and morphisms are
// indexed; composition comp(g, f) = g o f is defined exactly when dst(f) = src(g).
struct FinCat {
  struct Mor {
    std::string name;
    int src = 0, dst = 0;
  };

  std::vector<std::string> objects;
  std::vector<Mor> mors;
  std::vector<int> identity;  // object -> morphism index
  std::vector<int> comp;      // comp[g*M+f] = g o f, or -1 when not composable

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_mors() const { return static_cast<int>(mors.size()); }
  bool composable(int g, int f) const { return mors[f].dst == mors[g].src; }
  int compose(int g, int f) const;  // g o f
  bool is_identity(int m) const { return identity[mors[m].src] == m && mors[m].src == mors[m].dst; }
  int hom_count(int x, int y) const;
  std::vector<int> hom(int x, int y) const;
  bool is_iso(int m) const;
  std::optional<int> inverse(int m) const;

  // identity/unit laws and exhaustive associativity; throws on violation
  void validate() const;
};

FinCat category_from_poset(const FinPoset& p);
FinCat opposite_category(const FinCat& c);

struct EdgeClass {
  std::string name;
  std::vector<char> member;  // indexed by morphism

  bool has(int m) const { return member[m] != 0; }
};

EdgeClass class_of_all(const FinCat& c, std::string name = "all");
EdgeClass class_of_identities(const FinCat& c, std::string name = "ids");
EdgeClass class_of_isos(const FinCat& c, std::string name = "isos");
EdgeClass class_from_list(const FinCat& c, const std::vector<int>& ms, std::string name);

// A commuting square
//   nw --top--> ne
//   |            |
//  left        right
//   v            v
//   sw -bottom-> se
// with right o top = bottom o left. In nerve direction terms, left/right are the
// vertical (direction 1) edges and top/bottom the horizontal (direction 2) ones.
struct Square {
  int top, left, right, bottom;
};

Square make_square(const FinCat& c, int top, int left, int right, int bottom);  // checks commuting
bool square_commutes(const FinCat& c, const Square& s);

struct PullbackCone {
  int apex = -1;
  int leg1 = -1, leg2 = -1;  // apex -> y, apex -> z
  int f = -1, g = -1;        // the cospan y -> x <- z
  // terminality witness: every commuting cone (w, a, b) with its unique factorization h
  std::vector<std::array<int, 4>> factorizations;  // (w, a, b, h)
};

// Terminal cone over the cospan (f : y -> x, g : z -> x), or nullopt when none exists.
// Deterministic: among terminal cones the one with smallest (apex, leg1, leg2) wins.
std::optional<PullbackCone> pullback(const FinCat& c, int f, int g);

bool admits_all_pullbacks(const FinCat& c);
std::optional<std::pair<int, int>> first_missing_pullback(const FinCat& c);

// True iff (nw, top, left) is a terminal cone over (right, bottom).
bool is_cartesian_square(const FinCat& c, const Square& s);

// The unique map y -> y x_x y induced by (id, id); second = whether it is an isomorphism.
struct DiagonalResult {
  int diagonal = -1;
  int apex = -1;
  bool is_iso = false;
};
std::optional<DiagonalResult> diagonal_of(const FinCat& c, int f);

struct ClassReport {
  bool contains_identities = true;
  std::optional<int> missing_identity;
  bool comp_stable = true;
  std::optional<std::pair<int, int>> comp_witness;  // (g, f) with g,f in E but g o f not
  bool pullback_stable = true;                      // by all morphisms
  std::optional<Square> pullback_witness;
  std::vector<std::pair<std::string, bool>> pullback_stable_by;  // per supplied class
  std::vector<std::optional<Square>> pullback_by_witness;
  bool cancellation = true;                          // p in E: q in E iff p o q in E
  std::optional<std::tuple<int, int, int>> cancellation_witness;  // (p, q, pq)
  bool admissible = false;
};
ClassReport class_properties(const FinCat& c, const EdgeClass& e,
                             const std::vector<EdgeClass>& others = {});

struct FactorizationReport {
  bool all_factor = true;
  std::optional<int> unfactored;                       // first f with no factorization
  std::vector<std::vector<std::pair<int, int>>> factors;  // per morphism: (p, q) with f = p o q
};
FactorizationReport factorization_check(const FinCat& c, const EdgeClass& e1, const EdgeClass& e2);

struct FilteredReport {
  bool filtered = false;
  bool nonempty = true;
  std::optional<std::pair<int, int>> uncoconed_pair;            // objects without a cocone
  std::optional<std::pair<int, int>> unequalized_pair;          // parallel morphisms
  std::vector<std::tuple<int, int, int, int, int>> cocones;     // (x, y, z, x->z, y->z)
  std::vector<std::tuple<int, int, int>> equalizers;            // (f, g, h) with h f = h g
};
FilteredReport is_filtered(const FinCat& c);

}  // namespace nervelab
