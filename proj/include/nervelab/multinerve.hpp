#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nervelab/fincat.hpp"
#include "nervelab/poset.hpp"
#include "nervelab/simplicial.hpp"

namespace nervelab {

// A functor [n_1] x ... x [n_k] -> C with optional direction twists: for i in the
// twist set, the unit edges in direction i point downwards (the op convention is
// realized by edge reversal, never by materializing an opposite category).
// Direction 1 is the first coordinate ("vertical", class E_1 in the nerve diagrams).
struct GridFunctor {
  std::vector<int> shape;            // (n_1, ..., n_k)
  std::uint32_t twist = 0;           // bit (i-1) set: direction i reversed
  std::vector<int> obj;              // object at each grid point
  std::vector<std::vector<int>> edge;  // edge[d][point]: unit edge leaving the point
                                       // in direction d+1 (-1 when out of range)

  int k() const { return static_cast<int>(shape.size()); }
  bool twisted(int dir) const { return (twist >> (dir - 1)) & 1; }  // dir is 1-based
  int points() const;
  int point_index(const std::vector<int>& coord) const;
  std::vector<int> coord_of(int point) const;
  bool operator==(const GridFunctor& o) const {
    return shape == o.shape && twist == o.twist && obj == o.obj && edge == o.edge;
  }
  bool operator<(const GridFunctor& o) const {
    return std::tie(shape, twist, obj, edge) < std::tie(o.shape, o.twist, o.obj, o.edge);
  }
};

// composite of unit edges along direction dir from coordinate a to b at the point;
// for twisted directions this is a morphism F(b-slice) -> F(a-slice)
int grid_composite(const FinCat& c, const GridFunctor& f, int dir, std::vector<int> at,
                   int from, int to);

bool grid_functorial(const FinCat& c, const GridFunctor& f);  // every unit square commutes

// the commuting square of C spanned by directions (i, j) at base point p,
// normalized so that left/right are the direction-i edges
Square grid_square(const FinCat& c, const GridFunctor& f, int dir_i, int dir_j,
                   const std::vector<int>& base);

// reindex direction dir along a monotone map [m] -> [n_dir]
GridFunctor grid_reindex(const FinCat& c, const GridFunctor& f, int dir,
                         const std::vector<int>& monotone);
GridFunctor grid_face(const FinCat& c, const GridFunctor& f, int dir, int i);
GridFunctor grid_degeneracy(const FinCat& c, const GridFunctor& f, int dir, int j);

// diagonal operators (all directions at once); defined for shape (n, ..., n)
GridFunctor diag_face(const FinCat& c, const GridFunctor& f, int i);
GridFunctor diag_degeneracy(const FinCat& c, const GridFunctor& f, int j);
bool diag_degenerate(const FinCat& c, const GridFunctor& f);

struct Marking {
  std::vector<EdgeClass> per_direction;  // size k
};

struct Tiling {
  enum class Kind { all, cart, edecomp, explicit_set };
  struct Tile {
    Kind kind = Kind::all;
    std::optional<EdgeClass> witness_class;  // for edecomp
    std::vector<Square> squares;             // for explicit_set (both transposes listed)
  };
  std::map<std::pair<int, int>, Tile> tiles;  // unordered pairs keyed by (min, max)

  const Tile& tile(int i, int j) const;
  static Tiling uniform(int k, Kind kind);
};

bool tile_admits(const FinCat& c, const Tiling::Tile& t, const Square& s);

struct EnumCaps {
  int max_per_direction = 3;
  int max_directions = 4;
  long long max_results = 200000;
};

// All grid functors with direction-i unit edges in E_i and (i,j)-unit squares in
// Q_{ij}; a final filter enforces the full conditions (composite edges in E_i,
// all rectangles in Q_{ij}), so the result is closed under faces/degeneracies.
std::vector<GridFunctor> restricted_nerve_simplices(const FinCat& c, const Marking& marking,
                                                    const Tiling& tiling,
                                                    const std::vector<int>& shape,
                                                    std::uint32_t twist = 0,
                                                    const EnumCaps& caps = {});

// (delta*_{k,L} X)_n: shape (n, ..., n) with the given twist
std::vector<GridFunctor> diagonal_simplices(const FinCat& c, const Marking& marking,
                                            const Tiling& tiling, int k, std::uint32_t twist,
                                            int n, const EnumCaps& caps = {});

// (epsilon^k_j K)_n: shape with n in slot j and 0 elsewhere
std::vector<GridFunctor> epsilon_restrict(const FinCat& c, const Marking& marking,
                                          const Tiling& tiling, int k, int j, int n,
                                          const EnumCaps& caps = {});

// box product of enumerated multisimplicial cells: componentwise pairs
std::vector<std::pair<GridFunctor, GridFunctor>> box_product(
    const std::vector<GridFunctor>& s, const std::vector<GridFunctor>& s2);

// the gluing map: precompose with diag x id on the first two directions, composing
// the direction-1 and direction-2 edges; requires directions 1,2 untwisted
GridFunctor gluing_map(const FinCat& c, const GridFunctor& f);

// ---- compactification categories -------------------------------------------------

// objects of Komp^alpha(sigma): functors on RCpt^n with the given diagonal chain,
// direction-1 (first coordinate) edges in E1 and direction-2 edges in E2
struct TriFunctor {
  int n = 0;
  std::vector<int> obj;    // indexed by rcpt_index
  std::vector<int> edge1;  // (i,j) -> (i+1,j), slot at rcpt_index(i,j), -1 if absent
  std::vector<int> edge2;  // (i,j) -> (i,j+1)
  bool operator<(const TriFunctor& o) const {
    return std::tie(obj, edge1, edge2) < std::tie(o.obj, o.edge1, o.edge2);
  }
  bool operator==(const TriFunctor& o) const {
    return obj == o.obj && edge1 == o.edge1 && edge2 == o.edge2;
  }
};

struct KompCat {
  FinCat category;                      // Komp^alpha(sigma) as a finite category
  std::vector<TriFunctor> objects;      // grid data behind each object
  std::vector<std::vector<int>> components;  // per morphism: component at each rcpt point
  int n = 0, alpha = 1;
  std::string orientation = "components F(i,j) -> F'(i,j) lie in E_alpha";
};

// sigma: a composable chain of morphisms of C (possibly empty = a single object).
KompCat komp_category(const FinCat& c, const EdgeClass& e1, const EdgeClass& e2,
                      int base_object, const std::vector<int>& sigma_chain, int alpha);

// ---- Cartesianization -------------------------------------------------------------

struct KartDiagram {
  CrtLattice lattice;
  std::vector<int> obj;        // object at each lattice element
  std::vector<int> edge;       // edge[x*size+y]: morphism F(x) -> F(y) for x <= y
  std::vector<std::vector<int>> legs;  // limit cone legs: legs[x][p] : F(x) -> sigma(p)

  int size() const { return lattice.size(); }
  int arrow(int x, int y) const { return edge[static_cast<std::size_t>(x) * size() + y]; }
};

// right Kan extension of the grid sigma along sigma^n, computed by iterated
// pullbacks over the exact-square decomposition; F(sigma(p,q)) = sigma(p,q) exactly
KartDiagram cartesianize(const FinCat& c, const GridFunctor& sigma);

// alpha section: the [m] x [m] grid in Crt^n built from lambda/mu over a chain tau
std::vector<int> alpha_section(const CrtLattice& l, const std::vector<int>& tau);

struct SquareDecomposition {
  bool has_pullback = false;
  int apex = -1;        // w' = pullback of the cospan
  int comparison = -1;  // w -> w'
  bool comparison_in_class = false;
};
SquareDecomposition square_decomposition(const FinCat& c, const Square& s, const EdgeClass& e);

// ---- hypothesis checkers ----------------------------------------------------------

struct Condition {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct HypothesesReport {
  std::vector<Condition> conditions;
  bool all_pass() const {
    for (const auto& c : conditions)
      if (!c.pass) return false;
    return true;
  }
  const Condition* find(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return &c;
    return nullptr;
  }
};

HypothesesReport check_descent_hypotheses(const FinCat& c, const EdgeClass& e0,
                                          const EdgeClass& e1, const EdgeClass& e2,
                                          const std::vector<EdgeClass>& eks = {});

HypothesesReport check_gluing_hypotheses(const FinCat& c, const EdgeClass& e1,
                                         const EdgeClass& e2,
                                         const std::vector<EdgeClass>& chain,
                                         const std::vector<EdgeClass>& eks = {});

// the (i-2)-truncated chain of Remark-style construction: isos, then monos of
// E1 n E2, then all of E1 n E2 (stops early when levels coincide)
std::vector<EdgeClass> build_truncation_chain(const FinCat& c, const EdgeClass& e1,
                                              const EdgeClass& e2);

}  // namespace nervelab
