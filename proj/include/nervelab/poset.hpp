#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nervelab/common.hpp"

namespace nervelab {

// Finite poset on elements 0..n-1 with an explicit order relation.
// Invariants (checked by validate): reflexive, antisymmetric, transitive.
struct FinPoset {
  int n = 0;
  std::vector<std::uint8_t> rel;  // rel[i*n+j] != 0  iff  i <= j
  std::vector<std::string> labels;

  bool leq(int i, int j) const { return rel[static_cast<std::size_t>(i) * n + j] != 0; }
  bool lt(int i, int j) const { return i != j && leq(i, j); }
  const std::string& label(int i) const { return labels[i]; }

  void validate() const;
  std::vector<std::pair<int, int>> covers() const;  // Hasse edges i -* j
  std::vector<int> linear_extension() const;        // i before j whenever i < j
  int width() const;                                // longest antichain (Dilworth)
  std::optional<int> minimum() const;
  std::optional<int> maximum() const;
};

FinPoset make_poset(int n, const std::vector<std::pair<int, int>>& strict_pairs,
                    std::vector<std::string> labels = {});
FinPoset chain_poset(int n);                          // the totally ordered set [n]
FinPoset antichain_poset(int n);
FinPoset product_poset(const FinPoset& a, const FinPoset& b);
FinPoset grid_poset(int n);                           // [n] x [n]; index (i,j) -> i*(n+1)+j
FinPoset rcpt_poset(int n);                           // full subposet of [n] x [n] on i <= j
FinPoset subposet(const FinPoset& p, const std::vector<int>& keep);
FinPoset opposite_poset(const FinPoset& p);

int rcpt_index(int n, int i, int j);                  // index of (i,j) in rcpt_poset(n)
std::pair<int, int> rcpt_coords(int n, int idx);

bool is_monotone(const FinPoset& src, const FinPoset& dst, const std::vector<int>& f);
bool poset_isomorphic(const FinPoset& a, const FinPoset& b);

// Up-sets are bitmasks over the carrier's elements; bit i set means element i is in.
bool is_upset(const FinPoset& p, std::uint64_t mask);
std::uint64_t principal_upset(const FinPoset& p, int elem);  // P_{elem/}

// Monotone transport of up-sets along f : P -> P'.
std::uint64_t transport_pullback(const FinPoset& p, const FinPoset& q, const std::vector<int>& f,
                                 std::uint64_t upset_of_q);
std::uint64_t transport_pushforward(const FinPoset& p, const FinPoset& q, const std::vector<int>& f,
                                    std::uint64_t upset_of_p);
// Pushforward preserves coproducts (meets of U(P), i.e. unions are automatic; this is
// about the lattice coproduct = intersection) when f preserves pairwise coproducts.
bool pushforward_preserves_coproducts(const FinPoset& p, const FinPoset& q, const std::vector<int>& f);

// Finite lattice presented by its order plus total meet/join tables.
struct FinLattice {
  FinPoset order;
  std::vector<std::uint16_t> meet_tab, join_tab;  // dense, size n*n, present iff n <= kDenseCap
  static constexpr int kDenseCap = 4096;

  int size() const { return order.n; }
  int meet(int i, int j) const;
  int join(int i, int j) const;
  void validate() const;  // absorption, commutativity, compatibility with the order

 private:
  friend FinLattice lattice_from_poset(const FinPoset&);
  friend struct UpSetLattice;
  int meet_slow(int i, int j) const;
  int join_slow(int i, int j) const;
};

// Builds the lattice structure of a poset, failing if some pair lacks a meet or join.
FinLattice lattice_from_poset(const FinPoset& p);

struct DistributivityReport {
  bool distributive = true;
  bool exhaustive = true;             // full triple scan (|L| <= 512) vs fixed-seed sampling
  std::array<int, 3> violation{};     // (p,q,r) with p^(qvr) != (p^q)v(p^r)
};
DistributivityReport check_distributive(const FinLattice& l);

// The lattice U(P) of up-sets of P, ordered by containment: Q <= Q' iff Q contains Q',
// so join = intersection and meet = union, and the full up-set P is the initial object.
struct UpSetLattice {
  FinPoset base;                      // P
  bool nonempty_only = false;
  std::vector<std::uint64_t> elems;   // up-set masks, sorted ascending (canonical index)
  FinLattice lat;

  int size() const { return static_cast<int>(elems.size()); }
  int index_of(std::uint64_t mask) const;  // -1 if absent
  std::uint64_t mask(int i) const { return elems[i]; }
  int meet(int i, int j) const { return lat.meet(i, j); }  // union
  int join(int i, int j) const { return lat.join(i, j); }  // intersection
  bool leq(int i, int j) const { return lat.order.leq(i, j); }
};

inline constexpr int kUpsetPosetCap = 25;
UpSetLattice upset_lattice(const FinPoset& p, int cap = kUpsetPosetCap, bool nonempty_only = false);

// A square w <= y, w <= z, y <= v, z <= v is exact when it is simultaneously a pushout
// and a pullback in the lattice, i.e. w = y^z and v = yvz.
bool is_exact_square(const FinLattice& l, int w, int y, int z, int v);

// One step of the decomposition of an up-set morphism: remove `removed` from the
// current up-set; the move is the exact pullback of omega(removed) : sigma(x) -> sigma(x)-{x}.
struct ExactMove {
  int removed;              // element of the base poset
  int from, to;             // lattice indices: current up-set and current minus removed
  int principal, principal_minus;  // sigma(removed) and sigma(removed)-{removed}
};
std::vector<ExactMove> exact_decompose(const UpSetLattice& u, int from, int to);

struct BirkhoffResult {
  bool distributive = true;
  std::array<int, 3> violation{};
  FinPoset irreducibles;          // induced order on product-irreducible elements
  std::vector<int> irr_elems;     // lattice indices of the irreducibles
  std::vector<std::uint64_t> eta; // eta(x) as an up-set mask over irreducibles
  bool isomorphism = false;       // eta : L -> U(I(L)) bijective and order-reflecting
};
BirkhoffResult birkhoff(const FinLattice& l);

// Crt^n: the lattice of nonempty up-sets of [n] x [n], with its structure maps.
struct CrtLattice {
  int n = 0;
  UpSetLattice u;                         // base poset grid_poset(n)
  std::vector<int> sigma_tab;             // (p,q) -> lattice index of principal up-set
  std::vector<int> xi_tab;                // (p,q) -> sigma(p,0) ^ sigma(0,q)
  std::vector<std::pair<int, int>> pi_tab;  // x -> coordinatewise minima over x
  std::vector<std::vector<int>> intervals;  // (p,q) -> interval Crt^n_{p,q}, ascending ids
  std::vector<int> iso_to_punctured;      // witness: Crt^n = U([n]x[n]-{(n,n)}), index map

  int size() const { return u.size(); }
  int sigma(int p, int q) const { return sigma_tab[p * (n + 1) + q]; }
  int xi(int p, int q) const { return xi_tab[p * (n + 1) + q]; }
  std::pair<int, int> pi(int x) const { return pi_tab[x]; }
  const std::vector<int>& interval(int p, int q) const { return intervals[p * (n + 1) + q]; }
  int lambda(int x, int y) const;  // sigma(pi1(y), 0) v x, for x <= y
  int mu(int x, int y) const;      // sigma(0, pi2(y)) v x, for x <= y
};

inline constexpr int kCrtCap = 6;
CrtLattice crt(int n, int cap = kCrtCap);

// The lattice morphism Crt(d) : Crt^m -> Crt^n induced by U_{d x d}.
std::vector<int> crt_induced(const std::vector<int>& d, const CrtLattice& src, const CrtLattice& dst);

std::string upset_bits(const FinPoset& p, std::uint64_t mask);  // e.g. "0110"

}  // namespace nervelab
