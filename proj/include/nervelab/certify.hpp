#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nervelab/poset.hpp"
#include "nervelab/simplicial.hpp"

namespace nervelab {

// An inner-anodyne certificate: a sequence of inner-horn pushouts growing a
// face-closed subcomplex to the whole ambient. Each move names an m-simplex by
// its vertex tuple; replaying it requires the horn (all faces but the k-th) to
// be present and adds exactly the simplex and its k-th face.
struct Certificate {
  std::uint64_t ambient_hash = 0;
  std::vector<std::pair<int, int>> start;  // (dim, id) of the starting subcomplex
  struct Move {
    int m = 0, k = 0;
    std::vector<int> vertices;
    int stage = -1;  // lattice filtration stage, when staged search produced it
  };
  std::vector<Move> moves;
};

struct VerifyResult {
  bool ok = false;
  int failed_move = -1;  // -1: start not face-closed / hash mismatch; else move index
  std::string reason;
};

// Independent replay of a certificate. Only complexes whose nondegenerate
// simplices have nondegenerate faces and are determined by their vertex tuples
// (poset nerves, standard complexes) are supported.
VerifyResult verify_certificate(const TruncSSet& ambient, const Certificate& cert);

struct SearchBudget {
  long long max_attempts = 1000000;
  double max_seconds = 60.0;
};

struct SearchFailure {
  bool budget_exhausted = false;
  long long attempts = 0;
  int frontier_present = 0, frontier_target = 0;  // sizes when the search stopped
};

// Backtracking search for a certificate extending `start` (per-dimension sorted id
// lists) to the whole ambient. Moves are tried dimension-ascending, then in
// lexicographic simplex order. Failure is inconclusive, never a disproof.
struct SearchResult {
  std::optional<Certificate> certificate;
  SearchFailure failure;
};
SearchResult find_certificate(const TruncSSet& ambient,
                              const std::vector<std::vector<int>>& start,
                              const SearchBudget& budget = {});

// Nondegenerate simplices of a poset nerve whose vertices all satisfy `keep`.
std::vector<std::vector<int>> chains_within(const TruncSSet& poset_nerve,
                                            const std::vector<char>& keep);

// Certificate for Box^n inside the nerve of RCpt^n, searched along the interval
// filtration (parts [(0,i)..(i,n)]) with one-element peeling substages.
struct StagedCertificate {
  Certificate cert;
  TruncSSet ambient;
  std::vector<std::vector<int>> start;
  int stages = 0;
};
inline constexpr int kCptCertCap = 3;
StagedCertificate cert_box_in_ccpt(int n, const SearchBudget& budget = {},
                                   int cap = kCptCertCap);

// Certificate for the union of the intervals Crt^n_{p,n} inside Cart^n.
inline constexpr int kCartCertCap = 2;
StagedCertificate cert_boxplus_cover(int n, const SearchBudget& budget = {},
                                     int cap = kCartCertCap);

// Shared driver: parts[i] are element masks of subposets P_i = [p_i, q_i] whose
// union is the whole poset; the start subcomplex is the union of their nerves.
StagedCertificate cert_interval_cover(const FinPoset& poset,
                                      const std::vector<std::vector<char>>& parts,
                                      const SearchBudget& budget);

std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);

}  // namespace nervelab
