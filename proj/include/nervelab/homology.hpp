#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nervelab/simplicial.hpp"

namespace nervelab {

struct IntMat {
  int rows = 0, cols = 0;
  std::vector<long long> a;  // row-major

  long long& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  long long at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

IntMat zero_mat(int rows, int cols);

// Elementary divisors (positive, in divisibility order) and the rank. Computation
// runs in 64-bit with overflow detection and restarts in big integers when needed.
struct SnfResult {
  std::vector<long long> divisors;  // nonzero diagonal entries d1 | d2 | ...
  int rank = 0;
  bool used_bigint = false;
};
SnfResult smith_normal_form(const IntMat& m);

// SNF with unimodular transforms U m V = diag(divisors); verified (det U, det V = +-1
// and the product identity) for matrices up to 50x50. Big-int path throughout.
struct SnfTransforms {
  SnfResult snf;
  bool verified = false;
};
SnfTransforms smith_normal_form_verified(const IntMat& m);

// Normalized chains: bases are the nondegenerate simplices, boundaries alternate
// signs and drop degenerate faces.
struct ChainComplex {
  int top = 0;
  std::vector<int> basis;         // sizes, degrees 0..top
  std::vector<IntMat> boundary;   // boundary[n] : C_n -> C_{n-1}, defined for 1..top
  bool truncation_exact = true;   // source complex was lossless

  const IntMat& del(int n) const { return boundary[n]; }
};

ChainComplex chain_complex(const TruncSSet& x, int max_degree);

// "row col value" lines, one per nonzero entry, with a "rows cols" header line.
std::string matrix_to_triplets(const IntMat& m);

enum class Verdict { cone, acyclic, inconclusive, nontrivial };
std::string to_string(Verdict v);

struct HomologyReport {
  struct Degree {
    long long betti = 0;
    std::vector<long long> torsion;
  };
  std::vector<Degree> degrees;       // 0..top
  int reliable_top = -1;             // degrees above this are affected by truncation
  bool connected = false;
  bool reduced_acyclic = false;      // reduced homology vanishes through reliable_top
  std::optional<int> cone_vertex;
  Verdict verdict = Verdict::inconclusive;
};

HomologyReport homology_groups(const ChainComplex& cc);

// Cone detection: a vertex v with X = v * Y (initial) or X = Y * v (final), checked
// structurally on vertex-determined complexes. Sound, not complete.
std::optional<int> find_cone_vertex(const TruncSSet& x);

HomologyReport contractibility_evidence(const TruncSSet& x, int max_degree);

}  // namespace nervelab
