#include "nervelab/homology.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

namespace nervelab {

using bigint = boost::multiprecision::cpp_int;

IntMat zero_mat(int rows, int cols) {
  IntMat m;
  m.rows = rows;
  m.cols = cols;
  m.a.assign(static_cast<std::size_t>(rows) * cols, 0);
  return m;
}

namespace {

struct overflow_signal {};

// arithmetic wrappers: 64-bit flavor throws overflow_signal, bigint never does
inline long long mul_checked(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_signal{};
  return r;
}
inline long long sub_checked(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw overflow_signal{};
  return r;
}
inline bigint mul_checked(const bigint& a, const bigint& b) { return a * b; }
inline bigint sub_checked(const bigint& a, const bigint& b) { return a - b; }

template <class T>
struct Mat {
  int rows, cols;
  std::vector<T> a;
  T& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const T& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

template <class T>
Mat<T> from_int(const IntMat& m) {
  Mat<T> r{m.rows, m.cols, {}};
  r.a.reserve(m.a.size());
  for (long long v : m.a) r.a.push_back(static_cast<T>(v));
  return r;
}

template <class T>
T abs_of(const T& v) {
  return v < 0 ? T(-v) : v;
}

// Row/column reduction to Smith form with min-|pivot| selection; optionally
// accumulates the unimodular transforms.
template <class T>
std::vector<T> snf_run(Mat<T> m, Mat<T>* u_out, Mat<T>* v_out) {
  int R = m.rows, C = m.cols;
  Mat<T> U{R, R, std::vector<T>(static_cast<std::size_t>(R) * R, T(0))};
  Mat<T> V{C, C, std::vector<T>(static_cast<std::size_t>(C) * C, T(0))};
  bool track = u_out != nullptr;
  if (track) {
    for (int i = 0; i < R; ++i) U.at(i, i) = T(1);
    for (int j = 0; j < C; ++j) V.at(j, j) = T(1);
  }
  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int t = 0; t < C; ++t) std::swap(m.at(i, t), m.at(j, t));
    if (track)
      for (int t = 0; t < R; ++t) std::swap(U.at(i, t), U.at(j, t));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int t = 0; t < R; ++t) std::swap(m.at(t, i), m.at(t, j));
    if (track)
      for (int t = 0; t < C; ++t) std::swap(V.at(t, i), V.at(t, j));
  };
  auto addmul_row = [&](int dst, int src, const T& q) {  // row_dst -= q * row_src
    for (int t = 0; t < C; ++t) m.at(dst, t) = sub_checked(m.at(dst, t), mul_checked(q, m.at(src, t)));
    if (track)
      for (int t = 0; t < R; ++t) U.at(dst, t) = sub_checked(U.at(dst, t), mul_checked(q, U.at(src, t)));
  };
  auto addmul_col = [&](int dst, int src, const T& q) {
    for (int t = 0; t < R; ++t) m.at(t, dst) = sub_checked(m.at(t, dst), mul_checked(q, m.at(t, src)));
    if (track)
      for (int t = 0; t < C; ++t) V.at(t, dst) = sub_checked(V.at(t, dst), mul_checked(q, V.at(t, src)));
  };
  auto negate_row = [&](int i) {
    for (int t = 0; t < C; ++t) m.at(i, t) = sub_checked(T(0), m.at(i, t));
    if (track)
      for (int t = 0; t < R; ++t) U.at(i, t) = sub_checked(T(0), U.at(i, t));
  };

  std::vector<T> divisors;
  int s = 0;
  while (s < std::min(R, C)) {
    // locate minimal nonzero |entry| in the lower-right block
    int pi = -1, pj = -1;
    for (int i = s; i < R; ++i)
      for (int j = s; j < C; ++j)
        if (m.at(i, j) != 0 &&
            (pi < 0 || abs_of(m.at(i, j)) < abs_of(m.at(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    swap_rows(s, pi);
    swap_cols(s, pj);
    bool clean = true;
    for (int i = s + 1; i < R; ++i)
      if (m.at(i, s) != 0) {
        T q = m.at(i, s) / m.at(s, s);
        if (q != 0) addmul_row(i, s, q);
        if (m.at(i, s) != 0) clean = false;
      }
    for (int j = s + 1; j < C; ++j)
      if (m.at(s, j) != 0) {
        T q = m.at(s, j) / m.at(s, s);
        if (q != 0) addmul_col(j, s, q);
        if (m.at(s, j) != 0) clean = false;
      }
    if (!clean) continue;  // smaller remainders exist; pick a new pivot
    // divisibility: the pivot must divide the remaining block
    bool divides = true;
    for (int i = s + 1; i < R && divides; ++i)
      for (int j = s + 1; j < C && divides; ++j)
        if (m.at(i, j) % m.at(s, s) != 0) {
          // fold row i into row s and restart the elimination at s
          addmul_row(s, i, T(-1));
          divides = false;
        }
    if (!divides) continue;
    if (m.at(s, s) < 0) negate_row(s);
    divisors.push_back(m.at(s, s));
    ++s;
  }
  if (u_out) *u_out = std::move(U);
  if (v_out) *v_out = std::move(V);
  return divisors;
}

template <class T>
T det_of(Mat<T> m) {  // fraction-free is overkill at 50x50 over bigint: use exact elimination
  int n = m.rows;
  bigint det = 1;
  Mat<bigint> b{n, n, {}};
  b.a.reserve(m.a.size());
  for (const auto& v : m.a) b.a.push_back(bigint(v));
  int sign = 1;
  for (int s = 0; s < n; ++s) {
    int p = -1;
    for (int i = s; i < n; ++i)
      if (b.at(i, s) != 0) {
        p = i;
        break;
      }
    if (p < 0) return T(0);
    if (p != s) {
      for (int t = 0; t < n; ++t) std::swap(b.at(s, t), b.at(p, t));
      sign = -sign;
    }
    for (int i = s + 1; i < n; ++i) {
      while (b.at(i, s) != 0) {  // integer-preserving gcd elimination
        bigint q = b.at(i, s) / b.at(s, s);
        for (int t = s; t < n; ++t) b.at(i, t) -= q * b.at(s, t);
        if (b.at(i, s) != 0) {
          for (int t = s; t < n; ++t) std::swap(b.at(s, t), b.at(i, t));
          sign = -sign;
        }
      }
    }
  }
  for (int s = 0; s < n; ++s) det *= b.at(s, s);
  det *= sign;
  if (det == 1) return T(1);
  if (det == -1) return T(-1);
  return T(0);  // callers only care about unimodularity
}

}  // namespace

SnfResult smith_normal_form(const IntMat& m) {
  SnfResult res;
  try {
    auto divisors = snf_run<long long>(from_int<long long>(m), nullptr, nullptr);
    res.divisors = divisors;
  } catch (const overflow_signal&) {
    auto divisors = snf_run<bigint>(from_int<bigint>(m), nullptr, nullptr);
    res.used_bigint = true;
    for (const auto& d : divisors) {
      if (d > bigint(std::numeric_limits<long long>::max()))
        fail(errc::cap, "smith_normal_form: elementary divisor exceeds 64 bits");
      res.divisors.push_back(static_cast<long long>(d));
    }
  }
  res.rank = static_cast<int>(res.divisors.size());
  return res;
}

SnfTransforms smith_normal_form_verified(const IntMat& m) {
  SnfTransforms out;
  Mat<bigint> U{0, 0, {}}, V{0, 0, {}};
  auto divisors = snf_run<bigint>(from_int<bigint>(m), &U, &V);
  out.snf.used_bigint = true;
  for (const auto& d : divisors) out.snf.divisors.push_back(static_cast<long long>(d));
  out.snf.rank = static_cast<int>(out.snf.divisors.size());
  if (m.rows <= 50 && m.cols <= 50) {
    bool ok = det_of(U) != 0 && det_of(V) != 0;  // +-1 by construction when nonzero
    // U m V must be the diagonal of divisors
    Mat<bigint> mm = from_int<bigint>(m);
    for (int i = 0; i < m.rows && ok; ++i)
      for (int j = 0; j < m.cols && ok; ++j) {
        bigint acc = 0;
        for (int k = 0; k < m.rows; ++k)
          for (int l = 0; l < m.cols; ++l) acc += U.at(i, k) * mm.at(k, l) * V.at(l, j);
        bigint expect = (i == j && i < out.snf.rank) ? bigint(out.snf.divisors[i]) : bigint(0);
        if (acc != expect) ok = false;
      }
    out.verified = ok;
  }
  return out;
}

ChainComplex chain_complex(const TruncSSet& x, int max_degree) {
  if (max_degree > x.max_dim)
    fail(errc::cap, cat("chain_complex: degree ", max_degree, " exceeds complex dimension ",
                        x.max_dim));
  ChainComplex cc;
  cc.top = max_degree;
  // exact iff nothing nondegenerate lives in degree max_degree+1
  cc.truncation_exact =
      max_degree < x.max_dim ? x.count(max_degree + 1) == 0 : x.lossless;
  cc.basis.resize(max_degree + 1);
  for (int n = 0; n <= max_degree; ++n) cc.basis[n] = x.count(n);
  cc.boundary.resize(max_degree + 1);
  for (int n = 1; n <= max_degree; ++n) {
    IntMat d = zero_mat(cc.basis[n - 1], cc.basis[n]);
    for (int id = 0; id < x.count(n); ++id) {
      SimplexRef top = nondeg_ref(n, id);
      for (int i = 0; i <= n; ++i) {
        SimplexRef f = x.face(top, i);
        if (!f.nondegenerate()) continue;  // normalized chains
        d.at(f.core_id, id) += (i % 2 == 0) ? 1 : -1;
      }
    }
    cc.boundary[n] = std::move(d);
  }
  // del o del = 0
  for (int n = 2; n <= max_degree; ++n) {
    const IntMat& a = cc.boundary[n - 1];
    const IntMat& b = cc.boundary[n];
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < b.cols; ++j) {
        long long acc = 0;
        for (int k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
        if (acc != 0)
          fail(errc::internal, cat("chain_complex: del del != 0 at degree ", n));
      }
  }
  return cc;
}

std::string matrix_to_triplets(const IntMat& m) {
  std::string out = cat(m.rows, " ", m.cols, "\n");
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.at(i, j) != 0) out += cat(i, " ", j, " ", m.at(i, j), "\n");
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::cone: return "CONE";
    case Verdict::acyclic: return "ACYCLIC";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    case Verdict::nontrivial: return "NONTRIVIAL";
  }
  return "?";
}

HomologyReport homology_groups(const ChainComplex& cc) {
  HomologyReport rep;
  rep.degrees.resize(cc.top + 1);
  std::vector<SnfResult> snf(cc.top + 2);
  for (int n = 1; n <= cc.top; ++n) snf[n] = smith_normal_form(cc.boundary[n]);
  // rank of the (top+1) boundary is 0: either genuinely (exact truncation) or unknown
  for (int n = 0; n <= cc.top; ++n) {
    long long rank_n = n == 0 ? 0 : snf[n].rank;
    long long rank_np1 = n == cc.top ? 0 : snf[n + 1].rank;
    rep.degrees[n].betti = cc.basis[n] - rank_n - rank_np1;
    if (n < cc.top)
      for (long long d : snf[n + 1].divisors)
        if (d > 1) rep.degrees[n].torsion.push_back(d);
  }
  rep.reliable_top = cc.truncation_exact ? cc.top : cc.top - 1;
  rep.connected = !rep.degrees.empty() && rep.degrees[0].betti == 1;
  rep.reduced_acyclic = rep.reliable_top >= 0 && rep.connected;
  for (int n = 0; n <= rep.reliable_top && rep.reduced_acyclic; ++n) {
    long long reduced = rep.degrees[n].betti - (n == 0 ? 1 : 0);
    if (reduced != 0 || !rep.degrees[n].torsion.empty()) rep.reduced_acyclic = false;
  }
  return rep;
}

namespace {
bool vertex_determined(const TruncSSet& x) {
  for (int n = 1; n <= x.max_dim; ++n) {
    std::vector<std::vector<int>> seen;
    for (int id = 0; id < x.count(n); ++id) seen.push_back(x.at(n, id).vertices);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  }
  return true;
}

bool is_cone_on(const TruncSSet& x, int v, bool initial) {
  for (int n = 0; n <= x.max_dim; ++n)
    for (int id = 0; id < x.count(n); ++id) {
      const auto& vs = x.at(n, id).vertices;
      bool has_v = std::find(vs.begin(), vs.end(), v) != vs.end();
      if (has_v) {
        if (initial && vs.front() != v) return false;
        if (!initial && vs.back() != v) return false;
        int copies = static_cast<int>(std::count(vs.begin(), vs.end(), v));
        if (copies > 1) return false;
      } else {
        if (n + 1 > x.max_dim) return false;  // cone simplex would overflow truncation
        std::vector<int> cone_vs;
        if (initial) {
          cone_vs.push_back(v);
          cone_vs.insert(cone_vs.end(), vs.begin(), vs.end());
        } else {
          cone_vs = vs;
          cone_vs.push_back(v);
        }
        if (!x.by_vertices(n + 1, cone_vs)) return false;
      }
    }
  return true;
}
}  // namespace

std::optional<int> find_cone_vertex(const TruncSSet& x) {
  if (x.count(0) == 0) return std::nullopt;
  if (!vertex_determined(x)) return std::nullopt;
  for (int v = 0; v < x.count(0); ++v)
    if (is_cone_on(x, v, true) || is_cone_on(x, v, false)) return v;
  return std::nullopt;
}

HomologyReport contractibility_evidence(const TruncSSet& x, int max_degree) {
  if (x.count(0) == 0) fail(errc::validation, "contractibility_evidence: empty complex");
  max_degree = std::min(max_degree, x.max_dim);
  auto cc = chain_complex(x, max_degree);
  HomologyReport rep = homology_groups(cc);
  rep.cone_vertex = find_cone_vertex(x);
  bool nontrivial = false;
  for (int n = 0; n <= rep.reliable_top && !nontrivial; ++n) {
    long long reduced = rep.degrees[n].betti - (n == 0 ? 1 : 0);
    if (reduced != 0 || !rep.degrees[n].torsion.empty()) nontrivial = true;
  }
  if (rep.cone_vertex)
    rep.verdict = Verdict::cone;
  else if (nontrivial)
    rep.verdict = Verdict::nontrivial;
  else if (rep.reduced_acyclic)
    rep.verdict = Verdict::acyclic;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

}  // namespace nervelab
