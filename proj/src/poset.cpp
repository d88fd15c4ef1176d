#include "nervelab/poset.hpp"

#include <algorithm>
#include <bit>

namespace nervelab {

std::string hex64(std::uint64_t v) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = d[v & 0xf];
    v >>= 4;
  }
  return s;
}

void FinPoset::validate() const {
  if (n < 0 || rel.size() != static_cast<std::size_t>(n) * n)
    fail(errc::validation, "poset: relation table has wrong size");
  for (int i = 0; i < n; ++i)
    if (!leq(i, i)) fail(errc::validation, cat("poset: not reflexive at ", i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && leq(i, j) && leq(j, i))
        fail(errc::validation, cat("poset: not antisymmetric at (", i, ",", j, ")"));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (leq(i, j))
        for (int k = 0; k < n; ++k)
          if (leq(j, k) && !leq(i, k))
            fail(errc::validation, cat("poset: not transitive at (", i, ",", j, ",", k, ")"));
}

std::vector<std::pair<int, int>> FinPoset::covers() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!lt(i, j)) continue;
      bool cover = true;
      for (int k = 0; k < n && cover; ++k)
        if (lt(i, k) && lt(k, j)) cover = false;
      if (cover) out.emplace_back(i, j);
    }
  return out;
}

std::vector<int> FinPoset::linear_extension() const {
  std::vector<int> out;
  std::vector<char> used(n, 0);
  for (int step = 0; step < n; ++step) {
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      bool minimal = true;
      for (int j = 0; j < n && minimal; ++j)
        if (!used[j] && lt(j, i)) minimal = false;
      if (minimal) {
        out.push_back(i);
        used[i] = 1;
        break;
      }
    }
  }
  if (static_cast<int>(out.size()) != n) fail(errc::internal, "poset: linear extension failed");
  return out;
}

namespace {
bool kuhn_augment(int u, const std::vector<std::vector<int>>& adj, std::vector<int>& match,
                  std::vector<char>& seen) {
  for (int v : adj[u]) {
    if (seen[v]) continue;
    seen[v] = 1;
    if (match[v] < 0 || kuhn_augment(match[v], adj, match, seen)) {
      match[v] = u;
      return true;
    }
  }
  return false;
}
}  // namespace

int FinPoset::width() const {
  // Dilworth: width = n - maximum matching in the strict comparability bigraph.
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lt(i, j)) adj[i].push_back(j);
  std::vector<int> match(n, -1);
  int matched = 0;
  for (int u = 0; u < n; ++u) {
    std::vector<char> seen(n, 0);
    if (kuhn_augment(u, adj, match, seen)) ++matched;
  }
  return n - matched;
}

std::optional<int> FinPoset::minimum() const {
  for (int i = 0; i < n; ++i) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j)
      if (!leq(i, j)) ok = false;
    if (ok) return i;
  }
  return std::nullopt;
}

std::optional<int> FinPoset::maximum() const {
  for (int i = 0; i < n; ++i) {
    bool ok = true;
    for (int j = 0; j < n && ok; ++j)
      if (!leq(j, i)) ok = false;
    if (ok) return i;
  }
  return std::nullopt;
}

FinPoset make_poset(int n, const std::vector<std::pair<int, int>>& strict_pairs,
                    std::vector<std::string> labels) {
  FinPoset p;
  p.n = n;
  p.rel.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) p.rel[static_cast<std::size_t>(i) * n + i] = 1;
  for (auto [a, b] : strict_pairs) p.rel[static_cast<std::size_t>(a) * n + b] = 1;
  // transitive closure (Floyd-Warshall flavor)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (p.leq(i, k))
        for (int j = 0; j < n; ++j)
          if (p.leq(k, j)) p.rel[static_cast<std::size_t>(i) * n + j] = 1;
  if (labels.empty()) {
    for (int i = 0; i < n; ++i) labels.push_back(cat(i));
  }
  p.labels = std::move(labels);
  p.validate();
  return p;
}

FinPoset chain_poset(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 <= n; ++i) pairs.emplace_back(i, i + 1);
  return make_poset(n + 1, pairs);
}

FinPoset antichain_poset(int n) { return make_poset(n, {}); }

FinPoset product_poset(const FinPoset& a, const FinPoset& b) {
  FinPoset p;
  p.n = a.n * b.n;
  p.rel.assign(static_cast<std::size_t>(p.n) * p.n, 0);
  p.labels.resize(p.n);
  auto idx = [&](int i, int j) { return i * b.n + j; };
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < b.n; ++j) {
      p.labels[idx(i, j)] = cat("(", a.label(i), ",", b.label(j), ")");
      for (int i2 = 0; i2 < a.n; ++i2)
        for (int j2 = 0; j2 < b.n; ++j2)
          if (a.leq(i, i2) && b.leq(j, j2))
            p.rel[static_cast<std::size_t>(idx(i, j)) * p.n + idx(i2, j2)] = 1;
    }
  return p;
}

FinPoset grid_poset(int n) { return product_poset(chain_poset(n), chain_poset(n)); }

int rcpt_index(int n, int i, int j) {
  // row-major over pairs 0 <= i <= j <= n
  int idx = 0;
  for (int a = 0; a < i; ++a) idx += n + 1 - a;
  return idx + (j - i);
}

std::pair<int, int> rcpt_coords(int n, int idx) {
  for (int a = 0; a <= n; ++a) {
    int row = n + 1 - a;
    if (idx < row) return {a, a + idx};
    idx -= row;
  }
  fail(errc::internal, "rcpt_coords: index out of range");
}

FinPoset rcpt_poset(int n) {
  int m = (n + 1) * (n + 2) / 2;
  FinPoset p;
  p.n = m;
  p.rel.assign(static_cast<std::size_t>(m) * m, 0);
  p.labels.resize(m);
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      int a = rcpt_index(n, i, j);
      p.labels[a] = cat("(", i, ",", j, ")");
      for (int i2 = 0; i2 <= n; ++i2)
        for (int j2 = i2; j2 <= n; ++j2)
          if (i <= i2 && j <= j2)
            p.rel[static_cast<std::size_t>(a) * m + rcpt_index(n, i2, j2)] = 1;
    }
  return p;
}

FinPoset subposet(const FinPoset& p, const std::vector<int>& keep) {
  FinPoset q;
  q.n = static_cast<int>(keep.size());
  q.rel.assign(static_cast<std::size_t>(q.n) * q.n, 0);
  q.labels.resize(q.n);
  for (int i = 0; i < q.n; ++i) {
    q.labels[i] = p.label(keep[i]);
    for (int j = 0; j < q.n; ++j)
      if (p.leq(keep[i], keep[j])) q.rel[static_cast<std::size_t>(i) * q.n + j] = 1;
  }
  return q;
}

FinPoset opposite_poset(const FinPoset& p) {
  FinPoset q = p;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      q.rel[static_cast<std::size_t>(i) * p.n + j] = p.rel[static_cast<std::size_t>(j) * p.n + i];
  return q;
}

bool is_monotone(const FinPoset& src, const FinPoset& dst, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != src.n) return false;
  for (int v : f)
    if (v < 0 || v >= dst.n) return false;
  for (int i = 0; i < src.n; ++i)
    for (int j = 0; j < src.n; ++j)
      if (src.leq(i, j) && !dst.leq(f[i], f[j])) return false;
  return true;
}

namespace {
bool iso_backtrack(const FinPoset& a, const FinPoset& b, std::vector<int>& img,
                   std::vector<char>& used, int next) {
  if (next == a.n) return true;
  for (int cand = 0; cand < b.n; ++cand) {
    if (used[cand]) continue;
    bool ok = true;
    for (int prev = 0; prev < next && ok; ++prev) {
      if (a.leq(prev, next) != b.leq(img[prev], cand)) ok = false;
      if (a.leq(next, prev) != b.leq(cand, img[prev])) ok = false;
    }
    if (!ok) continue;
    img[next] = cand;
    used[cand] = 1;
    if (iso_backtrack(a, b, img, used, next + 1)) return true;
    used[cand] = 0;
  }
  return false;
}
}  // namespace

bool poset_isomorphic(const FinPoset& a, const FinPoset& b) {
  if (a.n != b.n) return false;
  std::vector<int> img(a.n, -1);
  std::vector<char> used(b.n, 0);
  return iso_backtrack(a, b, img, used, 0);
}

bool is_upset(const FinPoset& p, std::uint64_t mask) {
  for (int i = 0; i < p.n; ++i) {
    if (!(mask >> i & 1)) continue;
    for (int j = 0; j < p.n; ++j)
      if (p.lt(i, j) && !(mask >> j & 1)) return false;
  }
  return true;
}

std::uint64_t principal_upset(const FinPoset& p, int elem) {
  std::uint64_t m = 0;
  for (int j = 0; j < p.n; ++j)
    if (p.leq(elem, j)) m |= std::uint64_t{1} << j;
  return m;
}

std::uint64_t transport_pullback(const FinPoset& p, const FinPoset& q, const std::vector<int>& f,
                                 std::uint64_t upset_of_q) {
  if (!is_monotone(p, q, f)) fail(errc::validation, "transport: map is not monotone");
  std::uint64_t m = 0;
  for (int i = 0; i < p.n; ++i)
    if (upset_of_q >> f[i] & 1) m |= std::uint64_t{1} << i;
  return m;
}

std::uint64_t transport_pushforward(const FinPoset& p, const FinPoset& q, const std::vector<int>& f,
                                    std::uint64_t upset_of_p) {
  if (!is_monotone(p, q, f)) fail(errc::validation, "transport: map is not monotone");
  std::uint64_t m = 0;
  for (int i = 0; i < p.n; ++i)
    if (upset_of_p >> i & 1) m |= principal_upset(q, f[i]);
  return m;
}

bool pushforward_preserves_coproducts(const FinPoset& p, const FinPoset& q,
                                      const std::vector<int>& f) {
  // f preserves pairwise coproducts: whenever x v y exists in P, f(x v y) = f(x) v f(y).
  auto lub = [](const FinPoset& r, int x, int y) -> std::optional<int> {
    std::optional<int> best;
    for (int u = 0; u < r.n; ++u) {
      if (!r.leq(x, u) || !r.leq(y, u)) continue;
      if (!best || r.leq(u, *best)) best = u;
    }
    if (best)
      for (int u = 0; u < r.n; ++u)
        if (r.leq(x, u) && r.leq(y, u) && !r.leq(*best, u)) return std::nullopt;
    return best;
  };
  for (int x = 0; x < p.n; ++x)
    for (int y = 0; y < p.n; ++y) {
      auto j = lub(p, x, y);
      if (!j) continue;
      auto jq = lub(q, f[x], f[y]);
      if (!jq || *jq != f[*j]) return false;
    }
  return true;
}

int FinLattice::meet_slow(int i, int j) const {
  const FinPoset& o = order;
  int best = -1;
  for (int u = 0; u < o.n; ++u) {
    if (!o.leq(u, i) || !o.leq(u, j)) continue;
    if (best < 0 || o.leq(best, u)) best = u;
  }
  if (best < 0) fail(errc::validation, cat("lattice: no meet for (", i, ",", j, ")"));
  for (int u = 0; u < o.n; ++u)
    if (o.leq(u, i) && o.leq(u, j) && !o.leq(u, best))
      fail(errc::validation, cat("lattice: no meet for (", i, ",", j, ")"));
  return best;
}

int FinLattice::join_slow(int i, int j) const {
  const FinPoset& o = order;
  int best = -1;
  for (int u = 0; u < o.n; ++u) {
    if (!o.leq(i, u) || !o.leq(j, u)) continue;
    if (best < 0 || o.leq(u, best)) best = u;
  }
  if (best < 0) fail(errc::validation, cat("lattice: no join for (", i, ",", j, ")"));
  for (int u = 0; u < o.n; ++u)
    if (o.leq(i, u) && o.leq(j, u) && !o.leq(best, u))
      fail(errc::validation, cat("lattice: no join for (", i, ",", j, ")"));
  return best;
}

int FinLattice::meet(int i, int j) const {
  if (!meet_tab.empty()) return meet_tab[static_cast<std::size_t>(i) * size() + j];
  return meet_slow(i, j);
}

int FinLattice::join(int i, int j) const {
  if (!join_tab.empty()) return join_tab[static_cast<std::size_t>(i) * size() + j];
  return join_slow(i, j);
}

void FinLattice::validate() const {
  int n = size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int m = meet(i, j), v = join(i, j);
      if (m != meet(j, i) || v != join(j, i)) fail(errc::validation, "lattice: not commutative");
      if (meet(i, v) != i || join(i, m) != i) fail(errc::validation, "lattice: absorption fails");
      bool le = order.leq(i, j);
      if (le != (m == i) || le != (v == j))
        fail(errc::validation, cat("lattice: order/meet mismatch at (", i, ",", j, ")"));
    }
}

FinLattice lattice_from_poset(const FinPoset& p) {
  p.validate();
  if (p.n == 0) fail(errc::validation, "lattice: empty poset");
  FinLattice l;
  l.order = p;
  if (p.n <= FinLattice::kDenseCap) {
    l.meet_tab.resize(static_cast<std::size_t>(p.n) * p.n);
    l.join_tab.resize(static_cast<std::size_t>(p.n) * p.n);
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j) {
        l.meet_tab[static_cast<std::size_t>(i) * p.n + j] = static_cast<std::uint16_t>(l.meet_slow(i, j));
        l.join_tab[static_cast<std::size_t>(i) * p.n + j] = static_cast<std::uint16_t>(l.join_slow(i, j));
      }
  } else {
    l.meet_slow(0, 0);  // probe existence lazily later; tables stay on demand
  }
  return l;
}

DistributivityReport check_distributive(const FinLattice& l) {
  DistributivityReport rep;
  int n = l.size();
  auto bad = [&](int p, int q, int r) {
    return l.meet(p, l.join(q, r)) != l.join(l.meet(p, q), l.meet(p, r));
  };
  if (n <= 512) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          if (bad(p, q, r)) {
            rep.distributive = false;
            rep.violation = {p, q, r};
            return rep;
          }
    return rep;
  }
  rep.exhaustive = false;
  rng64 rng(0);
  for (int t = 0; t < 200000; ++t) {
    int p = static_cast<int>(rng.below(n)), q = static_cast<int>(rng.below(n)),
        r = static_cast<int>(rng.below(n));
    if (bad(p, q, r)) {
      rep.distributive = false;
      rep.violation = {p, q, r};
      return rep;
    }
  }
  return rep;
}

namespace {
void enumerate_upsets(const FinPoset& p, const std::vector<int>& rev_ext, int pos,
                      std::uint64_t cur, std::vector<std::uint64_t>& out) {
  if (pos == p.n) {
    out.push_back(cur);
    return;
  }
  int e = rev_ext[pos];
  enumerate_upsets(p, rev_ext, pos + 1, cur, out);  // leave e out
  bool can = true;
  for (int j = 0; j < p.n && can; ++j)
    if (p.lt(e, j) && !(cur >> j & 1)) can = false;
  if (can) enumerate_upsets(p, rev_ext, pos + 1, cur | (std::uint64_t{1} << e), out);
}
}  // namespace

UpSetLattice upset_lattice(const FinPoset& p, int cap, bool nonempty_only) {
  p.validate();
  if (p.n > 63) fail(errc::cap, cat("upset_lattice: poset has ", p.n, " elements, hard cap is 63"));
  if (p.n > cap)
    fail(errc::cap, cat("upset_lattice: poset has ", p.n, " elements, cap is ", cap,
                        "; lattice may hold up to 2^", p.width(), " up-sets"));
  if (nonempty_only && !p.maximum())
    fail(errc::validation,
         "upset_lattice: nonempty up-sets form a lattice only when P has a maximum");
  UpSetLattice u;
  u.base = p;
  u.nonempty_only = nonempty_only;
  std::vector<int> ext = p.linear_extension();
  std::reverse(ext.begin(), ext.end());  // maximal elements first
  enumerate_upsets(p, ext, 0, 0, u.elems);
  if (nonempty_only) u.elems.erase(std::remove(u.elems.begin(), u.elems.end(), 0), u.elems.end());
  std::sort(u.elems.begin(), u.elems.end());
  int n = u.size();
  if (n > 1 << 20) fail(errc::cap, cat("upset_lattice: ", n, " up-sets exceeds the element guard"));

  FinPoset order;
  order.n = n;
  order.rel.assign(static_cast<std::size_t>(n) * n, 0);
  order.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    order.labels[i] = upset_bits(p, u.elems[i]);
    for (int j = 0; j < n; ++j)
      if ((u.elems[i] & u.elems[j]) == u.elems[j])  // Q_i contains Q_j, i.e. Q_i <= Q_j
        order.rel[static_cast<std::size_t>(i) * n + j] = 1;
  }
  u.lat.order = std::move(order);
  if (n <= FinLattice::kDenseCap) {
    u.lat.meet_tab.resize(static_cast<std::size_t>(n) * n);
    u.lat.join_tab.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int m = u.index_of(u.elems[i] | u.elems[j]);
        int v = u.index_of(u.elems[i] & u.elems[j]);
        if (m < 0 || v < 0)
          fail(errc::internal, nonempty_only ? "upset_lattice: family not closed (empty intersection?)"
                                             : "upset_lattice: family not closed");
        u.lat.meet_tab[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>(m);
        u.lat.join_tab[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>(v);
      }
  }
  return u;
}

int UpSetLattice::index_of(std::uint64_t mask) const {
  auto it = std::lower_bound(elems.begin(), elems.end(), mask);
  if (it == elems.end() || *it != mask) return -1;
  return static_cast<int>(it - elems.begin());
}

bool is_exact_square(const FinLattice& l, int w, int y, int z, int v) {
  const FinPoset& o = l.order;
  if (!o.leq(w, y) || !o.leq(w, z) || !o.leq(y, v) || !o.leq(z, v)) return false;
  return l.meet(y, z) == w && l.join(y, z) == v;
}

std::vector<ExactMove> exact_decompose(const UpSetLattice& u, int from, int to) {
  if (!u.leq(from, to))
    fail(errc::validation, cat("exact_decompose: ", from, " is not <= ", to, " in U(P)"));
  std::vector<ExactMove> moves;
  std::uint64_t cur = u.mask(from), target = u.mask(to);
  while (cur != target) {
    std::uint64_t diff = cur & ~target;
    // lowest-index minimal element of the difference
    int pick = -1;
    for (int i = 0; i < u.base.n; ++i) {
      if (!(diff >> i & 1)) continue;
      bool minimal = true;
      for (int j = 0; j < u.base.n && minimal; ++j)
        if ((diff >> j & 1) && u.base.lt(j, i)) minimal = false;
      if (minimal) {
        pick = i;
        break;
      }
    }
    if (pick < 0) fail(errc::internal, "exact_decompose: no minimal element");
    std::uint64_t next = cur & ~(std::uint64_t{1} << pick);
    std::uint64_t princ = principal_upset(u.base, pick);
    ExactMove mv;
    mv.removed = pick;
    mv.from = u.index_of(cur);
    mv.to = u.index_of(next);
    mv.principal = u.index_of(princ);
    mv.principal_minus = u.index_of(princ & ~(std::uint64_t{1} << pick));
    if (mv.to < 0 || mv.principal < 0 || mv.principal_minus < 0)
      fail(errc::internal, "exact_decompose: intermediate set is not in the lattice");
    if (!is_exact_square(u.lat, mv.from, mv.principal, mv.to, mv.principal_minus))
      fail(errc::internal, "exact_decompose: square is not exact");
    moves.push_back(mv);
    cur = next;
  }
  return moves;
}

BirkhoffResult birkhoff(const FinLattice& l) {
  BirkhoffResult res;
  auto dist = check_distributive(l);
  if (!dist.distributive) {
    res.distributive = false;
    res.violation = dist.violation;
    return res;
  }
  int n = l.size();
  auto top = l.order.maximum();
  for (int p = 0; p < n; ++p) {
    if (top && *top == p) continue;  // final object excluded
    bool irr = true;
    for (int a = 0; a < n && irr; ++a)
      for (int b = 0; b < n && irr; ++b)
        if (l.meet(a, b) == p && a != p && b != p) irr = false;
    if (irr) res.irr_elems.push_back(p);
  }
  res.irreducibles = subposet(l.order, res.irr_elems);
  int k = static_cast<int>(res.irr_elems.size());
  if (k > 63) fail(errc::cap, "birkhoff: more than 63 irreducibles");
  res.eta.resize(n);
  for (int x = 0; x < n; ++x) {
    std::uint64_t m = 0;
    for (int t = 0; t < k; ++t)
      if (l.order.leq(x, res.irr_elems[t])) m |= std::uint64_t{1} << t;
    res.eta[x] = m;
  }
  // eta is an isomorphism onto U(I(L)) iff it is injective and hits every up-set.
  UpSetLattice ui = upset_lattice(res.irreducibles, 63);
  std::vector<std::uint64_t> image = res.eta;
  std::sort(image.begin(), image.end());
  bool inj = std::adjacent_find(image.begin(), image.end()) == image.end();
  res.isomorphism = inj && image.size() == ui.elems.size() &&
                    std::equal(image.begin(), image.end(), ui.elems.begin());
  if (res.isomorphism) {
    for (int x = 0; x < n && res.isomorphism; ++x)
      for (int y = 0; y < n && res.isomorphism; ++y) {
        bool le = l.order.leq(x, y);
        bool le_img = (res.eta[x] & res.eta[y]) == res.eta[y];
        if (le != le_img) res.isomorphism = false;
      }
  }
  return res;
}

int CrtLattice::lambda(int x, int y) const {
  if (!u.leq(x, y)) fail(errc::validation, cat("lambda: ", x, " is not <= ", y));
  auto [p1, p2] = pi(y);
  (void)p2;
  return u.join(sigma(p1, 0), x);
}

int CrtLattice::mu(int x, int y) const {
  if (!u.leq(x, y)) fail(errc::validation, cat("mu: ", x, " is not <= ", y));
  auto [p1, p2] = pi(y);
  (void)p1;
  return u.join(sigma(0, p2), x);
}

CrtLattice crt(int n, int cap) {
  if (n < 0 || n > cap) fail(errc::cap, cat("crt: n=", n, " outside [0,", cap, "]"));
  CrtLattice c;
  c.n = n;
  FinPoset grid = grid_poset(n);
  c.u = upset_lattice(grid, grid.n, true);
  int side = n + 1;
  c.sigma_tab.assign(side * side, -1);
  c.xi_tab.assign(side * side, -1);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      int s = c.u.index_of(principal_upset(grid, p * side + q));
      if (s < 0) fail(errc::internal, "crt: principal up-set missing");
      c.sigma_tab[p * side + q] = s;
    }
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q)
      c.xi_tab[p * side + q] = c.u.meet(c.sigma(p, 0), c.sigma(0, q));
  c.pi_tab.resize(c.size());
  for (int x = 0; x < c.size(); ++x) {
    std::uint64_t m = c.u.mask(x);
    int mi = n, mj = n;
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q)
        if (m >> (p * side + q) & 1) {
          mi = std::min(mi, p);
          mj = std::min(mj, q);
        }
    c.pi_tab[x] = {mi, mj};
  }
  c.intervals.resize(side * side);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      int lo = c.xi(p, q), hi = c.sigma(p, q);
      auto& iv = c.intervals[p * side + q];
      for (int x = 0; x < c.size(); ++x)
        if (c.u.leq(lo, x) && c.u.leq(x, hi)) iv.push_back(x);
    }
  // witness for Crt^n = U([n]x[n] - {(n,n)}): drop the forced corner bit
  int corner = n * side + n;
  FinPoset punctured;
  {
    std::vector<int> keep;
    for (int i = 0; i < grid.n; ++i)
      if (i != corner) keep.push_back(i);
    punctured = subposet(grid, keep);
  }
  UpSetLattice up = upset_lattice(punctured, punctured.n > 0 ? punctured.n : 1);
  if (up.size() != c.size()) fail(errc::internal, "crt: punctured-grid witness size mismatch");
  c.iso_to_punctured.resize(c.size());
  for (int x = 0; x < c.size(); ++x) {
    std::uint64_t m = c.u.mask(x);
    std::uint64_t reduced = 0;
    for (int i = 0, t = 0; i < grid.n; ++i) {
      if (i == corner) continue;
      if (m >> i & 1) reduced |= std::uint64_t{1} << t;
      ++t;
    }
    int idx = up.index_of(reduced);
    if (idx < 0) fail(errc::internal, "crt: punctured-grid witness misses an element");
    c.iso_to_punctured[x] = idx;
  }
  return c;
}

std::vector<int> crt_induced(const std::vector<int>& d, const CrtLattice& src,
                             const CrtLattice& dst) {
  const FinPoset cm = chain_poset(src.n), cn = chain_poset(dst.n);
  if (!is_monotone(cm, cn, d)) fail(errc::validation, "crt_induced: d is not monotone");
  FinPoset gm = grid_poset(src.n), gn = grid_poset(dst.n);
  std::vector<int> dxd(gm.n);
  for (int i = 0; i <= src.n; ++i)
    for (int j = 0; j <= src.n; ++j)
      dxd[i * (src.n + 1) + j] = d[i] * (dst.n + 1) + d[j];
  std::vector<int> out(src.size());
  for (int x = 0; x < src.size(); ++x) {
    std::uint64_t img = transport_pushforward(gm, gn, dxd, src.u.mask(x));
    int idx = dst.u.index_of(img);
    if (idx < 0) fail(errc::internal, "crt_induced: image not in target lattice");
    out[x] = idx;
  }
  return out;
}

std::string upset_bits(const FinPoset& p, std::uint64_t mask) {
  std::string s(p.n, '0');
  for (int i = 0; i < p.n; ++i)
    if (mask >> i & 1) s[i] = '1';
  return s;
}

}  // namespace nervelab
