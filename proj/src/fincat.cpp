#include "nervelab/fincat.hpp"

#include <algorithm>
#include <array>

namespace nervelab {

int FinCat::compose(int g, int f) const {
  if (!composable(g, f))
    fail(errc::validation, cat("category: '", mors[g].name, "' o '", mors[f].name,
                               "' is not composable"));
  int r = comp[static_cast<std::size_t>(g) * num_mors() + f];
  if (r < 0)
    fail(errc::validation,
         cat("category: missing composite '", mors[g].name, "' o '", mors[f].name, "'"));
  return r;
}

int FinCat::hom_count(int x, int y) const {
  int k = 0;
  for (const auto& m : mors)
    if (m.src == x && m.dst == y) ++k;
  return k;
}

std::vector<int> FinCat::hom(int x, int y) const {
  std::vector<int> out;
  for (int m = 0; m < num_mors(); ++m)
    if (mors[m].src == x && mors[m].dst == y) out.push_back(m);
  return out;
}

std::optional<int> FinCat::inverse(int m) const {
  for (int u : hom(mors[m].dst, mors[m].src))
    if (compose(u, m) == identity[mors[m].src] && compose(m, u) == identity[mors[m].dst])
      return u;
  return std::nullopt;
}

bool FinCat::is_iso(int m) const { return inverse(m).has_value(); }

void FinCat::validate() const {
  int M = num_mors();
  if (static_cast<int>(identity.size()) != num_objects())
    fail(errc::validation, "category: identity table has wrong size");
  for (const auto& m : mors)
    if (m.src < 0 || m.src >= num_objects() || m.dst < 0 || m.dst >= num_objects())
      fail(errc::validation, cat("category: dangling src/dst in morphism '", m.name, "'"));
  for (int x = 0; x < num_objects(); ++x) {
    int e = identity[x];
    if (e < 0 || e >= M || mors[e].src != x || mors[e].dst != x)
      fail(errc::validation, cat("category: bad identity for object '", objects[x], "'"));
  }
  for (int g = 0; g < M; ++g)
    for (int f = 0; f < M; ++f) {
      int r = comp[static_cast<std::size_t>(g) * M + f];
      if (!composable(g, f)) {
        if (r >= 0)
          fail(errc::validation, cat("category: spurious composite '", mors[g].name, "' o '",
                                     mors[f].name, "'"));
        continue;
      }
      if (r < 0)
        fail(errc::validation,
             cat("category: missing composite '", mors[g].name, "' o '", mors[f].name, "'"));
      if (mors[r].src != mors[f].src || mors[r].dst != mors[g].dst)
        fail(errc::validation, cat("category: bad composite '", mors[g].name, "' o '",
                                   mors[f].name, "' = '", mors[r].name, "' (src/dst mismatch)"));
    }
  for (int f = 0; f < M; ++f) {
    if (compose(identity[mors[f].dst], f) != f || compose(f, identity[mors[f].src]) != f)
      fail(errc::validation, cat("category: identity law violation for '", mors[f].name, "'"));
  }
  // exhaustive associativity: g o (f o h) = (g o f) o h
  for (int g = 0; g < M; ++g)
    for (int f = 0; f < M; ++f) {
      if (!composable(g, f)) continue;
      int gf = compose(g, f);
      for (int h = 0; h < M; ++h) {
        if (!composable(f, h)) continue;
        if (compose(g, compose(f, h)) != compose(gf, h))
          fail(errc::validation, cat("category: associativity violation at (", mors[g].name, ",",
                                     mors[f].name, ",", mors[h].name, ")"));
      }
    }
}

FinCat category_from_poset(const FinPoset& p) {
  FinCat c;
  c.objects = p.labels;
  std::vector<std::vector<int>> mor_idx(p.n, std::vector<int>(p.n, -1));
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (p.leq(i, j)) {
        mor_idx[i][j] = c.num_mors();
        c.mors.push_back({cat(p.label(i), "<=", p.label(j)), i, j});
      }
  c.identity.resize(p.n);
  for (int i = 0; i < p.n; ++i) c.identity[i] = mor_idx[i][i];
  int M = c.num_mors();
  c.comp.assign(static_cast<std::size_t>(M) * M, -1);
  for (int g = 0; g < M; ++g)
    for (int f = 0; f < M; ++f)
      if (c.composable(g, f))
        c.comp[static_cast<std::size_t>(g) * M + f] = mor_idx[c.mors[f].src][c.mors[g].dst];
  c.validate();
  return c;
}

FinCat opposite_category(const FinCat& c) {
  FinCat o = c;
  for (auto& m : o.mors) std::swap(m.src, m.dst);
  int M = c.num_mors();
  for (int g = 0; g < M; ++g)
    for (int f = 0; f < M; ++f)
      o.comp[static_cast<std::size_t>(g) * M + f] = c.comp[static_cast<std::size_t>(f) * M + g];
  return o;
}

EdgeClass class_of_all(const FinCat& c, std::string name) {
  return {std::move(name), std::vector<char>(c.num_mors(), 1)};
}

EdgeClass class_of_identities(const FinCat& c, std::string name) {
  EdgeClass e{std::move(name), std::vector<char>(c.num_mors(), 0)};
  for (int x = 0; x < c.num_objects(); ++x) e.member[c.identity[x]] = 1;
  return e;
}

EdgeClass class_of_isos(const FinCat& c, std::string name) {
  EdgeClass e{std::move(name), std::vector<char>(c.num_mors(), 0)};
  for (int m = 0; m < c.num_mors(); ++m)
    if (c.is_iso(m)) e.member[m] = 1;
  return e;
}

EdgeClass class_from_list(const FinCat& c, const std::vector<int>& ms, std::string name) {
  EdgeClass e{std::move(name), std::vector<char>(c.num_mors(), 0)};
  for (int m : ms) e.member[m] = 1;
  return e;
}

bool square_commutes(const FinCat& c, const Square& s) {
  const auto& ms = c.mors;
  if (ms[s.top].src != ms[s.left].src) return false;
  if (ms[s.right].src != ms[s.top].dst) return false;
  if (ms[s.bottom].src != ms[s.left].dst) return false;
  if (ms[s.right].dst != ms[s.bottom].dst) return false;
  return c.compose(s.right, s.top) == c.compose(s.bottom, s.left);
}

Square make_square(const FinCat& c, int top, int left, int right, int bottom) {
  Square s{top, left, right, bottom};
  if (!square_commutes(c, s)) fail(errc::validation, "square does not commute");
  return s;
}

namespace {
struct Cone {
  int w, a, b;  // apex, w -> y, w -> z
};

std::vector<Cone> cones_over(const FinCat& c, int f, int g) {
  std::vector<Cone> out;
  int y = c.mors[f].src, z = c.mors[g].src;
  for (int w = 0; w < c.num_objects(); ++w)
    for (int a : c.hom(w, y))
      for (int b : c.hom(w, z))
        if (c.compose(f, a) == c.compose(g, b)) out.push_back({w, a, b});
  return out;
}

// Factorizations of the cone (w, a, b) through (t, ta, tb).
std::vector<int> cone_factorizations(const FinCat& c, const Cone& cone, int t, int ta, int tb) {
  std::vector<int> hs;
  for (int h : c.hom(cone.w, t))
    if (c.compose(ta, h) == cone.a && c.compose(tb, h) == cone.b) hs.push_back(h);
  return hs;
}
}  // namespace

std::optional<PullbackCone> pullback(const FinCat& c, int f, int g) {
  if (c.mors[f].dst != c.mors[g].dst) fail(errc::validation, "pullback: not a cospan");
  auto cones = cones_over(c, f, g);
  std::optional<PullbackCone> best;
  for (const auto& cand : cones) {
    bool terminal = true;
    std::vector<std::array<int, 4>> facts;
    for (const auto& other : cones) {
      auto hs = cone_factorizations(c, other, cand.w, cand.a, cand.b);
      if (hs.size() != 1) {
        terminal = false;
        break;
      }
      facts.push_back({other.w, other.a, other.b, hs[0]});
    }
    if (!terminal) continue;
    PullbackCone pc;
    pc.apex = cand.w;
    pc.leg1 = cand.a;
    pc.leg2 = cand.b;
    pc.f = f;
    pc.g = g;
    pc.factorizations = std::move(facts);
    if (!best || std::tie(pc.apex, pc.leg1, pc.leg2) < std::tie(best->apex, best->leg1, best->leg2))
      best = std::move(pc);
  }
  return best;
}

std::optional<std::pair<int, int>> first_missing_pullback(const FinCat& c) {
  for (int f = 0; f < c.num_mors(); ++f)
    for (int g = 0; g < c.num_mors(); ++g) {
      if (c.mors[f].dst != c.mors[g].dst) continue;
      if (!pullback(c, f, g)) return std::make_pair(f, g);
    }
  return std::nullopt;
}

bool admits_all_pullbacks(const FinCat& c) { return !first_missing_pullback(c).has_value(); }

bool is_cartesian_square(const FinCat& c, const Square& s) {
  if (!square_commutes(c, s)) fail(errc::validation, "is_cartesian_square: square does not commute");
  auto cones = cones_over(c, s.right, s.bottom);
  for (const auto& other : cones)
    if (cone_factorizations(c, other, c.mors[s.top].src, s.top, s.left).size() != 1) return false;
  return true;
}

std::optional<DiagonalResult> diagonal_of(const FinCat& c, int f) {
  auto pb = pullback(c, f, f);
  if (!pb) return std::nullopt;
  int y = c.mors[f].src;
  DiagonalResult res;
  res.apex = pb->apex;
  int idy = c.identity[y];
  for (int h : c.hom(y, pb->apex))
    if (c.compose(pb->leg1, h) == idy && c.compose(pb->leg2, h) == idy) {
      res.diagonal = h;
      break;
    }
  if (res.diagonal < 0) fail(errc::internal, "diagonal_of: terminal cone admits no factorization");
  res.is_iso = c.is_iso(res.diagonal);
  return res;
}

ClassReport class_properties(const FinCat& c, const EdgeClass& e,
                             const std::vector<EdgeClass>& others) {
  ClassReport r;
  for (int x = 0; x < c.num_objects(); ++x)
    if (!e.has(c.identity[x])) {
      r.contains_identities = false;
      r.missing_identity = c.identity[x];
      break;
    }
  for (int g = 0; g < c.num_mors() && r.comp_stable; ++g)
    for (int f = 0; f < c.num_mors() && r.comp_stable; ++f) {
      if (!c.composable(g, f) || !e.has(g) || !e.has(f)) continue;
      if (!e.has(c.compose(g, f))) {
        r.comp_stable = false;
        r.comp_witness = {g, f};
      }
    }
  // pullback stability by a given class: scan commuting squares with right in E,
  // bottom in F, keep the Cartesian ones, and require left in E.
  auto stable_by = [&](const EdgeClass& f_class) -> std::pair<bool, std::optional<Square>> {
    for (int right = 0; right < c.num_mors(); ++right) {
      if (!e.has(right)) continue;
      for (int bottom = 0; bottom < c.num_mors(); ++bottom) {
        if (!f_class.has(bottom)) continue;
        if (c.mors[right].dst != c.mors[bottom].dst) continue;
        for (int w = 0; w < c.num_objects(); ++w)
          for (int top : c.hom(w, c.mors[right].src))
            for (int left : c.hom(w, c.mors[bottom].src)) {
              Square s{top, left, right, bottom};
              if (!square_commutes(c, s)) continue;
              if (!is_cartesian_square(c, s)) continue;
              if (!e.has(left)) return {false, s};
            }
      }
    }
    return {true, std::nullopt};
  };
  auto all = class_of_all(c);
  std::tie(r.pullback_stable, r.pullback_witness) = stable_by(all);
  for (const auto& other : others) {
    auto [ok, wit] = stable_by(other);
    r.pullback_stable_by.emplace_back(other.name, ok);
    r.pullback_by_witness.push_back(wit);
  }
  for (int p = 0; p < c.num_mors() && r.cancellation; ++p) {
    if (!e.has(p)) continue;
    for (int q = 0; q < c.num_mors() && r.cancellation; ++q) {
      if (!c.composable(p, q)) continue;
      int pq = c.compose(p, q);
      if (e.has(q) != e.has(pq)) {
        r.cancellation = false;
        r.cancellation_witness = {p, q, pq};
      }
    }
  }
  r.admissible = r.contains_identities && r.pullback_stable && r.cancellation;
  return r;
}

FactorizationReport factorization_check(const FinCat& c, const EdgeClass& e1,
                                        const EdgeClass& e2) {
  FactorizationReport rep;
  rep.factors.resize(c.num_mors());
  for (int f = 0; f < c.num_mors(); ++f) {
    for (int p = 0; p < c.num_mors(); ++p) {
      if (!e1.has(p) || c.mors[p].dst != c.mors[f].dst) continue;
      for (int q = 0; q < c.num_mors(); ++q) {
        if (!e2.has(q) || !c.composable(p, q)) continue;
        if (c.mors[q].src != c.mors[f].src) continue;
        if (c.compose(p, q) == f) rep.factors[f].emplace_back(p, q);
      }
    }
    if (rep.factors[f].empty() && rep.all_factor) {
      rep.all_factor = false;
      rep.unfactored = f;
    }
  }
  return rep;
}

FilteredReport is_filtered(const FinCat& c) {
  FilteredReport rep;
  if (c.num_objects() == 0) {
    rep.nonempty = false;
    return rep;
  }
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < c.num_objects(); ++y) {
      bool found = false;
      for (int z = 0; z < c.num_objects() && !found; ++z) {
        auto us = c.hom(x, z);
        auto vs = c.hom(y, z);
        if (!us.empty() && !vs.empty()) {
          rep.cocones.emplace_back(x, y, z, us.front(), vs.front());
          found = true;
        }
      }
      if (!found) {
        rep.uncoconed_pair = {x, y};
        return rep;
      }
    }
  for (int f = 0; f < c.num_mors(); ++f)
    for (int g = 0; g < c.num_mors(); ++g) {
      if (c.mors[f].src != c.mors[g].src || c.mors[f].dst != c.mors[g].dst) continue;
      bool found = false;
      for (int h = 0; h < c.num_mors() && !found; ++h) {
        if (!c.composable(h, f)) continue;
        if (c.compose(h, f) == c.compose(h, g)) {
          rep.equalizers.emplace_back(f, g, h);
          found = true;
        }
      }
      if (!found) {
        rep.unequalized_pair = {f, g};
        return rep;
      }
    }
  rep.filtered = true;
  return rep;
}

}  // namespace nervelab
