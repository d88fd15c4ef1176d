#include "nervelab/multinerve.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace nervelab {

int GridFunctor::points() const {
  int n = 1;
  for (int s : shape) n *= s + 1;
  return n;
}

int GridFunctor::point_index(const std::vector<int>& coord) const {
  int idx = 0;
  for (int d = 0; d < k(); ++d) idx = idx * (shape[d] + 1) + coord[d];
  return idx;
}

std::vector<int> GridFunctor::coord_of(int point) const {
  std::vector<int> coord(k());
  for (int d = k() - 1; d >= 0; --d) {
    coord[d] = point % (shape[d] + 1);
    point /= shape[d] + 1;
  }
  return coord;
}

int grid_composite(const FinCat& c, const GridFunctor& f, int dir, std::vector<int> at,
                   int from, int to) {
  if (from > to) fail(errc::validation, "grid_composite: from > to");
  int d = dir - 1;
  if (!f.twisted(dir)) {
    at[d] = from;
    int m = c.identity[f.obj[f.point_index(at)]];
    for (int t = from; t < to; ++t) {
      at[d] = t;
      m = c.compose(f.edge[d][f.point_index(at)], m);
    }
    return m;
  }
  at[d] = to;
  int m = c.identity[f.obj[f.point_index(at)]];
  for (int t = to - 1; t >= from; --t) {
    at[d] = t;
    m = c.compose(f.edge[d][f.point_index(at)], m);
  }
  return m;
}

Square grid_square(const FinCat& c, const GridFunctor& f, int dir_i, int dir_j,
                   const std::vector<int>& base) {
  (void)c;
  int di = dir_i - 1, dj = dir_j - 1;
  auto at = [&](int a, int b) {
    std::vector<int> coord = base;
    coord[di] += a;
    coord[dj] += b;
    return f.point_index(coord);
  };
  int a1 = f.edge[di][at(0, 0)], a2 = f.edge[di][at(0, 1)];
  int b1 = f.edge[dj][at(0, 0)], b2 = f.edge[dj][at(1, 0)];
  bool ti = f.twisted(dir_i), tj = f.twisted(dir_j);
  if (!ti && !tj) return {b1, a1, a2, b2};
  if (ti && !tj) return {b2, a1, a2, b1};
  if (!ti && tj) return {b1, a2, a1, b2};
  return {b2, a2, a1, b1};
}

bool grid_functorial(const FinCat& c, const GridFunctor& f) {
  int k = f.k();
  for (int p = 0; p < f.points(); ++p) {
    auto coord = f.coord_of(p);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        if (coord[i] + 1 > f.shape[i] || coord[j] + 1 > f.shape[j]) continue;
        if (!square_commutes(c, grid_square(c, f, i + 1, j + 1, coord))) return false;
      }
  }
  return true;
}

GridFunctor grid_reindex(const FinCat& c, const GridFunctor& f, int dir,
                         const std::vector<int>& monotone) {
  int d = dir - 1;
  for (std::size_t t = 0; t + 1 < monotone.size(); ++t)
    if (monotone[t] > monotone[t + 1]) fail(errc::validation, "grid_reindex: map not monotone");
  for (int v : monotone)
    if (v < 0 || v > f.shape[d]) fail(errc::validation, "grid_reindex: map out of range");
  GridFunctor g;
  g.shape = f.shape;
  g.shape[d] = static_cast<int>(monotone.size()) - 1;
  g.twist = f.twist;
  g.obj.assign(g.points(), -1);
  g.edge.assign(g.k(), std::vector<int>(g.points(), -1));
  for (int p = 0; p < g.points(); ++p) {
    auto coord = g.coord_of(p);
    auto src = coord;
    src[d] = monotone[coord[d]];
    g.obj[p] = f.obj[f.point_index(src)];
    for (int e = 0; e < g.k(); ++e) {
      if (coord[e] + 1 > g.shape[e]) continue;
      if (e == d) {
        g.edge[e][p] = grid_composite(c, f, dir, src, monotone[coord[d]], monotone[coord[d] + 1]);
      } else {
        g.edge[e][p] = f.edge[e][f.point_index(src)];
      }
    }
  }
  return g;
}

namespace {
std::vector<int> delta_map(int n, int skip) {  // [n-1] -> [n] missing `skip`
  std::vector<int> m;
  for (int t = 0; t <= n; ++t)
    if (t != skip) m.push_back(t);
  return m;
}
std::vector<int> sigma_map(int n, int dup) {  // [n+1] ->> [n] duplicating `dup`
  std::vector<int> m;
  for (int t = 0; t <= n; ++t) {
    m.push_back(t);
    if (t == dup) m.push_back(t);
  }
  return m;
}
}  // namespace

GridFunctor grid_face(const FinCat& c, const GridFunctor& f, int dir, int i) {
  return grid_reindex(c, f, dir, delta_map(f.shape[dir - 1], i));
}

GridFunctor grid_degeneracy(const FinCat& c, const GridFunctor& f, int dir, int j) {
  return grid_reindex(c, f, dir, sigma_map(f.shape[dir - 1], j));
}

GridFunctor diag_face(const FinCat& c, const GridFunctor& f, int i) {
  GridFunctor g = f;
  for (int d = 1; d <= f.k(); ++d) g = grid_face(c, g, d, i);
  return g;
}

GridFunctor diag_degeneracy(const FinCat& c, const GridFunctor& f, int j) {
  GridFunctor g = f;
  for (int d = 1; d <= f.k(); ++d) g = grid_degeneracy(c, g, d, j);
  return g;
}

bool diag_degenerate(const FinCat& c, const GridFunctor& f) {
  int n = f.shape.empty() ? 0 : f.shape[0];
  for (int j = 0; j + 1 <= n; ++j) {
    GridFunctor collapsed = diag_degeneracy(c, diag_face(c, f, j), j);
    if (collapsed == f) return true;
  }
  return false;
}

const Tiling::Tile& Tiling::tile(int i, int j) const {
  auto it = tiles.find({std::min(i, j), std::max(i, j)});
  if (it == tiles.end()) fail(errc::validation, cat("tiling: no tile for pair (", i, ",", j, ")"));
  return it->second;
}

Tiling Tiling::uniform(int k, Kind kind) {
  Tiling t;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) t.tiles[{i, j}] = Tile{kind, std::nullopt, {}};
  return t;
}

bool tile_admits(const FinCat& c, const Tiling::Tile& t, const Square& s) {
  if (!square_commutes(c, s)) return false;
  switch (t.kind) {
    case Tiling::Kind::all:
      return true;
    case Tiling::Kind::cart:
      return is_cartesian_square(c, s);
    case Tiling::Kind::edecomp: {
      auto dec = square_decomposition(c, s, *t.witness_class);
      return dec.has_pullback && dec.comparison_in_class;
    }
    case Tiling::Kind::explicit_set: {
      // degeneracy images of edges are always tiles
      if (c.is_identity(s.left) && c.is_identity(s.right)) return true;
      if (c.is_identity(s.top) && c.is_identity(s.bottom)) return true;
      for (const auto& q : t.squares)
        if ((q.top == s.top && q.left == s.left && q.right == s.right && q.bottom == s.bottom) ||
            (q.top == s.left && q.left == s.top && q.right == s.bottom && q.bottom == s.right))
          return true;
      return false;
    }
  }
  return false;
}

namespace {

struct Enumerator {
  const FinCat& c;
  const Marking& marking;
  const Tiling& tiling;
  GridFunctor proto;
  const EnumCaps& caps;
  std::vector<GridFunctor> out;

  bool edge_ok(int dir, int m) const { return marking.per_direction[dir - 1].has(m); }

  // full closure conditions: all composite edges in their class, all rectangles in tiles
  bool full_conditions(const GridFunctor& f) const {
    int k = f.k();
    for (int p = 0; p < f.points(); ++p) {
      auto coord = f.coord_of(p);
      for (int d = 1; d <= k; ++d) {
        if (coord[d - 1] != 0) continue;  // scan each line once
        for (int a = 0; a <= f.shape[d - 1]; ++a)
          for (int b = a; b <= f.shape[d - 1]; ++b)
            if (!edge_ok(d, grid_composite(c, f, d, coord, a, b))) return false;
      }
      for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
          if (coord[i - 1] != 0 || coord[j - 1] != 0) continue;
          for (int a = 0; a < f.shape[i - 1]; ++a)
            for (int a2 = a + 1; a2 <= f.shape[i - 1]; ++a2)
              for (int b = 0; b < f.shape[j - 1]; ++b)
                for (int b2 = b + 1; b2 <= f.shape[j - 1]; ++b2) {
                  // rectangle as a square with composite edges
                  auto at = coord;
                  auto comp_edge = [&](int dir, std::vector<int> base, int from, int to) {
                    return grid_composite(c, f, dir, base, from, to);
                  };
                  auto mk = [&](int ai, int bi) {
                    auto q = at;
                    q[i - 1] = ai;
                    q[j - 1] = bi;
                    return q;
                  };
                  int e_i_left = comp_edge(i, mk(a, b), a, a2);
                  int e_i_right = comp_edge(i, mk(a, b2), a, a2);
                  int e_j_top = comp_edge(j, mk(a, b), b, b2);
                  int e_j_bottom = comp_edge(j, mk(a2, b), b, b2);
                  bool ti = f.twisted(i), tj = f.twisted(j);
                  Square s{0, 0, 0, 0};
                  if (!ti && !tj) s = {e_j_top, e_i_left, e_i_right, e_j_bottom};
                  if (ti && !tj) s = {e_j_bottom, e_i_left, e_i_right, e_j_top};
                  if (!ti && tj) s = {e_j_top, e_i_right, e_i_left, e_j_bottom};
                  if (ti && tj) s = {e_j_bottom, e_i_right, e_i_left, e_j_top};
                  if (!tile_admits(c, tiling.tile(i, j), s)) return false;
                }
        }
    }
    return true;
  }

  void assign_edges(int point, const std::vector<int>& coord, const std::vector<int>& dirs,
                    std::size_t next) {
    if (next == dirs.size()) {
      fill_point(point + 1);
      return;
    }
    int d = dirs[next];  // 1-based direction with coord[d-1] > 0
    auto prev = coord;
    prev[d - 1] -= 1;
    int slot = proto.point_index(prev);
    int here = proto.obj[point], there = proto.obj[slot];
    int src = proto.twisted(d) ? here : there;
    int dst = proto.twisted(d) ? there : here;
    for (int m : c.hom(src, dst)) {
      if (!edge_ok(d, m)) continue;
      proto.edge[d - 1][slot] = m;
      // squares closing at `point` with this direction pair
      bool ok = true;
      for (std::size_t t = 0; t < next && ok; ++t) {
        int d2 = dirs[t];
        auto base = coord;
        base[d - 1] -= 1;
        base[d2 - 1] -= 1;
        int lo = std::min(d, d2), hi = std::max(d, d2);
        Square s = grid_square(c, proto, lo, hi, base);
        if (!tile_admits(c, tiling.tile(lo, hi), s)) ok = false;
      }
      if (ok) assign_edges(point, coord, dirs, next + 1);
      proto.edge[d - 1][slot] = -1;
    }
  }

  void fill_point(int point) {
    if (point == proto.points()) {
      if (full_conditions(proto)) {
        if (static_cast<long long>(out.size()) >= caps.max_results)
          fail(errc::cap, cat("restricted nerve enumeration exceeds ", caps.max_results,
                              " results"));
        out.push_back(proto);
      }
      return;
    }
    auto coord = proto.coord_of(point);
    std::vector<int> dirs;
    for (int d = 1; d <= proto.k(); ++d)
      if (coord[d - 1] > 0) dirs.push_back(d);
    for (int o = 0; o < c.num_objects(); ++o) {
      proto.obj[point] = o;
      assign_edges(point, coord, dirs, 0);
    }
    proto.obj[point] = -1;
  }
};

}  // namespace

std::vector<GridFunctor> restricted_nerve_simplices(const FinCat& c, const Marking& marking,
                                                    const Tiling& tiling,
                                                    const std::vector<int>& shape,
                                                    std::uint32_t twist, const EnumCaps& caps) {
  int k = static_cast<int>(shape.size());
  if (k < 1 || k > caps.max_directions)
    fail(errc::cap, cat("restricted nerve: ", k, " directions exceed cap ", caps.max_directions));
  if (c.num_objects() > 64)
    fail(errc::cap, cat("restricted nerve: ", c.num_objects(), " objects exceed cap 64"));
  for (int s : shape)
    if (s < 0 || s > caps.max_per_direction)
      fail(errc::cap, cat("restricted nerve: shape entry ", s, " exceeds cap ",
                          caps.max_per_direction));
  if (static_cast<int>(marking.per_direction.size()) != k)
    fail(errc::validation, "restricted nerve: marking size mismatch");
  for (const auto& e : marking.per_direction)
    for (int x = 0; x < c.num_objects(); ++x)
      if (!e.has(c.identity[x]))
        fail(errc::validation, cat("restricted nerve: class '", e.name,
                                   "' is missing an identity"));
  Enumerator en{c, marking, tiling, {}, caps, {}};
  en.proto.shape = shape;
  en.proto.twist = twist;
  en.proto.obj.assign(en.proto.points(), -1);
  en.proto.edge.assign(k, std::vector<int>(en.proto.points(), -1));
  en.fill_point(0);
  std::sort(en.out.begin(), en.out.end());
  return en.out;
}

std::vector<GridFunctor> diagonal_simplices(const FinCat& c, const Marking& marking,
                                            const Tiling& tiling, int k, std::uint32_t twist,
                                            int n, const EnumCaps& caps) {
  return restricted_nerve_simplices(c, marking, tiling, std::vector<int>(k, n), twist, caps);
}

std::vector<GridFunctor> epsilon_restrict(const FinCat& c, const Marking& marking,
                                          const Tiling& tiling, int k, int j, int n,
                                          const EnumCaps& caps) {
  std::vector<int> shape(k, 0);
  if (j < 1 || j > k) fail(errc::validation, cat("epsilon_restrict: slot ", j, " outside 1..", k));
  shape[j - 1] = n;
  return restricted_nerve_simplices(c, marking, tiling, shape, 0, caps);
}

std::vector<std::pair<GridFunctor, GridFunctor>> box_product(
    const std::vector<GridFunctor>& s, const std::vector<GridFunctor>& s2) {
  std::vector<std::pair<GridFunctor, GridFunctor>> out;
  for (const auto& a : s)
    for (const auto& b : s2) out.emplace_back(a, b);
  return out;
}

GridFunctor gluing_map(const FinCat& c, const GridFunctor& f) {
  if (f.k() < 2) fail(errc::validation, "gluing_map: needs at least two directions");
  if (f.twisted(1) || f.twisted(2))
    fail(errc::validation, "gluing_map: directions 1 and 2 must be untwisted");
  if (f.shape[0] != f.shape[1])
    fail(errc::validation, "gluing_map: first two directions must have equal shape");
  GridFunctor g;
  g.shape.assign(f.shape.begin() + 1, f.shape.end());
  g.twist = f.twist >> 1;  // direction j >= 3 becomes j - 1
  g.obj.assign(g.points(), -1);
  g.edge.assign(g.k(), std::vector<int>(g.points(), -1));
  for (int p = 0; p < g.points(); ++p) {
    auto gc = g.coord_of(p);
    std::vector<int> fc;
    fc.push_back(gc[0]);
    fc.push_back(gc[0]);
    fc.insert(fc.end(), gc.begin() + 1, gc.end());
    g.obj[p] = f.obj[f.point_index(fc)];
    for (int d = 1; d <= g.k(); ++d) {
      if (gc[d - 1] + 1 > g.shape[d - 1]) continue;
      if (d == 1) {
        // q (direction 2) then p (direction 1)
        int t = gc[0];
        auto mid = fc;
        int q_edge = f.edge[1][f.point_index(fc)];
        mid[1] = t + 1;
        int p_edge = f.edge[0][f.point_index(mid)];
        g.edge[0][p] = c.compose(p_edge, q_edge);
      } else {
        g.edge[d - 1][p] = f.edge[d][f.point_index(fc)];
      }
    }
  }
  return g;
}

// ---- Komp -------------------------------------------------------------------------

namespace {

struct TriEnum {
  const FinCat& c;
  const EdgeClass& e1;
  const EdgeClass& e2;
  int n;
  std::vector<int> diag_obj;  // objects of the chain
  std::vector<int> diag_mor;  // chain morphisms (size n)
  TriFunctor proto;
  std::vector<TriFunctor> out;

  void fill(int idx) {
    int total = (n + 1) * (n + 2) / 2;
    if (idx == total) {
      out.push_back(proto);
      return;
    }
    auto [i, j] = rcpt_coords(n, idx);
    auto try_point = [&](int o) {
      proto.obj[idx] = o;
      // incoming direction-1 edge from (i-1, j) when i >= 1
      bool feasible = true;
      std::vector<int> cand1, cand2;
      if (i >= 1) {
        int from = rcpt_index(n, i - 1, j);
        for (int m : c.hom(proto.obj[from], o))
          if (e1.has(m)) cand1.push_back(m);
        if (cand1.empty()) feasible = false;
      }
      if (j >= 1 && j - 1 >= i) {
        int from = rcpt_index(n, i, j - 1);
        for (int m : c.hom(proto.obj[from], o))
          if (e2.has(m)) cand2.push_back(m);
        if (cand2.empty()) feasible = false;
      }
      if (!feasible) return;
      auto place = [&](int m1, int m2) {
        if (i >= 1) proto.edge1[rcpt_index(n, i - 1, j)] = m1;
        if (j >= 1 && j - 1 >= i) proto.edge2[rcpt_index(n, i, j - 1)] = m2;
        // square closing at (i,j): corners (i-1,j-1),(i-1,j),(i,j-1),(i,j)
        bool ok = true;
        if (i >= 1 && j - 1 >= i) {
          int e2_prev = proto.edge2[rcpt_index(n, i - 1, j - 1)];
          int e1_prev = proto.edge1[rcpt_index(n, i - 1, j - 1)];
          // compose (i-1,j-1) -> (i-1,j) -> (i,j)  ==  (i-1,j-1) -> (i,j-1) -> (i,j)
          if (c.compose(m1, e2_prev) != c.compose(m2, e1_prev)) ok = false;
        }
        // diagonal constraint: composite (i-1,i-1) -> (i,i) equals the chain morphism
        if (ok && i >= 1 && j == i) {
          int q_edge = proto.edge2[rcpt_index(n, i - 1, i - 1)];
          if (c.compose(m1, q_edge) != diag_mor[i - 1]) ok = false;
        }
        if (ok) fill(idx + 1);
        if (i >= 1) proto.edge1[rcpt_index(n, i - 1, j)] = -1;
        if (j >= 1 && j - 1 >= i) proto.edge2[rcpt_index(n, i, j - 1)] = -1;
      };
      if (i >= 1 && j - 1 >= i) {
        for (int m1 : cand1)
          for (int m2 : cand2) place(m1, m2);
      } else if (i >= 1) {
        for (int m1 : cand1) place(m1, -1);
      } else if (j >= 1) {
        for (int m2 : cand2) place(-1, m2);
      } else {
        place(-1, -1);
      }
    };
    if (i == j) {
      try_point(diag_obj[i]);  // diagonal objects are pinned
    } else {
      for (int o = 0; o < c.num_objects(); ++o) try_point(o);
    }
    proto.obj[idx] = -1;
  }
};

}  // namespace

KompCat komp_category(const FinCat& c, const EdgeClass& e1, const EdgeClass& e2,
                      int base_object, const std::vector<int>& sigma_chain, int alpha) {
  if (alpha != 1 && alpha != 2) fail(errc::validation, "komp: alpha must be 1 or 2");
  for (int x = 0; x < c.num_objects(); ++x) {
    if (!e1.has(c.identity[x]))
      fail(errc::validation, cat("komp: class '", e1.name, "' is missing an identity"));
    if (!e2.has(c.identity[x]))
      fail(errc::validation, cat("komp: class '", e2.name, "' is missing an identity"));
  }
  const EdgeClass& ealpha = alpha == 1 ? e1 : e2;
  auto stab = class_properties(c, ealpha);
  if (!stab.comp_stable)
    fail(errc::validation,
         cat("komp: class '", ealpha.name,
             "' is not stable under composition, so the compactifications of a simplex do "
             "not form a category"));
  int n = static_cast<int>(sigma_chain.size());
  std::vector<int> diag_obj{base_object};
  for (int m : sigma_chain) {
    if (c.mors[m].src != diag_obj.back())
      fail(errc::validation, "komp: sigma chain is not composable from the base object");
    diag_obj.push_back(c.mors[m].dst);
  }

  KompCat out;
  out.n = n;
  out.alpha = alpha;
  int total = (n + 1) * (n + 2) / 2;
  TriEnum en{c, e1, e2, n, diag_obj, sigma_chain, {}, {}};
  en.proto.n = n;
  en.proto.obj.assign(total, -1);
  en.proto.edge1.assign(total, -1);
  en.proto.edge2.assign(total, -1);
  en.fill(0);
  std::sort(en.out.begin(), en.out.end());
  out.objects = std::move(en.out);

  // morphisms: componentwise-E_alpha natural transformations, identity on the diagonal
  FinCat& k = out.category;
  for (std::size_t i = 0; i < out.objects.size(); ++i) k.objects.push_back(cat("F", i));
  std::map<std::vector<int>, int> mor_index;  // (src, dst, components...) -> id
  auto add_transformation = [&](int src, int dst, const std::vector<int>& comps) {
    std::vector<int> key{src, dst};
    key.insert(key.end(), comps.begin(), comps.end());
    auto it = mor_index.find(key);
    if (it != mor_index.end()) return it->second;
    int id = k.num_mors();
    mor_index[key] = id;
    k.mors.push_back({cat("t", id), src, dst});
    out.components.push_back(comps);
    return id;
  };

  for (std::size_t a = 0; a < out.objects.size(); ++a)
    for (std::size_t b = 0; b < out.objects.size(); ++b) {
      const TriFunctor& F = out.objects[a];
      const TriFunctor& G = out.objects[b];
      std::vector<int> comps(total, -1);
      std::function<void(int)> rec = [&](int idx) {
        if (idx == total) {
          add_transformation(static_cast<int>(a), static_cast<int>(b), comps);
          return;
        }
        auto [i, j] = rcpt_coords(n, idx);
        std::vector<int> cands;
        if (i == j) {
          if (F.obj[idx] == G.obj[idx]) cands.push_back(c.identity[F.obj[idx]]);
        } else {
          for (int m : c.hom(F.obj[idx], G.obj[idx]))
            if (ealpha.has(m)) cands.push_back(m);
        }
        for (int m : cands) {
          // naturality against incoming unit edges
          bool ok = true;
          if (i >= 1) {
            int from = rcpt_index(n, i - 1, j);
            if (c.compose(m, F.edge1[from]) != c.compose(G.edge1[from], comps[from])) ok = false;
          }
          if (ok && j >= 1 && j - 1 >= i) {
            int from = rcpt_index(n, i, j - 1);
            if (c.compose(m, F.edge2[from]) != c.compose(G.edge2[from], comps[from])) ok = false;
          }
          if (!ok) continue;
          comps[idx] = m;
          rec(idx + 1);
          comps[idx] = -1;
        }
      };
      rec(0);
    }

  // identities and composition
  k.identity.assign(k.num_objects(), -1);
  for (int m = 0; m < k.num_mors(); ++m) {
    if (k.mors[m].src != k.mors[m].dst) continue;
    bool all_id = true;
    for (int t = 0; t < total; ++t)
      if (!c.is_identity(out.components[m][t])) all_id = false;
    if (all_id) k.identity[k.mors[m].src] = m;
  }
  for (int x = 0; x < k.num_objects(); ++x)
    if (k.identity[x] < 0) fail(errc::internal, "komp: identity transformation missing");
  int M = k.num_mors();
  k.comp.assign(static_cast<std::size_t>(M) * M, -1);
  for (int g = 0; g < M; ++g)
    for (int f = 0; f < M; ++f) {
      if (!k.composable(g, f)) continue;
      std::vector<int> key{k.mors[f].src, k.mors[g].dst};
      for (int t = 0; t < total; ++t)
        key.push_back(c.compose(out.components[g][t], out.components[f][t]));
      auto it = mor_index.find(key);
      if (it == mor_index.end())
        fail(errc::internal, "komp: composite transformation not enumerated");
      k.comp[static_cast<std::size_t>(g) * M + f] = it->second;
    }
  k.validate();
  return out;
}

// ---- Kart -------------------------------------------------------------------------

namespace {
// the unique map h : from -> to with legs_to o h = legs_from (restricted to to's support)
int factor_through_cone(const FinCat& c, int from_obj, const std::vector<int>& legs_from,
                        int to_obj, const std::vector<int>& legs_to, std::uint64_t to_mask,
                        const char* who) {
  int found = -1;
  for (int h : c.hom(from_obj, to_obj)) {
    bool ok = true;
    for (int p = 0; ok && p < 64; ++p) {
      if (!(to_mask >> p & 1)) continue;
      if (c.compose(legs_to[p], h) != legs_from[p]) ok = false;
    }
    if (ok) {
      if (found >= 0) fail(errc::internal, cat(who, ": factorization not unique"));
      found = h;
    }
  }
  if (found < 0) fail(errc::internal, cat(who, ": no factorization through the limit cone"));
  return found;
}
}  // namespace

KartDiagram cartesianize(const FinCat& c, const GridFunctor& sigma) {
  if (sigma.k() != 2 || sigma.shape[0] != sigma.shape[1] || sigma.twist != 0)
    fail(errc::validation, "cartesianize: sigma must be an untwisted square grid");
  if (!grid_functorial(c, sigma)) fail(errc::validation, "cartesianize: grid does not commute");
  int n = sigma.shape[0];
  KartDiagram kd;
  kd.lattice = crt(n);
  const CrtLattice& L = kd.lattice;
  const FinPoset grid = grid_poset(n);
  int side = n + 1;
  int N = L.size();
  kd.obj.assign(N, -1);
  kd.legs.assign(N, std::vector<int>(grid.n, -1));
  kd.edge.assign(static_cast<std::size_t>(N) * N, -1);

  auto sigma_obj = [&](int p) { return sigma.obj[p]; };  // grid point index = i*side+j
  auto sigma_arrow = [&](int p, int q) {
    // composite sigma(p) -> sigma(q) along direction 1 then direction 2
    int pi = p / side, pj = p % side, qi = q / side, qj = q % side;
    std::vector<int> at{pi, pj};
    int first = grid_composite(c, sigma, 1, at, pi, qi);
    at[0] = qi;
    int second = grid_composite(c, sigma, 2, at, pj, qj);
    return c.compose(second, first);
  };

  std::vector<int> order(N);
  for (int x = 0; x < N; ++x) order[x] = x;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int ca = __builtin_popcountll(L.u.mask(a)), cb = __builtin_popcountll(L.u.mask(b));
    if (ca != cb) return ca < cb;
    return a < b;
  });

  for (int x : order) {
    std::uint64_t mask = L.u.mask(x);
    // minimal elements of the up-set
    int min_elem = -1;
    bool principal = false;
    for (int p = 0; p < grid.n; ++p) {
      if (!(mask >> p & 1)) continue;
      bool minimal = true;
      for (int q = 0; q < grid.n; ++q)
        if ((mask >> q & 1) && grid.lt(q, p)) minimal = false;
      if (minimal) {
        min_elem = p;
        break;
      }
    }
    if (mask == principal_upset(grid, min_elem)) principal = true;
    if (principal) {
      kd.obj[x] = sigma_obj(min_elem);
      for (int p = 0; p < grid.n; ++p)
        if (mask >> p & 1) kd.legs[x][p] = sigma_arrow(min_elem, p);
      continue;
    }
    std::uint64_t a_mask = principal_upset(grid, min_elem);
    std::uint64_t b_mask = mask & ~(std::uint64_t{1} << min_elem);
    std::uint64_t d_mask = a_mask & ~(std::uint64_t{1} << min_elem);
    int A = L.u.index_of(a_mask), B = L.u.index_of(b_mask), D = L.u.index_of(d_mask);
    if (A < 0 || B < 0 || D < 0) fail(errc::internal, "cartesianize: decomposition escaped");
    int f = factor_through_cone(c, kd.obj[A], kd.legs[A], kd.obj[D], kd.legs[D], d_mask,
                                "cartesianize");
    int g = factor_through_cone(c, kd.obj[B], kd.legs[B], kd.obj[D], kd.legs[D], d_mask,
                                "cartesianize");
    auto pb = pullback(c, f, g);
    if (!pb)
      fail(errc::validation, cat("cartesianize: required limit absent at lattice element ",
                                 L.u.lat.order.label(x)));
    kd.obj[x] = pb->apex;
    for (int p = 0; p < grid.n; ++p) {
      if (!(mask >> p & 1)) continue;
      if (p == min_elem)
        kd.legs[x][p] = pb->leg1;  // legs[A][min_elem] is the identity
      else
        kd.legs[x][p] = c.compose(kd.legs[B][p], pb->leg2);
    }
    // consistency across the two routes on the overlap
    for (int p = 0; p < grid.n; ++p)
      if ((d_mask >> p & 1) &&
          c.compose(kd.legs[A][p], pb->leg1) != c.compose(kd.legs[B][p], pb->leg2))
        fail(errc::internal, "cartesianize: cone legs disagree on the overlap");
  }
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      if (!L.u.leq(x, y)) continue;
      kd.edge[static_cast<std::size_t>(x) * N + y] =
          factor_through_cone(c, kd.obj[x], kd.legs[x], kd.obj[y], kd.legs[y], L.u.mask(y),
                              "cartesianize(edges)");
    }
  return kd;
}

std::vector<int> alpha_section(const CrtLattice& l, const std::vector<int>& tau) {
  int m = static_cast<int>(tau.size()) - 1;
  if (m < 0) fail(errc::validation, "alpha_section: empty chain");
  for (int t = 0; t < m; ++t)
    if (!l.u.leq(tau[t], tau[t + 1]))
      fail(errc::validation, "alpha_section: tau is not monotone");
  std::vector<int> grid((m + 1) * (m + 1), -1);
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b)
      grid[a * (m + 1) + b] = a >= b ? l.lambda(tau[b], tau[a]) : l.mu(tau[a], tau[b]);
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b) {
      if (a + 1 <= m && !l.u.leq(grid[a * (m + 1) + b], grid[(a + 1) * (m + 1) + b]))
        fail(errc::internal, "alpha_section: grid is not monotone");
      if (b + 1 <= m && !l.u.leq(grid[a * (m + 1) + b], grid[a * (m + 1) + b + 1]))
        fail(errc::internal, "alpha_section: grid is not monotone");
    }
  return grid;
}

SquareDecomposition square_decomposition(const FinCat& c, const Square& s, const EdgeClass& e) {
  if (!square_commutes(c, s))
    fail(errc::validation, "square_decomposition: square does not commute");
  SquareDecomposition out;
  auto pb = pullback(c, s.right, s.bottom);
  if (!pb) return out;
  out.has_pullback = true;
  out.apex = pb->apex;
  int w = c.mors[s.top].src;
  for (const auto& fact : pb->factorizations)
    if (fact[0] == w && fact[1] == s.top && fact[2] == s.left) {
      out.comparison = fact[3];
      break;
    }
  if (out.comparison < 0)
    fail(errc::internal, "square_decomposition: cone not found among factorizations");
  out.comparison_in_class = e.has(out.comparison);
  return out;
}

// ---- hypothesis checkers ----------------------------------------------------------

namespace {
std::string mor_name(const FinCat& c, int m) { return c.mors[m].name; }

std::string square_str(const FinCat& c, const Square& s) {
  return cat("[top=", mor_name(c, s.top), " left=", mor_name(c, s.left),
             " right=", mor_name(c, s.right), " bottom=", mor_name(c, s.bottom), "]");
}

void subset_condition(HypothesesReport& rep, const FinCat& c, const EdgeClass& small,
                      const EdgeClass& big, const std::string& name) {
  Condition cond{name, true, ""};
  for (int m = 0; m < c.num_mors(); ++m)
    if (small.has(m) && !big.has(m)) {
      cond.pass = false;
      cond.witness = mor_name(c, m);
      break;
    }
  rep.conditions.push_back(std::move(cond));
}

void comp_stable_condition(HypothesesReport& rep, const FinCat& c, const EdgeClass& e,
                           const std::string& name) {
  auto r = class_properties(c, e);
  Condition cond{name, r.comp_stable, ""};
  if (!r.comp_stable)
    cond.witness = cat("(", mor_name(c, r.comp_witness->first), ",",
                       mor_name(c, r.comp_witness->second), ")");
  rep.conditions.push_back(std::move(cond));
}

FinCat subcategory_on_class(const FinCat& c, const EdgeClass& e, std::vector<int>& to_sub) {
  FinCat s;
  s.objects = c.objects;
  to_sub.assign(c.num_mors(), -1);
  std::vector<int> back;
  for (int m = 0; m < c.num_mors(); ++m)
    if (e.has(m)) {
      to_sub[m] = s.num_mors();
      back.push_back(m);
      s.mors.push_back(c.mors[m]);
    }
  s.identity.resize(c.num_objects());
  for (int x = 0; x < c.num_objects(); ++x) s.identity[x] = to_sub[c.identity[x]];
  int M = s.num_mors();
  s.comp.assign(static_cast<std::size_t>(M) * M, -1);
  for (int g = 0; g < M; ++g)
    for (int f = 0; f < M; ++f)
      if (s.composable(g, f)) s.comp[static_cast<std::size_t>(g) * M + f] =
          to_sub[c.compose(back[g], back[f])];
  s.validate();
  return s;
}
}  // namespace

HypothesesReport check_descent_hypotheses(const FinCat& c, const EdgeClass& e0,
                                          const EdgeClass& e1, const EdgeClass& e2,
                                          const std::vector<EdgeClass>& eks) {
  HypothesesReport rep;
  subset_condition(rep, c, class_of_identities(c), e1, "E1 contains identities");
  subset_condition(rep, c, class_of_identities(c), e2, "E2 contains identities");
  subset_condition(rep, c, e1, e0, "E1 subset of E0");
  subset_condition(rep, c, e2, e0, "E2 subset of E0");
  comp_stable_condition(rep, c, e0, "E0 stable under composition");
  comp_stable_condition(rep, c, e1, "E1 stable under composition");
  comp_stable_condition(rep, c, e2, "E2 stable under composition");
  {
    auto fr = factorization_check(c, e1, e2);
    Condition cond{"every morphism factors as E1 o E2", fr.all_factor, ""};
    if (!fr.all_factor) cond.witness = mor_name(c, *fr.unfactored);
    rep.conditions.push_back(std::move(cond));
  }
  for (const auto& ek : eks) {
    auto r1 = class_properties(c, e1, {ek});
    Condition c1{cat("E1 stable under pullback by ", ek.name), r1.pullback_stable_by[0].second, ""};
    if (!c1.pass) c1.witness = square_str(c, *r1.pullback_by_witness[0]);
    rep.conditions.push_back(std::move(c1));
    auto r2 = class_properties(c, e2, {ek});
    Condition c2{cat("E2 stable under pullback by ", ek.name), r2.pullback_stable_by[0].second, ""};
    if (!c2.pass) c2.witness = square_str(c, *r2.pullback_by_witness[0]);
    rep.conditions.push_back(std::move(c2));
    auto rk = class_properties(c, ek, {e1});
    Condition c3{cat(ek.name, " stable under pullback by E1"), rk.pullback_stable_by[0].second, ""};
    if (!c3.pass) c3.witness = square_str(c, *rk.pullback_by_witness[0]);
    rep.conditions.push_back(std::move(c3));
  }
  // C_{E1} admits pullbacks, preserved by the inclusion
  bool e1_comp = rep.find("E1 stable under composition")->pass;
  Condition has_pb{"C_E1 admits pullbacks", false, ""};
  Condition preserved{"C_E1 pullbacks preserved in C", false, ""};
  if (!e1_comp) {
    has_pb.witness = preserved.witness = "E1 is not a subcategory";
  } else {
    std::vector<int> to_sub;
    FinCat sub = subcategory_on_class(c, e1, to_sub);
    std::vector<int> back(sub.num_mors());
    for (int m = 0; m < c.num_mors(); ++m)
      if (to_sub[m] >= 0) back[to_sub[m]] = m;
    has_pb.pass = preserved.pass = true;
    for (int f = 0; f < sub.num_mors() && has_pb.pass && preserved.pass; ++f)
      for (int g = 0; g < sub.num_mors(); ++g) {
        if (sub.mors[f].dst != sub.mors[g].dst) continue;
        auto pb = pullback(sub, f, g);
        if (!pb) {
          has_pb.pass = false;
          has_pb.witness = cat("cospan (", mor_name(c, back[f]), ",", mor_name(c, back[g]), ")");
          preserved.pass = false;
          preserved.witness = has_pb.witness;
          break;
        }
        Square in_c{back[pb->leg1], back[pb->leg2], back[f], back[g]};
        if (!is_cartesian_square(c, in_c)) {
          preserved.pass = false;
          preserved.witness =
              cat("cospan (", mor_name(c, back[f]), ",", mor_name(c, back[g]), ")");
          break;
        }
      }
  }
  rep.conditions.push_back(std::move(has_pb));
  rep.conditions.push_back(std::move(preserved));
  return rep;
}

HypothesesReport check_gluing_hypotheses(const FinCat& c, const EdgeClass& e1,
                                         const EdgeClass& e2,
                                         const std::vector<EdgeClass>& chain,
                                         const std::vector<EdgeClass>& eks) {
  HypothesesReport rep;
  if (chain.empty()) {
    rep.conditions.push_back({"chain nonempty", false, ""});
    return rep;
  }
  {
    Condition cond{"chain is nested", true, ""};
    for (std::size_t i = 1; i < chain.size() && cond.pass; ++i)
      for (int m = 0; m < c.num_mors(); ++m)
        if (chain[i - 1].has(m) && !chain[i].has(m)) {
          cond.pass = false;
          cond.witness = cat(chain[i - 1].name, " contains ", mor_name(c, m), " but ",
                             chain[i].name, " does not");
          break;
        }
    rep.conditions.push_back(std::move(cond));
  }
  {
    auto isos = class_of_isos(c);
    Condition cond{"chain starts at the isomorphisms", true, ""};
    for (int m = 0; m < c.num_mors(); ++m)
      if (chain.front().has(m) != isos.has(m)) {
        cond.pass = false;
        cond.witness = mor_name(c, m);
        break;
      }
    rep.conditions.push_back(std::move(cond));
  }
  {
    Condition cond{"chain ends at E1 cap E2", true, ""};
    for (int m = 0; m < c.num_mors(); ++m) {
      bool in_cap = e1.has(m) && e2.has(m);
      if (chain.back().has(m) != in_cap) {
        cond.pass = false;
        cond.witness = mor_name(c, m);
        break;
      }
    }
    rep.conditions.push_back(std::move(cond));
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    comp_stable_condition(rep, c, chain[i], cat(chain[i].name, " stable under composition"));
    auto r = class_properties(c, chain[i]);
    Condition cond{cat(chain[i].name, " stable under pullback"), r.pullback_stable, ""};
    if (!r.pullback_stable) cond.witness = square_str(c, *r.pullback_witness);
    rep.conditions.push_back(std::move(cond));
  }
  for (std::size_t i = 1; i < chain.size(); ++i) {
    Condition cond{cat("diagonals of ", chain[i].name, " lie in ", chain[i - 1].name), true, ""};
    for (int m = 0; m < c.num_mors() && cond.pass; ++m) {
      if (!chain[i].has(m)) continue;
      auto d = diagonal_of(c, m);
      if (!d) {
        cond.pass = false;
        cond.witness = cat("missing pullback for ", mor_name(c, m));
      } else if (!chain[i - 1].has(d->diagonal)) {
        cond.pass = false;
        cond.witness = cat(mor_name(c, m), " has diagonal ", mor_name(c, d->diagonal));
      }
    }
    rep.conditions.push_back(std::move(cond));
  }
  for (const auto& ek : eks) {
    auto rk = class_properties(c, ek, {e1});
    Condition cond{cat(ek.name, " stable under pullback by E1"), rk.pullback_stable_by[0].second,
                   ""};
    if (!cond.pass) cond.witness = square_str(c, *rk.pullback_by_witness[0]);
    rep.conditions.push_back(std::move(cond));
  }
  return rep;
}

std::vector<EdgeClass> build_truncation_chain(const FinCat& c, const EdgeClass& e1,
                                              const EdgeClass& e2) {
  EdgeClass isos = class_of_isos(c);
  isos.name = "E'0";
  EdgeClass cap{"E'_top", std::vector<char>(c.num_mors(), 0)};
  for (int m = 0; m < c.num_mors(); ++m) cap.member[m] = e1.has(m) && e2.has(m);
  EdgeClass monos{"E'1", isos.member};
  for (int m = 0; m < c.num_mors(); ++m) {
    if (!cap.has(m) || monos.has(m)) continue;
    auto d = diagonal_of(c, m);
    if (d && d->is_iso) monos.member[m] = 1;
  }
  std::vector<EdgeClass> chain{isos};
  if (monos.member != isos.member) chain.push_back(monos);
  EdgeClass top{"", std::vector<char>(c.num_mors(), 0)};
  for (int m = 0; m < c.num_mors(); ++m) top.member[m] = cap.has(m) || isos.has(m);
  if (top.member != chain.back().member) {
    top.name = cat("E'", chain.size());
    chain.push_back(top);
  }
  if (chain.size() >= 2 && chain[1].name != "E'1") chain[1].name = "E'1";
  chain.back().name = cat("E'", chain.size() - 1);
  return chain;
}

}  // namespace nervelab
