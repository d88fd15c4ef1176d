#include "nervelab/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>

namespace nervelab {

Surj identity_surj(int n) {
  Surj s(n + 1);
  for (int i = 0; i <= n; ++i) s[i] = i;
  return s;
}

Surj compose_surj(const Surj& outer, const Surj& inner) {
  Surj r(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
  return r;
}

bool is_surjection_onto(const Surj& s, int p) {
  if (s.empty() || s.front() != 0 || s.back() != p) return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i + 1] - s[i] > 1 || s[i + 1] < s[i]) return false;
  return true;
}

SimplexRef nondeg_ref(int dim, int id) { return {dim, id, identity_surj(dim)}; }

int TruncSSet::total() const {
  int t = 0;
  for (const auto& d : dims) t += static_cast<int>(d.size());
  return t;
}

SimplexRef TruncSSet::face(const SimplexRef& r, int i) const {
  int n = r.dim();
  if (n == 0) fail(errc::validation, "face of a vertex");
  Surj tau;
  tau.reserve(n);
  for (int t = 0; t <= n; ++t)
    if (t != i) tau.push_back(r.surj[t]);
  if (is_surjection_onto(tau, r.core_dim)) return {r.core_dim, r.core_id, std::move(tau)};
  // exactly one value dropped out: v = r.surj[i]
  int v = r.surj[i];
  Surj tau2(tau.size());
  for (std::size_t t = 0; t < tau.size(); ++t) tau2[t] = tau[t] < v ? tau[t] : tau[t] - 1;
  const SimplexRef& f = dims[r.core_dim][r.core_id].faces[v];
  return {f.core_dim, f.core_id, compose_surj(f.surj, tau2)};
}

SimplexRef TruncSSet::degeneracy(const SimplexRef& r, int j) const {
  Surj s = r.surj;
  s.insert(s.begin() + j, r.surj[j]);
  return {r.core_dim, r.core_id, std::move(s)};
}

std::vector<int> TruncSSet::vertices_of(const SimplexRef& r) const {
  const auto& core = dims[r.core_dim][r.core_id].vertices;
  std::vector<int> vs(r.surj.size());
  for (std::size_t t = 0; t < r.surj.size(); ++t) vs[t] = core[r.surj[t]];
  return vs;
}

std::optional<int> TruncSSet::by_vertices(int n, const std::vector<int>& vs) const {
  if (n < 0 || n > max_dim) return std::nullopt;
  for (int id = 0; id < count(n); ++id)
    if (dims[n][id].vertices == vs) return id;
  return std::nullopt;
}

void TruncSSet::validate() const {
  if (static_cast<int>(dims.size()) != max_dim + 1)
    fail(errc::internal, "complex: dimension table size mismatch");
  for (int n = 1; n <= max_dim; ++n)
    for (int id = 0; id < count(n); ++id) {
      const auto& s = dims[n][id];
      if (static_cast<int>(s.vertices.size()) != n + 1)
        fail(errc::internal, "complex: vertex tuple has wrong arity");
      if (static_cast<int>(s.faces.size()) != n + 1)
        fail(errc::internal, "complex: face table has wrong arity");
      for (int i = 0; i <= n; ++i) {
        const auto& f = s.faces[i];
        if (f.dim() != n - 1) fail(errc::internal, "complex: face has wrong dimension");
        std::vector<int> expect;
        for (int t = 0; t <= n; ++t)
          if (t != i) expect.push_back(s.vertices[t]);
        if (vertices_of(f) != expect) fail(errc::internal, "complex: face vertices mismatch");
      }
      // simplicial identities d_i d_j = d_{j-1} d_i for i < j (need dim >= 2)
      SimplexRef top = nondeg_ref(n, id);
      for (int j = 1; j <= n && n >= 2; ++j)
        for (int i = 0; i < j; ++i)
          if (face(face(top, j), i) != face(face(top, i), j - 1))
            fail(errc::internal, cat("complex: simplicial identity fails at dim ", n, " id ", id,
                                     " (i=", i, ", j=", j, ")"));
    }
}

std::uint64_t TruncSSet::digest() const {
  fnv1a h;
  h.eat(static_cast<std::uint64_t>(max_dim));
  for (int n = 0; n <= max_dim; ++n) {
    h.eat(static_cast<std::uint64_t>(count(n)));
    for (const auto& s : dims[n]) {
      for (int v : s.vertices) h.eat(static_cast<std::uint64_t>(v));
      for (const auto& f : s.faces) {
        h.eat(static_cast<std::uint64_t>(f.core_dim));
        h.eat(static_cast<std::uint64_t>(f.core_id));
        for (int t : f.surj) h.eat(static_cast<std::uint64_t>(t));
      }
    }
  }
  return h.h;
}

namespace {

// chain = (first object, list of non-identity morphisms)
struct Chain {
  int obj0;
  std::vector<int> mors;
  std::vector<int> vertices(const FinCat& c) const {
    std::vector<int> vs{obj0};
    for (int m : mors) vs.push_back(c.mors[m].dst);
    return vs;
  }
};

SimplexRef normalize_chain(const FinCat& c, const Chain& ch,
                           const std::map<std::vector<int>, int>& index) {
  // strip identity entries; the surjection collapses exactly at those positions
  int n = static_cast<int>(ch.mors.size());
  Chain core{ch.obj0, {}};
  Surj surj(n + 1);
  int level = 0;
  surj[0] = 0;
  for (int t = 0; t < n; ++t) {
    if (!c.is_identity(ch.mors[t])) {
      core.mors.push_back(ch.mors[t]);
      ++level;
    }
    surj[t + 1] = level;
  }
  std::vector<int> key{core.obj0};
  for (int m : core.mors) key.push_back(m);
  auto it = index.find(key);
  if (it == index.end()) fail(errc::internal, "nerve: face chain not indexed");
  return {static_cast<int>(core.mors.size()), it->second, std::move(surj)};
}

}  // namespace

TruncSSet nerve_of(const FinCat& c, int dim_cap, int hard_cap) {
  if (dim_cap < 0 || dim_cap > hard_cap)
    fail(errc::cap, cat("nerve: dimension ", dim_cap, " outside [0,", hard_cap, "]"));
  TruncSSet x;
  x.max_dim = dim_cap;
  x.dims.resize(dim_cap + 1);
  x.vertex_labels = c.objects;

  std::vector<std::vector<Chain>> chains(dim_cap + 1);
  for (int o = 0; o < c.num_objects(); ++o) chains[0].push_back({o, {}});
  for (int n = 1; n <= dim_cap; ++n)
    for (const auto& ch : chains[n - 1]) {
      int last = ch.vertices(c).back();
      for (int m = 0; m < c.num_mors(); ++m) {
        if (c.mors[m].src != last || c.is_identity(m)) continue;
        Chain ext = ch;
        ext.mors.push_back(m);
        chains[n].push_back(std::move(ext));
      }
    }
  for (int n = 0; n <= dim_cap; ++n)
    std::sort(chains[n].begin(), chains[n].end(), [&](const Chain& a, const Chain& b) {
      auto va = a.vertices(c), vb = b.vertices(c);
      if (va != vb) return va < vb;
      return a.mors < b.mors;
    });
  // truncation is lossless iff no identity-free chain extends past the cap
  x.lossless = chains[dim_cap].empty() || [&] {
    for (const auto& ch : chains[dim_cap]) {
      int last = ch.vertices(c).back();
      for (int m = 0; m < c.num_mors(); ++m)
        if (c.mors[m].src == last && !c.is_identity(m)) return false;
    }
    return true;
  }();

  std::map<std::vector<int>, int> index;
  for (int n = 0; n <= dim_cap; ++n)
    for (int id = 0; id < static_cast<int>(chains[n].size()); ++id) {
      const Chain& ch = chains[n][id];
      std::vector<int> key{ch.obj0};
      for (int m : ch.mors) key.push_back(m);
      index[key] = id;
      TruncSSet::Simplex s;
      s.vertices = ch.vertices(c);
      x.dims[n].push_back(std::move(s));
    }
  for (int n = 1; n <= dim_cap; ++n)
    for (int id = 0; id < static_cast<int>(chains[n].size()); ++id) {
      const Chain& ch = chains[n][id];
      auto& faces = x.dims[n][id].faces;
      faces.resize(n + 1);
      for (int i = 0; i <= n; ++i) {
        Chain f{ch.obj0, {}};
        if (i == 0) {
          f.obj0 = c.mors[ch.mors[0]].dst;
          f.mors.assign(ch.mors.begin() + 1, ch.mors.end());
        } else if (i == n) {
          f.mors.assign(ch.mors.begin(), ch.mors.end() - 1);
        } else {
          f.mors.assign(ch.mors.begin(), ch.mors.end());
          int comp = c.compose(f.mors[i], f.mors[i - 1]);
          f.mors.erase(f.mors.begin() + i);
          f.mors[i - 1] = comp;
        }
        faces[i] = normalize_chain(c, f, index);
      }
    }
  x.validate();
  return x;
}

TruncSSet nerve_of(const FinPoset& p, int dim_cap, int hard_cap) {
  return nerve_of(category_from_poset(p), dim_cap, hard_cap);
}

TruncSSet standard_complex(StdKind kind, int n, int k) {
  if (n < 0 || n > kDimCap) fail(errc::cap, cat("standard complex: n=", n, " outside [0,", kDimCap, "]"));
  TruncSSet full = nerve_of(chain_poset(n), n);
  if (kind == StdKind::simplex) return full;
  std::vector<std::vector<int>> keep(n + 1);
  for (int d = 0; d <= n; ++d)
    for (int id = 0; id < full.count(d); ++id) keep[d].push_back(id);
  keep[n].clear();  // drop the interior
  if (kind == StdKind::horn) {
    if (k < 0 || k > n) fail(errc::validation, cat("horn: k=", k, " outside [0,", n, "]"));
    // drop the face opposite vertex k: the (n-1)-simplex on vertices != k
    std::vector<int> vs;
    for (int t = 0; t <= n; ++t)
      if (t != k) vs.push_back(t);
    auto id = full.by_vertices(n - 1, vs);
    if (!id) fail(errc::internal, "horn: face not found");
    keep[n - 1].erase(std::remove(keep[n - 1].begin(), keep[n - 1].end(), *id), keep[n - 1].end());
  }
  return subcomplex(full, keep);
}

TruncSSet subcomplex(const TruncSSet& x, const std::vector<std::vector<int>>& keep,
                     std::vector<std::vector<int>>* id_maps) {
  TruncSSet s;
  s.max_dim = x.max_dim;
  s.lossless = x.lossless;
  s.dims.resize(x.max_dim + 1);
  std::vector<std::vector<int>> remap(x.max_dim + 1);
  for (int n = 0; n <= x.max_dim; ++n) {
    remap[n].assign(x.count(n), -1);
    if (n >= static_cast<int>(keep.size())) continue;
    for (int id : keep[n]) {
      remap[n][id] = static_cast<int>(s.dims[n].size());
      s.dims[n].push_back(x.dims[n][id]);
    }
  }
  for (int n = 0; n <= x.max_dim; ++n)
    for (auto& sim : s.dims[n]) {
      for (auto& v : sim.vertices) {
        if (remap[0][v] < 0) fail(errc::validation, "subcomplex: not face-closed (missing vertex)");
        v = remap[0][v];
      }
      for (auto& f : sim.faces) {
        if (remap[f.core_dim][f.core_id] < 0)
          fail(errc::validation, "subcomplex: not face-closed");
        f.core_id = remap[f.core_dim][f.core_id];
      }
    }
  s.vertex_labels.clear();
  if (!x.vertex_labels.empty())
    for (int id = 0; id < x.count(0); ++id)
      if (remap[0][id] >= 0) s.vertex_labels.push_back(x.vertex_labels[id]);
  if (id_maps) *id_maps = std::move(remap);
  s.validate();
  return s;
}

namespace {
// all monotone surjections [n] ->> [p] as collapse sets of size n-p
void collapse_sets(int n, int p, std::vector<std::vector<int>>& out) {
  std::vector<int> pick;
  // choose positions 0..n-1 where s(t) = s(t+1)
  std::function<void(int, int)> rec = [&](int start, int need) {
    if (need == 0) {
      out.push_back(pick);
      return;
    }
    for (int t = start; t <= n - need; ++t) {
      pick.push_back(t);
      rec(t + 1, need - 1);
      pick.pop_back();
    }
  };
  rec(0, n - p);
}

Surj surj_from_collapses(int n, const std::vector<int>& coll) {
  Surj s(n + 1);
  s[0] = 0;
  std::vector<char> is_coll(n, 0);
  for (int t : coll) is_coll[t] = 1;
  for (int t = 0; t < n; ++t) s[t + 1] = s[t] + (is_coll[t] ? 0 : 1);
  return s;
}

std::vector<int> pair_key(const SimplexRef& a, const SimplexRef& b) {
  std::vector<int> key{a.core_dim, a.core_id};
  key.insert(key.end(), a.surj.begin(), a.surj.end());
  key.push_back(-1);
  key.push_back(b.core_dim);
  key.push_back(b.core_id);
  key.insert(key.end(), b.surj.begin(), b.surj.end());
  return key;
}
}  // namespace

TruncSSet product(const TruncSSet& x, const TruncSSet& y, int out_dim) {
  TruncSSet pr;
  if (out_dim < 0) out_dim = std::min(x.max_dim, y.max_dim);
  if (out_dim > kDimCap) fail(errc::cap, cat("product: dimension ", out_dim, " exceeds ", kDimCap));
  if ((out_dim > x.max_dim && !x.lossless) || (out_dim > y.max_dim && !y.lossless))
    fail(errc::cap, "product: factor is truncated lossily below the requested dimension");
  pr.max_dim = out_dim;
  pr.lossless = x.lossless && y.lossless;
  pr.dims.resize(pr.max_dim + 1);
  int y0 = y.count(0);
  for (int i = 0; i < x.count(0); ++i)
    for (int j = 0; j < y0; ++j) {
      std::string lx = x.vertex_labels.empty() ? cat(i) : x.vertex_labels[i];
      std::string ly = y.vertex_labels.empty() ? cat(j) : y.vertex_labels[j];
      pr.vertex_labels.push_back(cat("(", lx, ",", ly, ")"));
    }

  std::map<std::vector<int>, int> index;
  std::vector<std::vector<std::pair<SimplexRef, SimplexRef>>> parts(pr.max_dim + 1);
  for (int n = 0; n <= pr.max_dim; ++n) {
    std::vector<std::pair<SimplexRef, SimplexRef>> items;
    for (int p = 0; p <= n; ++p) {
      if (x.count(p) == 0) continue;
      std::vector<std::vector<int>> acs;
      collapse_sets(n, p, acs);
      for (int q = 0; q <= n; ++q) {
        if (y.count(q) == 0) continue;
        if ((n - p) + (n - q) > n) continue;  // collapse sets cannot be disjoint
        std::vector<std::vector<int>> bcs;
        collapse_sets(n, q, bcs);
        for (const auto& A : acs)
          for (const auto& B : bcs) {
            bool disjoint = true;
            for (int a : A)
              for (int b : B)
                if (a == b) disjoint = false;
            if (!disjoint) continue;
            for (int xi = 0; xi < x.count(p); ++xi)
              for (int yi = 0; yi < y.count(q); ++yi)
                items.emplace_back(SimplexRef{p, xi, surj_from_collapses(n, A)},
                                   SimplexRef{q, yi, surj_from_collapses(n, B)});
          }
      }
    }
    // canonical order: lexicographic on product vertex tuples, then on the refs
    std::sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
      auto va = x.vertices_of(a.first), vb = x.vertices_of(b.first);
      auto wa = y.vertices_of(a.second), wb = y.vertices_of(b.second);
      std::vector<int> ka(va.size()), kb(vb.size());
      for (std::size_t t = 0; t < va.size(); ++t) ka[t] = va[t] * y0 + wa[t];
      for (std::size_t t = 0; t < vb.size(); ++t) kb[t] = vb[t] * y0 + wb[t];
      if (ka != kb) return ka < kb;
      return pair_key(a.first, a.second) < pair_key(b.first, b.second);
    });
    parts[n] = items;
    for (int id = 0; id < static_cast<int>(items.size()); ++id) {
      index[pair_key(items[id].first, items[id].second)] = id;
      TruncSSet::Simplex s;
      auto va = x.vertices_of(items[id].first);
      auto wa = y.vertices_of(items[id].second);
      for (std::size_t t = 0; t < va.size(); ++t) s.vertices.push_back(va[t] * y0 + wa[t]);
      pr.dims[n].push_back(std::move(s));
    }
  }
  // faces: componentwise face, then strip common collapses and look the core up
  for (int n = 1; n <= pr.max_dim; ++n)
    for (int id = 0; id < pr.count(n); ++id) {
      auto& faces = pr.dims[n][id].faces;
      faces.resize(n + 1);
      for (int i = 0; i <= n; ++i) {
        SimplexRef rx = x.face(parts[n][id].first, i);
        SimplexRef ry = y.face(parts[n][id].second, i);
        int m = rx.dim();
        std::vector<int> common;
        for (int t = 0; t < m; ++t)
          if (rx.surj[t] == rx.surj[t + 1] && ry.surj[t] == ry.surj[t + 1]) common.push_back(t);
        Surj upsilon = surj_from_collapses(m, common);
        int m2 = m - static_cast<int>(common.size());
        // sections: sample each component on a preimage of upsilon
        Surj sx(m2 + 1), sy(m2 + 1);
        for (int t = 0; t <= m; ++t) {
          sx[upsilon[t]] = rx.surj[t];
          sy[upsilon[t]] = ry.surj[t];
        }
        auto it = index.find(pair_key(SimplexRef{rx.core_dim, rx.core_id, sx},
                                      SimplexRef{ry.core_dim, ry.core_id, sy}));
        if (it == index.end()) fail(errc::internal, "product: face core not indexed");
        faces[i] = {m2, it->second, std::move(upsilon)};
      }
    }
  pr.validate();
  return pr;
}

SimplexRef SMap::apply(const SimplexRef& r) const {
  const SimplexRef& img = image[r.core_dim][r.core_id];
  return {img.core_dim, img.core_id, compose_surj(img.surj, r.surj)};
}

SMapCheck check_simplicial_map(const SMap& f) {
  SMapCheck res;
  for (int n = 0; n <= f.src->max_dim; ++n)
    for (int id = 0; id < f.src->count(n); ++id) {
      if (f.image[n][id].dim() != n) {
        res = {false, n, id, -1};
        return res;
      }
      if (n == 0) continue;
      for (int i = 0; i <= n; ++i) {
        SimplexRef lhs = f.apply(f.src->face(nondeg_ref(n, id), i));
        SimplexRef rhs = f.dst->face(f.apply(nondeg_ref(n, id)), i);
        if (lhs != rhs) {
          res = {false, n, id, i};
          return res;
        }
      }
    }
  return res;
}

namespace {
std::vector<SimplexRef> all_refs_of_dim(const TruncSSet& x, int n) {
  std::vector<SimplexRef> refs;
  for (int p = 0; p <= n; ++p) {
    if (x.count(p) == 0) continue;
    std::vector<std::vector<int>> cs;
    collapse_sets(n, p, cs);
    for (const auto& A : cs)
      for (int id = 0; id < x.count(p); ++id) refs.push_back({p, id, surj_from_collapses(n, A)});
  }
  return refs;
}

std::vector<int> ref_key(const SimplexRef& r) {
  std::vector<int> k{r.core_dim, r.core_id};
  k.insert(k.end(), r.surj.begin(), r.surj.end());
  return k;
}
}  // namespace

HornReport inner_horn_report(const TruncSSet& x, int max_dim, long long horn_cap) {
  HornReport rep;
  max_dim = std::min(max_dim, x.max_dim);
  long long budget = horn_cap;
  for (int m = 2; m <= max_dim; ++m) {
    auto cells = all_refs_of_dim(x, m - 1);
    auto fillers_pool = all_refs_of_dim(x, m);
    for (int k = 1; k < m; ++k) {
      // fillers indexed by their boundary tuple without the k-th face
      std::map<std::vector<int>, long long> filler_count;
      for (const auto& rho : fillers_pool) {
        std::vector<int> key;
        for (int i = 0; i <= m; ++i) {
          if (i == k) continue;
          auto fk = ref_key(x.face(rho, i));
          key.insert(key.end(), fk.begin(), fk.end());
          key.push_back(-1);
        }
        ++filler_count[key];
      }
      // enumerate horn maps: tuples (sigma_i)_{i != k} with d_i sigma_j = d_{j-1} sigma_i
      std::vector<int> slots;
      for (int i = 0; i <= m; ++i)
        if (i != k) slots.push_back(i);
      std::vector<SimplexRef> chosen(m + 1);
      std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
        if (budget-- <= 0) {
          rep.cap_exceeded = true;
          return false;
        }
        if (pos == slots.size()) {
          ++rep.horns_checked;
          std::vector<int> key;
          for (int i = 0; i <= m; ++i) {
            if (i == k) continue;
            auto fk = ref_key(chosen[i]);
            key.insert(key.end(), fk.begin(), fk.end());
            key.push_back(-1);
          }
          auto it = filler_count.find(key);
          long long fills = it == filler_count.end() ? 0 : it->second;
          if (fills == 0) {
            rep.inner_fibrant = false;
            rep.nerve_like = false;
            if (rep.unfillable.size() < 16) {
              HornReport::Horn h{m, k, {}, 0};
              for (int i = 0; i <= m; ++i)
                if (i != k) h.face_vertices.push_back(x.vertices_of(chosen[i]));
              rep.unfillable.push_back(std::move(h));
            }
          } else if (fills > 1) {
            rep.nerve_like = false;
            if (rep.multi_filler.size() < 16) {
              HornReport::Horn h{m, k, {}, fills};
              for (int i = 0; i <= m; ++i)
                if (i != k) h.face_vertices.push_back(x.vertices_of(chosen[i]));
              rep.multi_filler.push_back(std::move(h));
            }
          }
          return true;
        }
        int i = slots[pos];
        for (const auto& cand : cells) {
          bool ok = true;
          for (std::size_t prev = 0; prev < pos && ok; ++prev) {
            int j = slots[prev];  // j < i
            if (x.face(cand, j) != x.face(chosen[j], i - 1)) ok = false;
          }
          if (!ok) continue;
          chosen[i] = cand;
          if (!rec(pos + 1) && rep.cap_exceeded) return false;
        }
        return true;
      };
      rec(0);
      if (rep.cap_exceeded) return rep;
    }
  }
  return rep;
}

std::string complex_to_json(const TruncSSet& x) {
  nlohmann::json doc;
  doc["max_dim"] = x.max_dim;
  doc["lossless"] = x.lossless;
  if (!x.vertex_labels.empty()) doc["vertex_labels"] = x.vertex_labels;
  nlohmann::json dims = nlohmann::json::array();
  for (int n = 0; n <= x.max_dim; ++n) {
    nlohmann::json layer = nlohmann::json::array();
    for (const auto& s : x.dims[n]) {
      nlohmann::json sj;
      sj["vertices"] = s.vertices;
      nlohmann::json faces = nlohmann::json::array();
      for (const auto& f : s.faces)
        faces.push_back({{"core_dim", f.core_dim}, {"core", f.core_id}, {"surj", f.surj}});
      sj["faces"] = faces;
      layer.push_back(sj);
    }
    dims.push_back(layer);
  }
  doc["dimensions"] = dims;
  return doc.dump(2) + "\n";
}

TruncSSet complex_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::validation, cat("complex: invalid JSON: ", e.what()));
  }
  TruncSSet x;
  x.max_dim = doc.at("max_dim").get<int>();
  if (x.max_dim < 0 || x.max_dim > kDimCap)
    fail(errc::cap, cat("complex: max_dim ", x.max_dim, " outside [0,", kDimCap, "]"));
  x.lossless = doc.value("lossless", true);
  if (doc.contains("vertex_labels"))
    x.vertex_labels = doc["vertex_labels"].get<std::vector<std::string>>();
  x.dims.resize(x.max_dim + 1);
  const auto& dims = doc.at("dimensions");
  if (static_cast<int>(dims.size()) != x.max_dim + 1)
    fail(errc::validation, "complex: dimensions array size mismatch");
  for (int n = 0; n <= x.max_dim; ++n)
    for (const auto& sj : dims[n]) {
      TruncSSet::Simplex s;
      s.vertices = sj.at("vertices").get<std::vector<int>>();
      for (const auto& fj : sj.at("faces"))
        s.faces.push_back(SimplexRef{fj.at("core_dim").get<int>(), fj.at("core").get<int>(),
                                     fj.at("surj").get<Surj>()});
      x.dims[n].push_back(std::move(s));
    }
  x.validate();
  return x;
}

}  // namespace nervelab
