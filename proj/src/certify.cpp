#include "nervelab/certify.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <set>

namespace nervelab {

namespace {

// Certificates only make sense on complexes where every face of a nondegenerate
// simplex is nondegenerate and vertex tuples are unique (poset nerves and friends).
void require_plain(const TruncSSet& x, const char* who) {
  for (int n = 1; n <= x.max_dim; ++n)
    for (int id = 0; id < x.count(n); ++id)
      for (const auto& f : x.at(n, id).faces)
        if (!f.nondegenerate())
          fail(errc::validation, cat(who, ": ambient has degenerate faces"));
  for (int n = 0; n <= x.max_dim; ++n) {
    std::vector<std::vector<int>> seen;
    for (int id = 0; id < x.count(n); ++id) seen.push_back(x.at(n, id).vertices);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      fail(errc::validation, cat(who, ": ambient is not vertex-determined"));
  }
}

bool face_closed(const TruncSSet& x, const std::vector<std::vector<char>>& present) {
  for (int n = 1; n <= x.max_dim; ++n)
    for (int id = 0; id < x.count(n); ++id) {
      if (!present[n][id]) continue;
      for (const auto& f : x.at(n, id).faces)
        if (!present[f.core_dim][f.core_id]) return false;
    }
  return true;
}

std::vector<std::vector<char>> mask_from_ids(const TruncSSet& x,
                                             const std::vector<std::vector<int>>& ids) {
  std::vector<std::vector<char>> present(x.max_dim + 1);
  for (int n = 0; n <= x.max_dim; ++n) present[n].assign(x.count(n), 0);
  for (int n = 0; n < static_cast<int>(ids.size()) && n <= x.max_dim; ++n)
    for (int id : ids[n]) present[n][id] = 1;
  return present;
}

}  // namespace

VerifyResult verify_certificate(const TruncSSet& ambient, const Certificate& cert) {
  VerifyResult res;
  require_plain(ambient, "verify_certificate");
  if (cert.ambient_hash != ambient.digest()) {
    res.reason = "ambient hash mismatch";
    return res;
  }
  std::vector<std::vector<char>> present(ambient.max_dim + 1);
  for (int n = 0; n <= ambient.max_dim; ++n) present[n].assign(ambient.count(n), 0);
  for (auto [n, id] : cert.start) {
    if (n < 0 || n > ambient.max_dim || id < 0 || id >= ambient.count(n)) {
      res.reason = "start simplex out of range";
      return res;
    }
    present[n][id] = 1;
  }
  if (!face_closed(ambient, present)) {
    res.reason = "start subcomplex is not face-closed";
    return res;
  }
  for (int mi = 0; mi < static_cast<int>(cert.moves.size()); ++mi) {
    const auto& mv = cert.moves[mi];
    res.failed_move = mi;
    if (mv.k <= 0 || mv.k >= mv.m) {
      res.reason = cat("move ", mi, ": horn index ", mv.k, " is not inner for m=", mv.m);
      return res;
    }
    auto sid = ambient.by_vertices(mv.m, mv.vertices);
    if (!sid) {
      res.reason = cat("move ", mi, ": no such simplex");
      return res;
    }
    if (present[mv.m][*sid]) {
      res.reason = cat("move ", mi, ": simplex already present");
      return res;
    }
    const auto& faces = ambient.at(mv.m, *sid).faces;
    for (int i = 0; i <= mv.m; ++i) {
      bool have = present[faces[i].core_dim][faces[i].core_id] != 0;
      if (i == mv.k && have) {
        res.reason = cat("move ", mi, ": k-th face already present");
        return res;
      }
      if (i != mv.k && !have) {
        res.reason = cat("move ", mi, ": missing horn face ", i);
        return res;
      }
    }
    present[mv.m][*sid] = 1;
    present[faces[mv.k].core_dim][faces[mv.k].core_id] = 1;
  }
  for (int n = 0; n <= ambient.max_dim; ++n)
    for (int id = 0; id < ambient.count(n); ++id)
      if (!present[n][id]) {
        res.failed_move = static_cast<int>(cert.moves.size());
        res.reason = cat("final complex is incomplete at dim ", n);
        return res;
      }
  res.ok = true;
  res.failed_move = -1;
  res.reason.clear();
  return res;
}

namespace {

struct Searcher {
  const TruncSSet& amb;
  std::vector<std::vector<char>> present;
  std::vector<std::vector<char>> target;
  // cofaces[(n,id)] = list of (parent id in dim n+1, face index)
  std::vector<std::vector<std::vector<std::pair<int, int>>>> cofaces;
  std::vector<std::vector<std::uint16_t>> absent_mask;  // faces of each simplex still absent
  std::set<std::pair<int, int>> candidates;             // (dim, id): legal move tops
  long long attempts = 0;
  const SearchBudget& budget;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Searcher(const TruncSSet& a, const SearchBudget& b) : amb(a), budget(b) {
    cofaces.resize(amb.max_dim + 1);
    for (int n = 0; n <= amb.max_dim; ++n) cofaces[n].resize(amb.count(n));
    for (int n = 1; n <= amb.max_dim; ++n)
      for (int id = 0; id < amb.count(n); ++id) {
        const auto& fs = amb.at(n, id).faces;
        for (int i = 0; i <= n; ++i) cofaces[fs[i].core_dim][fs[i].core_id].push_back({id, i});
      }
  }

  bool over_budget() {
    if (attempts > budget.max_attempts) return true;
    if ((attempts & 1023) == 0) {
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (secs > budget.max_seconds) return true;
    }
    return false;
  }

  void reset_segment(std::vector<std::vector<char>> init, std::vector<std::vector<char>> tgt) {
    present = std::move(init);
    target = std::move(tgt);
    absent_mask.assign(amb.max_dim + 1, {});
    candidates.clear();
    for (int n = 0; n <= amb.max_dim; ++n) absent_mask[n].assign(amb.count(n), 0);
    for (int n = 1; n <= amb.max_dim; ++n)
      for (int id = 0; id < amb.count(n); ++id) {
        if (!target[n][id] || present[n][id]) continue;
        const auto& fs = amb.at(n, id).faces;
        std::uint16_t mask = 0;
        for (int i = 0; i <= n; ++i)
          if (!present[fs[i].core_dim][fs[i].core_id]) mask |= std::uint16_t(1) << i;
        absent_mask[n][id] = mask;
        maybe_candidate(n, id);
      }
  }

  bool is_candidate(int n, int id) const {
    if (n < 2 || present[n][id] || !target[n][id]) return false;
    std::uint16_t mask = absent_mask[n][id];
    if (mask == 0 || (mask & (mask - 1))) return false;  // exactly one absent face
    int k = __builtin_ctz(mask);
    return k > 0 && k < n;
  }

  void maybe_candidate(int n, int id) {
    if (is_candidate(n, id))
      candidates.insert({n, id});
    else
      candidates.erase({n, id});
  }

  void set_present(int n, int id, bool on) {
    present[n][id] = on ? 1 : 0;
    for (auto [pid, i] : cofaces[n][id]) {
      if (on)
        absent_mask[n + 1][pid] &= ~(std::uint16_t(1) << i);
      else
        absent_mask[n + 1][pid] |= std::uint16_t(1) << i;
      maybe_candidate(n + 1, pid);
    }
    maybe_candidate(n, id);
  }

  struct Applied {
    int n, id;        // move top
    int fn, fid, k;   // the added face
  };

  Applied apply(int n, int id) {
    std::uint16_t mask = absent_mask[n][id];
    int k = __builtin_ctz(mask);
    const auto& f = amb.at(n, id).faces[k];
    set_present(f.core_dim, f.core_id, true);
    set_present(n, id, true);
    return {n, id, f.core_dim, f.core_id, k};
  }

  void undo(const Applied& a) {
    set_present(a.n, a.id, false);
    set_present(a.fn, a.fid, false);
  }

  long long missing() const {
    long long miss = 0;
    for (int n = 0; n <= amb.max_dim; ++n)
      for (int id = 0; id < amb.count(n); ++id)
        if (target[n][id] && !present[n][id]) ++miss;
    return miss;
  }

  // deterministic DFS: first candidate in (dim, id) order, resume-after-key on backtrack
  std::optional<std::vector<Applied>> run(SearchFailure& fail_info) {
    long long miss = missing();
    if (miss % 2 != 0) return std::nullopt;  // conservation: each move adds 2
    std::vector<Applied> stack;
    std::pair<int, int> resume{-1, -1};
    while (true) {
      if (miss == 0) return stack;
      auto it = candidates.upper_bound(resume);
      if (it == candidates.end()) {
        if (stack.empty()) return std::nullopt;
        Applied a = stack.back();
        stack.pop_back();
        undo(a);
        miss += 2;
        resume = {a.n, a.id};
        continue;
      }
      ++attempts;
      if (over_budget()) {
        fail_info.budget_exhausted = true;
        return std::nullopt;
      }
      auto [n, id] = *it;
      stack.push_back(apply(n, id));
      miss -= 2;
      resume = {-1, -1};
    }
  }
};

}  // namespace

std::vector<std::vector<int>> chains_within(const TruncSSet& poset_nerve,
                                            const std::vector<char>& keep) {
  std::vector<std::vector<int>> ids(poset_nerve.max_dim + 1);
  for (int n = 0; n <= poset_nerve.max_dim; ++n)
    for (int id = 0; id < poset_nerve.count(n); ++id) {
      bool ok = true;
      for (int v : poset_nerve.at(n, id).vertices)
        if (!keep[v]) ok = false;
      if (ok) ids[n].push_back(id);
    }
  return ids;
}

SearchResult find_certificate(const TruncSSet& ambient,
                              const std::vector<std::vector<int>>& start,
                              const SearchBudget& budget) {
  require_plain(ambient, "find_certificate");
  SearchResult out;
  auto init = mask_from_ids(ambient, start);
  if (!face_closed(ambient, init))
    fail(errc::validation, "find_certificate: start subcomplex is not face-closed");
  std::vector<std::vector<char>> full(ambient.max_dim + 1);
  for (int n = 0; n <= ambient.max_dim; ++n) full[n].assign(ambient.count(n), 1);

  Searcher s(ambient, budget);
  s.reset_segment(init, full);
  auto moves = s.run(out.failure);
  out.failure.attempts = s.attempts;
  if (!moves) {
    for (int n = 0; n <= ambient.max_dim; ++n)
      for (int id = 0; id < ambient.count(n); ++id) {
        if (init[n][id]) ++out.failure.frontier_present;
        ++out.failure.frontier_target;
      }
    return out;
  }
  Certificate cert;
  cert.ambient_hash = ambient.digest();
  for (int n = 0; n < static_cast<int>(start.size()); ++n)
    for (int id : start[n]) cert.start.emplace_back(n, id);
  for (const auto& a : *moves)
    cert.moves.push_back({a.n, a.k, ambient.at(a.n, a.id).vertices, -1});
  out.certificate = std::move(cert);
  return out;
}

StagedCertificate cert_interval_cover(const FinPoset& poset,
                                      const std::vector<std::vector<char>>& parts,
                                      const SearchBudget& budget) {
  StagedCertificate out;
  int top = 0;
  {
    // longest chain bounds the nerve dimension
    std::vector<int> memo(poset.n, 1);
    for (int v : poset.linear_extension())
      for (int u = 0; u < poset.n; ++u)
        if (poset.lt(u, v)) memo[v] = std::max(memo[v], memo[u] + 1);
    for (int v = 0; v < poset.n; ++v) top = std::max(top, memo[v] - 1);
  }
  if (top > kDimCap) fail(errc::cap, cat("cert_interval_cover: nerve dimension ", top,
                                         " exceeds ", kDimCap));
  out.ambient = nerve_of(poset, top);
  const TruncSSet& amb = out.ambient;
  require_plain(amb, "cert_interval_cover");

  int stages = static_cast<int>(parts.size());
  out.stages = stages;
  // start: union of the part nerves
  std::vector<std::vector<char>> present(amb.max_dim + 1);
  for (int n = 0; n <= amb.max_dim; ++n) present[n].assign(amb.count(n), 0);
  auto add_ids = [&](const std::vector<std::vector<int>>& ids) {
    for (int n = 0; n <= amb.max_dim; ++n)
      for (int id : ids[n]) present[n][id] = 1;
  };
  for (const auto& part : parts) add_ids(chains_within(amb, part));
  out.start.assign(amb.max_dim + 1, {});
  for (int n = 0; n <= amb.max_dim; ++n)
    for (int id = 0; id < amb.count(n); ++id)
      if (present[n][id]) out.start[n].push_back(id);

  Certificate cert;
  cert.ambient_hash = amb.digest();
  for (int n = 0; n <= amb.max_dim; ++n)
    for (int id : out.start[n]) cert.start.emplace_back(n, id);

  Searcher searcher(amb, budget);
  SearchFailure fail_info;

  // stage j: grow N(P_0 u ... u P_{j-1}) u N(P_j) u ... to N(P_0 u ... u P_j) u ...
  std::vector<char> acc = parts[0];  // union of parts 0..j-1 as element mask
  for (int j = 1; j < stages; ++j) {
    // target after this stage
    std::vector<char> acc_next(poset.n, 0);
    for (int v = 0; v < poset.n; ++v) acc_next[v] = acc[v] || parts[j][v];
    auto stage_target_ids = [&](const std::vector<char>& un) {
      auto ids = chains_within(amb, un);
      auto tgt = mask_from_ids(amb, ids);
      for (int jj = j + 1; jj < stages; ++jj) {
        auto more = mask_from_ids(amb, chains_within(amb, parts[jj]));
        for (int n = 0; n <= amb.max_dim; ++n)
          for (int id = 0; id < amb.count(n); ++id)
            if (more[n][id]) tgt[n][id] = 1;
      }
      // everything already present stays in the target
      for (int n = 0; n <= amb.max_dim; ++n)
        for (int id = 0; id < amb.count(n); ++id)
          if (present[n][id]) tgt[n][id] = 1;
      return tgt;
    };
    auto stage_target = stage_target_ids(acc_next);

    // substages: peel minimal elements of acc - (acc n P_j), fill in reverse order
    std::vector<int> peel;
    {
      std::vector<char> todo(poset.n, 0);
      for (int v = 0; v < poset.n; ++v) todo[v] = acc[v] && !parts[j][v];
      bool more = true;
      while (more) {
        more = false;
        for (int v = 0; v < poset.n; ++v) {
          if (!todo[v]) continue;
          bool minimal = true;
          for (int u = 0; u < poset.n; ++u)
            if (todo[u] && poset.lt(u, v)) minimal = false;
          if (minimal) {
            peel.push_back(v);
            todo[v] = 0;
            more = true;
            break;
          }
        }
      }
    }
    // substage targets: chains inside S^{(l)} through the peeled element q_l
    std::vector<char> s_mask(poset.n, 0);
    for (int v = 0; v < poset.n; ++v) s_mask[v] = acc_next[v];
    // S^{(l)} excludes q_1..q_{l-1}; fill l = r..1
    for (int l = static_cast<int>(peel.size()); l >= 1; --l) {
      std::vector<char> sl(poset.n, 0);
      for (int v = 0; v < poset.n; ++v) sl[v] = s_mask[v];
      for (int t = 0; t < l - 1; ++t) sl[peel[t]] = 0;
      int q = peel[l - 1];
      // substage target = present + chains in S^(l) through q (within the stage target)
      auto sub_target = present;
      for (int n = 0; n <= amb.max_dim; ++n)
        for (int id = 0; id < amb.count(n); ++id) {
          if (!stage_target[n][id] || sub_target[n][id]) continue;
          bool in_sl = true, has_q = false;
          for (int v : amb.at(n, id).vertices) {
            if (!sl[v]) in_sl = false;
            if (v == q) has_q = true;
          }
          if (in_sl && has_q) sub_target[n][id] = 1;
        }
      searcher.reset_segment(present, sub_target);
      auto moves = searcher.run(fail_info);
      if (!moves) {
        // substage failed: retry the whole remaining stage in one segment
        searcher.reset_segment(present, stage_target);
        moves = searcher.run(fail_info);
        if (!moves)
          fail(errc::cap, cat("cert_interval_cover: search failed in stage ", j,
                              fail_info.budget_exhausted ? " (budget exhausted)" : ""));
        for (const auto& a : *moves)
          cert.moves.push_back({a.n, a.k, amb.at(a.n, a.id).vertices, j});
        present = searcher.present;
        break;
      }
      for (const auto& a : *moves)
        cert.moves.push_back({a.n, a.k, amb.at(a.n, a.id).vertices, j});
      present = searcher.present;
    }
    // stage must now be complete
    for (int n = 0; n <= amb.max_dim; ++n)
      for (int id = 0; id < amb.count(n); ++id)
        if (stage_target[n][id] && !present[n][id])
          fail(errc::internal, cat("cert_interval_cover: stage ", j, " left holes"));
    acc = acc_next;
  }
  out.cert = std::move(cert);
  return out;
}

StagedCertificate cert_box_in_ccpt(int n, const SearchBudget& budget, int cap) {
  if (n < 0 || n > cap) fail(errc::cap, cat("cert_box_in_ccpt: n=", n, " outside [0,", cap, "]"));
  FinPoset p = rcpt_poset(n);
  std::vector<std::vector<char>> parts;
  for (int k = 0; k <= n; ++k) {
    std::vector<char> part(p.n, 0);
    for (int i = 0; i <= k; ++i)
      for (int j = k; j <= n; ++j) part[rcpt_index(n, i, j)] = 1;
    parts.push_back(std::move(part));
  }
  return cert_interval_cover(p, parts, budget);
}

StagedCertificate cert_boxplus_cover(int n, const SearchBudget& budget, int cap) {
  if (n < 0 || n > cap)
    fail(errc::cap, cat("cert_boxplus_cover: n=", n, " outside [0,", cap, "]"));
  CrtLattice c = crt(n);
  const FinPoset& order = c.u.lat.order;
  std::vector<std::vector<char>> parts;
  for (int p = 0; p <= n; ++p) {
    std::vector<char> part(order.n, 0);
    for (int x : c.interval(p, n)) part[x] = 1;
    parts.push_back(std::move(part));
  }
  return cert_interval_cover(order, parts, budget);
}

std::string certificate_to_json(const Certificate& c) {
  nlohmann::json doc;
  doc["ambient_hash"] = hex64(c.ambient_hash);
  nlohmann::json start = nlohmann::json::array();
  for (auto [n, id] : c.start) start.push_back({n, id});
  doc["start"] = start;
  nlohmann::json moves = nlohmann::json::array();
  for (const auto& mv : c.moves) {
    nlohmann::json m;
    m["m"] = mv.m;
    m["k"] = mv.k;
    m["vertices"] = mv.vertices;
    if (mv.stage >= 0) m["stage"] = mv.stage;
    moves.push_back(m);
  }
  doc["moves"] = moves;
  return doc.dump(2) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::validation, cat("certificate: invalid JSON: ", e.what()));
  }
  Certificate c;
  std::string hash = doc.at("ambient_hash").get<std::string>();
  c.ambient_hash = std::stoull(hash, nullptr, 16);
  for (const auto& s : doc.at("start")) c.start.emplace_back(s[0].get<int>(), s[1].get<int>());
  for (const auto& m : doc.at("moves")) {
    Certificate::Move mv;
    mv.m = m.at("m").get<int>();
    mv.k = m.at("k").get<int>();
    mv.vertices = m.at("vertices").get<std::vector<int>>();
    mv.stage = m.value("stage", -1);
    c.moves.push_back(std::move(mv));
  }
  return c;
}

}  // namespace nervelab
