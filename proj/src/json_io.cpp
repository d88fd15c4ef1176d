#include "nervelab/json_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nervelab {

using nlohmann::json;

int CategoryDoc::mor_by_name(const std::string& name) const {
  for (int m = 0; m < cat.num_mors(); ++m)
    if (cat.mors[m].name == name) return m;
  fail(errc::validation, ::nervelab::cat("category: unknown morphism '", name, "'"));
}

const EdgeClass& CategoryDoc::named_class(const std::string& name) const {
  auto it = classes.find(name);
  if (it == classes.end())
    fail(errc::validation, ::nervelab::cat("category: unknown class '", name, "'"));
  return it->second;
}

CategoryDoc parse_category(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(errc::validation, cat("category: invalid JSON: ", e.what()));
  }
  CategoryDoc out;
  FinCat& c = out.cat;
  if (!doc.contains("objects") || !doc["objects"].is_array())
    fail(errc::validation, "category: missing 'objects'");
  std::map<std::string, int> obj_idx;
  for (const auto& o : doc["objects"]) {
    std::string name = o.get<std::string>();
    if (obj_idx.count(name)) fail(errc::validation, cat("category: duplicate object '", name, "'"));
    obj_idx[name] = c.num_objects();
    c.objects.push_back(name);
  }
  std::map<std::string, int> mor_idx;
  auto add_mor = [&](const std::string& name, int src, int dst) {
    if (mor_idx.count(name)) fail(errc::validation, cat("category: duplicate morphism '", name, "'"));
    mor_idx[name] = c.num_mors();
    c.mors.push_back({name, src, dst});
    return mor_idx[name];
  };
  if (doc.contains("morphisms"))
    for (const auto& m : doc["morphisms"]) {
      std::string id = m.at("id").get<std::string>();
      std::string src = m.at("src").get<std::string>(), dst = m.at("dst").get<std::string>();
      if (!obj_idx.count(src) || !obj_idx.count(dst))
        fail(errc::validation, cat("category: dangling src/dst in morphism '", id, "'"));
      add_mor(id, obj_idx[src], obj_idx[dst]);
    }
  // identities: declared or auto-added
  c.identity.assign(c.num_objects(), -1);
  if (doc.contains("identities"))
    for (auto it = doc["identities"].begin(); it != doc["identities"].end(); ++it) {
      if (!obj_idx.count(it.key()))
        fail(errc::validation, cat("category: identity for unknown object '", it.key(), "'"));
      if (!mor_idx.count(it.value().get<std::string>()))
        fail(errc::validation,
             cat("category: unknown identity morphism '", it.value().get<std::string>(), "'"));
      c.identity[obj_idx[it.key()]] = mor_idx[it.value().get<std::string>()];
    }
  for (int x = 0; x < c.num_objects(); ++x)
    if (c.identity[x] < 0) c.identity[x] = add_mor(cat("id:", c.objects[x]), x, x);

  int M = c.num_mors();
  c.comp.assign(static_cast<std::size_t>(M) * M, -1);
  auto set_comp = [&](int g, int f, int gf) {
    int& slot = c.comp[static_cast<std::size_t>(g) * M + f];
    if (slot >= 0 && slot != gf)
      fail(errc::validation, cat("category: conflicting composites for '", c.mors[g].name, "' o '",
                                 c.mors[f].name, "'"));
    slot = gf;
  };
  if (doc.contains("compose"))
    for (const auto& entry : doc["compose"]) {
      if (!entry.is_array() || entry.size() != 3)
        fail(errc::validation, "category: compose entries must be [g, f, gf]");
      auto need = [&](const std::string& n) {
        if (!mor_idx.count(n)) fail(errc::validation, cat("category: unknown morphism '", n, "'"));
        return mor_idx[n];
      };
      int g = need(entry[0].get<std::string>());
      int f = need(entry[1].get<std::string>());
      int gf = need(entry[2].get<std::string>());
      if (!c.composable(g, f))
        fail(errc::validation, cat("category: '", c.mors[g].name, "' o '", c.mors[f].name,
                                   "' is not composable"));
      set_comp(g, f, gf);
    }
  // identity composites are forced
  for (int f = 0; f < M; ++f) {
    set_comp(c.identity[c.mors[f].dst], f, f);
    set_comp(f, c.identity[c.mors[f].src], f);
  }
  c.validate();

  if (doc.contains("classes"))
    for (auto it = doc["classes"].begin(); it != doc["classes"].end(); ++it) {
      EdgeClass e{it.key(), std::vector<char>(M, 0)};
      for (const auto& entry : it.value()) {
        std::string n = entry.get<std::string>();
        if (n == "+ids") {
          for (int x = 0; x < c.num_objects(); ++x) e.member[c.identity[x]] = 1;
        } else if (n == "+all") {
          for (int m = 0; m < M; ++m) e.member[m] = 1;
        } else {
          if (!mor_idx.count(n))
            fail(errc::validation, cat("category: class '", it.key(), "' names unknown morphism '",
                                       n, "'"));
          e.member[mor_idx[n]] = 1;
        }
      }
      out.classes.emplace(it.key(), std::move(e));
    }
  return out;
}

CategoryDoc load_category(const std::string& path) { return parse_category(read_file(path)); }

std::string category_to_json(const FinCat& c, const std::map<std::string, EdgeClass>& classes) {
  json doc;
  doc["objects"] = c.objects;
  json mors = json::array();
  for (int m = 0; m < c.num_mors(); ++m) {
    if (c.is_identity(m)) continue;  // identities are implicit
    mors.push_back({{"id", c.mors[m].name},
                    {"src", c.objects[c.mors[m].src]},
                    {"dst", c.objects[c.mors[m].dst]}});
  }
  doc["morphisms"] = mors;
  json comp = json::array();
  for (int g = 0; g < c.num_mors(); ++g) {
    if (c.is_identity(g)) continue;
    for (int f = 0; f < c.num_mors(); ++f) {
      if (c.is_identity(f) || !c.composable(g, f)) continue;
      comp.push_back({c.mors[g].name, c.mors[f].name, c.mors[c.compose(g, f)].name});
    }
  }
  doc["compose"] = comp;
  if (!classes.empty()) {
    json cls;
    for (const auto& [name, e] : classes) {
      json ms = json::array();
      ms.push_back("+ids");
      for (int m = 0; m < c.num_mors(); ++m)
        if (e.has(m) && !c.is_identity(m)) ms.push_back(c.mors[m].name);
      cls[name] = ms;
    }
    doc["classes"] = cls;
  }
  return doc.dump(2) + "\n";
}

std::string poset_to_json(const FinPoset& p) {
  json doc;
  doc["elements"] = p.labels;
  json pairs = json::array();
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (p.lt(i, j)) pairs.push_back({i, j});
  doc["leq_pairs"] = pairs;
  return doc.dump(2) + "\n";
}

std::string lattice_to_json(const FinLattice& l) {
  json doc = json::parse(poset_to_json(l.order));
  json meets = json::array(), joins = json::array();
  for (int i = 0; i < l.size(); ++i) {
    json mrow = json::array(), jrow = json::array();
    for (int j = 0; j < l.size(); ++j) {
      mrow.push_back(l.meet(i, j));
      jrow.push_back(l.join(i, j));
    }
    meets.push_back(mrow);
    joins.push_back(jrow);
  }
  doc["meet"] = meets;
  doc["join"] = joins;
  return doc.dump(2) + "\n";
}

FinPoset poset_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(errc::validation, cat("poset: invalid JSON: ", e.what()));
  }
  std::vector<std::string> labels;
  for (const auto& e : doc.at("elements")) labels.push_back(e.get<std::string>());
  std::vector<std::pair<int, int>> pairs;
  for (const auto& pr : doc.at("leq_pairs")) pairs.emplace_back(pr[0].get<int>(), pr[1].get<int>());
  return make_poset(static_cast<int>(labels.size()), pairs, labels);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::validation, cat("cannot open file: ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::validation, cat("cannot write file: ", path));
  out << content;
}

}  // namespace nervelab
