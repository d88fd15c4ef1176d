// nervelab: verification front end for the combinatorial gluing toolkit.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 input/validation
// error, 3 a cap or budget was exhausted. Reports are JSON lines (header,
// one line per check, trailing summary); identical inputs give identical bytes.

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "nervelab/certify.hpp"
#include "nervelab/dot.hpp"
#include "nervelab/homology.hpp"
#include "nervelab/json_io.hpp"
#include "nervelab/multinerve.hpp"
#include "nervelab/report.hpp"

using namespace nervelab;
using json = nlohmann::ordered_json;

namespace {

struct Caps {
  int crt_n = kCrtCap;
  int upset_p = kUpsetPosetCap;
  int nerve_dim = kDimCap;
  long long horn_maps = 1000000;
  long long cert_attempts = 1000000;
  double cert_seconds = 60.0;
  long long enum_results = 200000;
  int enum_per_direction = 3;
  int enum_directions = 4;

  // NERVELAB_CAPS="CRT_N=7,CERT_SECONDS=120,..." overrides the defaults
  void load_env() {
    const char* env = std::getenv("NERVELAB_CAPS");
    if (!env) return;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) fail(errc::validation, cat("NERVELAB_CAPS: bad entry ", item));
      std::string key = item.substr(0, eq), val = item.substr(eq + 1);
      if (key == "CRT_N") crt_n = std::stoi(val);
      else if (key == "UPSET_P") upset_p = std::stoi(val);
      else if (key == "NERVE_DIM") nerve_dim = std::stoi(val);
      else if (key == "HORN_MAPS") horn_maps = std::stoll(val);
      else if (key == "CERT_ATTEMPTS") cert_attempts = std::stoll(val);
      else if (key == "CERT_SECONDS") cert_seconds = std::stod(val);
      else if (key == "ENUM_RESULTS") enum_results = std::stoll(val);
      else if (key == "ENUM_PER_DIRECTION") enum_per_direction = std::stoi(val);
      else if (key == "ENUM_DIRECTIONS") enum_directions = std::stoi(val);
      else fail(errc::validation, cat("NERVELAB_CAPS: unknown key ", key));
    }
  }

  SearchBudget cert_budget() const { return {cert_attempts, cert_seconds}; }
  EnumCaps enum_caps() const { return {enum_per_direction, enum_directions, enum_results}; }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void finish(Reporter& rep, const std::string& out_path, int& exit_code) {
  std::string text = rep.render();
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
  if (!rep.all_pass()) exit_code = std::max(exit_code, 1);
}

json condition_details(const FinCat&, const Condition& cond) {
  json d;
  if (!cond.witness.empty()) d["witness"] = cond.witness;
  return d;
}

void run_lattice_crt(Reporter& rep, const Caps& caps, int n, const std::string& dot_path,
                     const std::string& json_path) {
  auto c = crt(n, caps.crt_n);
  rep.note("n", n);
  json d;
  d["elements"] = c.size();
  d["expected"] = static_cast<long long>(binomial(2 * n + 2, n + 1) - 1);
  rep.check("crt-count", c.size() == static_cast<int>(binomial(2 * n + 2, n + 1) - 1), d);
  bool sigma_ok = true;
  for (int p = 0; p <= n && sigma_ok; ++p)
    for (int q = 0; q <= n && sigma_ok; ++q)
      if (c.pi(c.sigma(p, q)) != std::make_pair(p, q)) sigma_ok = false;
  rep.check("pi-after-sigma-is-identity", sigma_ok);
  if (!dot_path.empty()) {
    write_file(dot_path, crt_dot(c));
    json dd;
    dd["path"] = dot_path;
    rep.check("dot-written", true, dd);
  }
  if (!json_path.empty()) {
    write_file(json_path, lattice_to_json(c.u.lat));
    json dd;
    dd["path"] = json_path;
    rep.check("json-written", true, dd);
  }
}

void run_verify_crt_counts(Reporter& rep, const Caps& caps, int max_n) {
  for (int n = 0; n <= max_n; ++n) {
    auto c = crt(n, std::max(caps.crt_n, max_n));
    long long expect = static_cast<long long>(binomial(2 * n + 2, n + 1) - 1);
    json d;
    d["n"] = n;
    d["elements"] = c.size();
    d["expected"] = expect;
    rep.check(cat("crt-count-", n), c.size() == expect, d);
  }
}

void run_verify_cert(Reporter& rep, const Caps& caps, int n, bool cart,
                     const std::string& cert_path) {
  StagedCertificate staged = cart ? cert_boxplus_cover(n, caps.cert_budget())
                                  : cert_box_in_ccpt(n, caps.cert_budget());
  auto res = verify_certificate(staged.ambient, staged.cert);
  json d;
  d["moves"] = static_cast<int>(staged.cert.moves.size());
  d["start_simplices"] = static_cast<int>(staged.cert.start.size());
  d["ambient_simplices"] = staged.ambient.total();
  d["stages"] = staged.stages;
  if (!res.ok) d["reason"] = res.reason;
  rep.check(cart ? "cart-cover-certificate" : "cpt-inner-certificate", res.ok, d);
  if (!cert_path.empty()) {
    write_file(cert_path, certificate_to_json(staged.cert));
    json dd;
    dd["path"] = cert_path;
    rep.check("certificate-written", true, dd);
  }
}

void run_komp(Reporter& rep, const Caps& caps, const std::string& cat_path,
              const std::string& sigma, int alpha, const std::string& checks,
              const std::string& e1_name, const std::string& e2_name) {
  auto doc = load_category(cat_path);
  std::vector<int> chain;
  for (const auto& name : split_list(sigma)) chain.push_back(doc.mor_by_name(name));
  if (chain.empty()) fail(errc::validation, "komp: --sigma must name at least one morphism");
  int base = doc.cat.mors[chain.front()].src;
  auto k = komp_category(doc.cat, doc.named_class(e1_name), doc.named_class(e2_name), base,
                         chain, alpha);
  rep.note("orientation", k.orientation);
  json d;
  d["objects"] = k.category.num_objects();
  d["morphisms"] = k.category.num_mors();
  rep.check("komp-is-category", true, d);
  auto op = opposite_category(k.category);
  for (const auto& chk : split_list(checks)) {
    if (chk == "filtered") {
      auto fr = is_filtered(op);
      json fd;
      if (!fr.filtered && fr.uncoconed_pair)
        fd["uncoconed"] = {op.objects[fr.uncoconed_pair->first],
                           op.objects[fr.uncoconed_pair->second]};
      rep.check("komp-op-filtered", fr.filtered, fd);
    } else if (chk == "homology") {
      int dim = std::min(caps.nerve_dim, 4);
      auto nerve = nerve_of(op, dim);
      auto hr = contractibility_evidence(nerve, dim);
      json hd;
      hd["verdict"] = to_string(hr.verdict);
      json degrees = json::array();
      for (const auto& deg : hr.degrees) {
        json dd;
        dd["betti"] = deg.betti;
        dd["torsion"] = deg.torsion;
        degrees.push_back(dd);
      }
      hd["degrees"] = degrees;
      rep.check("komp-op-contractible",
                hr.verdict == Verdict::cone || hr.verdict == Verdict::acyclic, hd);
    } else {
      fail(errc::validation, cat("komp: unknown check '", chk, "'"));
    }
  }
}

void run_glue(Reporter& rep, const Caps& caps, const std::string& cat_path,
              const std::string& classes, const std::string& class0,
              const std::string& twist, int max_dim) {
  auto doc = load_category(cat_path);
  const FinCat& c = doc.cat;
  auto names = split_list(classes);
  if (names.size() < 2) fail(errc::validation, "glue: need at least two classes");
  int k = static_cast<int>(names.size());
  Marking marking;
  for (const auto& nm : names) marking.per_direction.push_back(doc.named_class(nm));
  EdgeClass e0 = class0.empty() ? class_of_all(c, "all") : doc.named_class(class0);
  std::uint32_t twist_bits = 0;
  for (const auto& t : split_list(twist)) {
    if (t.empty()) continue;
    int dir = std::stoi(t);
    if (dir < 3 || dir > k)
      fail(errc::validation, cat("glue: twist direction ", dir, " outside 3..", k));
    twist_bits |= 1u << (dir - 1);
  }
  auto tiling = Tiling::uniform(k, Tiling::Kind::cart);
  Marking target_marking;
  target_marking.per_direction.push_back(e0);
  for (int d = 3; d <= k; ++d) target_marking.per_direction.push_back(marking.per_direction[d - 1]);
  auto target_tiling = Tiling::uniform(k - 1, Tiling::Kind::cart);
  std::uint32_t target_twist = twist_bits >> 1;

  {  // bijectivity on vertices
    auto src0 = diagonal_simplices(c, marking, tiling, k, twist_bits, 0, caps.enum_caps());
    std::set<int> objs;
    bool ok = true;
    for (const auto& f : src0) {
      auto g = gluing_map(c, f);
      if (g.obj[0] != f.obj[0]) ok = false;
      objs.insert(g.obj[0]);
    }
    json d;
    d["source_vertices"] = static_cast<int>(src0.size());
    rep.check("vertex-bijection",
              ok && static_cast<int>(objs.size()) == c.num_objects() &&
                  static_cast<int>(src0.size()) == c.num_objects(),
              d);
  }
  for (int n = 1; n <= max_dim; ++n) {
    auto cells = diagonal_simplices(c, marking, tiling, k, twist_bits, n, caps.enum_caps());
    bool faces_ok = true, degen_ok = true, target_ok = true;
    std::vector<GridFunctor> target_cells;
    if (k >= 2)
      target_cells = diagonal_simplices(c, target_marking, target_tiling, k - 1, target_twist, n,
                                        caps.enum_caps());
    for (const auto& f : cells) {
      auto g = gluing_map(c, f);
      for (int i = 0; i <= n && faces_ok; ++i)
        if (!(gluing_map(c, diag_face(c, f, i)) == diag_face(c, g, i))) faces_ok = false;
      for (int j = 0; j < n && degen_ok; ++j)
        if (!(gluing_map(c, diag_degeneracy(c, f, j)) == diag_degeneracy(c, g, j)))
          degen_ok = false;
      if (std::find(target_cells.begin(), target_cells.end(), g) == target_cells.end())
        target_ok = false;
    }
    json d;
    d["cells"] = static_cast<int>(cells.size());
    rep.check(cat("face-commutation-", n), faces_ok, d);
    rep.check(cat("degeneracy-commutation-", n), degen_ok, json::object());
    rep.check(cat("target-valid-", n), target_ok, json::object());
  }
  if (k == 2) {
    bool all_nonempty = true;
    std::string witness;
    for (int m = 0; m < c.num_mors() && all_nonempty; ++m) {
      if (!e0.has(m)) continue;
      auto kc = komp_category(c, marking.per_direction[0], marking.per_direction[1],
                              c.mors[m].src, {m}, 1);
      if (kc.category.num_objects() == 0) {
        all_nonempty = false;
        witness = c.mors[m].name;
      }
    }
    json d;
    if (!witness.empty()) d["witness"] = witness;
    rep.check("komp-fibers-nonempty", all_nonempty, d);
  }
}

void run_hypotheses(Reporter& rep, const std::string& cat_path, const std::string& mode,
                    const std::string& classes, const std::string& chain_arg, bool build_chain) {
  auto doc = load_category(cat_path);
  const FinCat& c = doc.cat;
  auto emit = [&](const HypothesesReport& hr, const std::string& prefix) {
    for (const auto& cond : hr.conditions)
      rep.check(prefix + cond.name, cond.pass, condition_details(c, cond));
  };
  if (mode == "descent" || mode == "combine") {
    auto names = split_list(classes);
    if (names.size() < 3) fail(errc::validation, "hypotheses: descent needs E0,E1,E2[,Ek...]");
    std::vector<EdgeClass> eks;
    for (std::size_t i = 3; i < names.size(); ++i) eks.push_back(doc.named_class(names[i]));
    auto hr = check_descent_hypotheses(c, doc.named_class(names[0]), doc.named_class(names[1]),
                                       doc.named_class(names[2]), eks);
    emit(hr, "descent: ");
  }
  if (mode == "gluing" || mode == "combine") {
    auto names = split_list(classes);
    std::size_t off = mode == "combine" ? 1 : 0;  // combine: E0,E1,E2[,...]
    if (names.size() < off + 2) fail(errc::validation, "hypotheses: gluing needs classes E1,E2");
    const EdgeClass& e1 = doc.named_class(names[off]);
    const EdgeClass& e2 = doc.named_class(names[off + 1]);
    std::vector<EdgeClass> chain;
    if (build_chain || chain_arg.empty()) {
      chain = build_truncation_chain(c, e1, e2);
      json d;
      d["length"] = static_cast<int>(chain.size());
      rep.check("gluing: truncation chain built", true, d);
    } else {
      for (const auto& nm : split_list(chain_arg)) chain.push_back(doc.named_class(nm));
    }
    auto hr = check_gluing_hypotheses(c, e1, e2, chain);
    emit(hr, "gluing: ");
  }
  if (mode != "descent" && mode != "gluing" && mode != "combine")
    fail(errc::validation, cat("hypotheses: unknown mode '", mode, "'"));
}

void run_homology(Reporter& rep, const Caps& caps, const std::string& complex_path, int max_dim,
                  const std::string& expect, const std::string& matrices_prefix) {
  auto x = complex_from_json(read_file(complex_path));
  int dim = std::min({max_dim, x.max_dim, caps.nerve_dim});
  if (!matrices_prefix.empty()) {
    auto cc = chain_complex(x, dim);
    for (int n = 1; n <= dim; ++n)
      write_file(cat(matrices_prefix, ".d", n, ".txt"), matrix_to_triplets(cc.del(n)));
  }
  auto hr = contractibility_evidence(x, dim);
  json d;
  d["verdict"] = to_string(hr.verdict);
  d["connected"] = hr.connected;
  d["reliable_top"] = hr.reliable_top;
  json degrees = json::array();
  for (const auto& deg : hr.degrees) {
    json dd;
    dd["betti"] = deg.betti;
    dd["torsion"] = deg.torsion;
    degrees.push_back(dd);
  }
  d["degrees"] = degrees;
  bool pass = expect.empty() ? true : to_string(hr.verdict) == expect;
  if (!expect.empty()) d["expected"] = expect;
  rep.check("homology", pass, d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nervelab: finite checks for nerve-gluing combinatorics"};
  app.require_subcommand(1);

  std::string out_path;
  long long seed = 0;
  app.add_option("--out", out_path, "report file (JSON lines); default stdout");
  app.add_option("--seed", seed, "deterministic seed recorded in the report");

  // lattice crt
  auto* lattice = app.add_subcommand("lattice", "lattice constructions");
  auto* lcrt = lattice->add_subcommand("crt", "build Crt^n with its structure maps");
  int lcrt_n = 1;
  std::string lcrt_dot, lcrt_json;
  lcrt->add_option("-n", lcrt_n, "grid size")->required();
  lcrt->add_option("--dot", lcrt_dot, "write the Hasse diagram as Graphviz text");
  lcrt->add_option("--json", lcrt_json, "write the lattice as JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "certified verifications");
  auto* vcpt = verify->add_subcommand("cpt-inner", "certificate for box^n in CCpt^n");
  int vcpt_n = 1;
  std::string vcpt_cert;
  vcpt->add_option("-n", vcpt_n)->required();
  vcpt->add_option("--cert", vcpt_cert, "write the certificate JSON");
  auto* vcart = verify->add_subcommand("cart-cover", "certificate for the interval cover of Cart^n");
  int vcart_n = 1;
  std::string vcart_cert;
  vcart->add_option("-n", vcart_n)->required();
  vcart->add_option("--cert", vcart_cert, "write the certificate JSON");
  auto* vcounts = verify->add_subcommand("crt-counts", "Crt^n cardinalities against the closed form");
  int vcounts_max = 4;
  vcounts->add_option("--max", vcounts_max)->required();

  // komp
  auto* komp = app.add_subcommand("komp", "compactification category of a simplex");
  std::string komp_cat, komp_sigma, komp_checks = "filtered,homology";
  std::string komp_e1 = "E1", komp_e2 = "E2";
  int komp_alpha = 1;
  komp->add_option("--cat", komp_cat, "category JSON file")->required();
  komp->add_option("--sigma", komp_sigma, "comma-separated composable morphism names")->required();
  komp->add_option("--alpha", komp_alpha, "1 or 2");
  komp->add_option("--checks", komp_checks, "comma list: filtered,homology");
  komp->add_option("--e1", komp_e1, "class name for direction 1");
  komp->add_option("--e2", komp_e2, "class name for direction 2");

  // glue
  auto* glue = app.add_subcommand("glue", "gluing-map checks on the Cartesian nerve");
  std::string glue_cat, glue_classes, glue_class0, glue_twist;
  int glue_dim = 2;
  glue->add_option("--cat", glue_cat)->required();
  glue->add_option("--classes", glue_classes, "E1,E2[,Ek...]")->required();
  glue->add_option("--class0", glue_class0, "target class E0 (default: all morphisms)");
  glue->add_option("--twist", glue_twist, "comma list of twisted directions (subset of 3..k)");
  glue->add_option("--max-dim", glue_dim);

  // hypotheses
  auto* hyp = app.add_subcommand("hypotheses", "theorem-hypothesis checkers");
  std::string hyp_cat, hyp_mode, hyp_classes, hyp_chain;
  bool hyp_build = false;
  hyp->add_option("--cat", hyp_cat)->required();
  hyp->add_option("--mode", hyp_mode, "descent | gluing | combine")->required();
  hyp->add_option("--classes", hyp_classes, "descent: E0,E1,E2[,Ek...]; gluing: E1,E2");
  hyp->add_option("--chain", hyp_chain, "gluing chain class names C0,C1,...");
  hyp->add_flag("--build-chain", hyp_build, "construct the truncation chain instead");

  // homology
  auto* hom = app.add_subcommand("homology", "integral homology of a complex file");
  std::string hom_complex, hom_expect, hom_matrices;
  int hom_dim = kDimCap;
  hom->add_option("--complex", hom_complex)->required();
  hom->add_option("--max-dim", hom_dim);
  hom->add_option("--expect", hom_expect, "assert the verdict (CONE, ACYCLIC, ...)");
  hom->add_option("--matrices", hom_matrices, "write boundary matrices as sparse triplets");

  CLI11_PARSE(app, argc, argv);

  int exit_code = 0;
  try {
    Caps caps;
    caps.load_env();
    std::ostringstream cmd;
    for (int i = 1; i < argc; ++i) cmd << (i > 1 ? " " : "") << argv[i];
    Reporter rep(cmd.str());
    rep.note("seed", seed);

    if (lcrt->parsed())
      run_lattice_crt(rep, caps, lcrt_n, lcrt_dot, lcrt_json);
    else if (vcpt->parsed())
      run_verify_cert(rep, caps, vcpt_n, false, vcpt_cert);
    else if (vcart->parsed())
      run_verify_cert(rep, caps, vcart_n, true, vcart_cert);
    else if (vcounts->parsed())
      run_verify_crt_counts(rep, caps, vcounts_max);
    else if (komp->parsed())
      run_komp(rep, caps, komp_cat, komp_sigma, komp_alpha, komp_checks, komp_e1, komp_e2);
    else if (glue->parsed())
      run_glue(rep, caps, glue_cat, glue_classes, glue_class0, glue_twist, glue_dim);
    else if (hyp->parsed())
      run_hypotheses(rep, hyp_cat, hyp_mode, hyp_classes, hyp_chain, hyp_build);
    else if (hom->parsed())
      run_homology(rep, caps, hom_complex, hom_dim, hom_expect, hom_matrices);
    else
      fail(errc::validation, "no subcommand given");

    finish(rep, out_path, exit_code);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == errc::cap ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
