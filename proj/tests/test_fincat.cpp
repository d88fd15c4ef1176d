#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "nervelab/fincat.hpp"
#include "nervelab/json_io.hpp"

using namespace nervelab;

namespace {
std::string data(const char* f) { return std::string(NERVELAB_DATA_DIR) + "/" + f; }

// Oracle: a cone (w, a, b) over (f, g) is terminal iff every cone factors uniquely.
// This re-derives terminality from scratch, independent of pullback()'s selection.
bool terminal_by_scan(const FinCat& c, int f, int g, int w, int a, int b) {
  for (int w2 = 0; w2 < c.num_objects(); ++w2)
    for (int a2 : c.hom(w2, c.mors[f].src))
      for (int b2 : c.hom(w2, c.mors[g].src)) {
        if (c.compose(f, a2) != c.compose(g, b2)) continue;
        int count = 0;
        for (int h : c.hom(w2, w))
          if (c.compose(a, h) == a2 && c.compose(b, h) == b2) ++count;
        if (count != 1) return false;
      }
  return true;
}
}  // namespace

TEST_CASE("category JSON validation") {
  SUBCASE("single object") {
    auto doc = parse_category(R"({"objects":["x"],"morphisms":[],"compose":[]})");
    CHECK(doc.cat.num_mors() == 1);
    CHECK(doc.cat.is_identity(0));
  }
  SUBCASE("poset [2] as a category has 6 morphisms") {
    auto c = category_from_poset(chain_poset(2));
    CHECK(c.num_objects() == 3);
    CHECK(c.num_mors() == 6);
  }
  SUBCASE("missing composite is rejected") {
    const char* txt = R"({"objects":["a","b","c"],
      "morphisms":[{"id":"f","src":"a","dst":"b"},{"id":"g","src":"b","dst":"c"}],
      "compose":[]})";
    CHECK_THROWS_WITH_AS(parse_category(txt), "category: missing composite 'g' o 'f'", error);
  }
  SUBCASE("associativity violation names the triple (g,f,h)") {
    // endomorphism monoid {1, a} with forced non-associative table: a o a = 1 would be
    // fine; instead declare a o a = a and corrupt with a second generator.
    const char* txt = R"({"objects":["x"],
      "morphisms":[{"id":"a","src":"x","dst":"x"},{"id":"b","src":"x","dst":"x"}],
      "compose":[["a","a","b"],["a","b","a"],["b","a","a"],["b","b","b"]]})";
    // a(aa)=ab=a, (aa)a=ba=a fine; a(ab)=aa=b vs (aa)b=bb=b fine;
    // a(ba)=aa=b vs (ab)a=aa=b fine; b(aa)=bb=b vs (ba)a=aa=b fine;
    // a(bb)=ab=a vs (ab)b=ab=a fine; b(ab)=ba=a vs (ba)b=ab=a fine;
    // b(ba)=ba... build really broken one instead:
    (void)txt;
    const char* bad = R"({"objects":["x"],
      "morphisms":[{"id":"a","src":"x","dst":"x"},{"id":"b","src":"x","dst":"x"}],
      "compose":[["a","a","b"],["a","b","b"],["b","a","a"],["b","b","b"]]})";
    // check: a(aa)=a b = b, (aa)a = b a = a -> violation at (a,a,a)
    CHECK_THROWS_WITH_AS(parse_category(bad),
                         "category: associativity violation at (a,a,a)", error);
  }
  SUBCASE("dangling src/dst") {
    const char* txt = R"({"objects":["a"],
      "morphisms":[{"id":"f","src":"a","dst":"zz"}],"compose":[]})";
    CHECK_THROWS_WITH_AS(parse_category(txt), "category: dangling src/dst in morphism 'f'", error);
  }
  SUBCASE("bundled categories load and validate") {
    for (const char* f : {"toy1.json", "toy2.json", "five.json", "b3.json", "nonmono.json"}) {
      auto doc = load_category(data(f));
      CHECK(doc.cat.num_objects() > 0);
    }
  }
}

TEST_CASE("pullbacks") {
  SUBCASE("pullback along identity has the other foot as apex") {
    auto doc = load_category(data("toy1.json"));
    const auto& c = doc.cat;
    int j = doc.mor_by_name("j");
    int idx = c.identity[c.mors[j].dst];
    auto pb = pullback(c, idx, j);
    REQUIRE(pb.has_value());
    CHECK(pb->apex == c.mors[j].src);
    CHECK(pb->leg2 == c.identity[c.mors[j].src]);
  }
  SUBCASE("in a lattice-as-category the pullback is the meet") {
    auto doc = load_category(data("b3.json"));
    const auto& c = doc.cat;
    int f = doc.mor_by_name("6|30"), g = doc.mor_by_name("10|30");
    auto pb = pullback(c, f, g);
    REQUIRE(pb.has_value());
    CHECK(c.objects[pb->apex] == "2");
    CHECK(terminal_by_scan(c, f, g, pb->apex, pb->leg1, pb->leg2));
  }
  SUBCASE("five-object category: apex verified terminal by brute-force enumeration") {
    auto doc = load_category(data("five.json"));
    const auto& c = doc.cat;
    int f = doc.mor_by_name("f"), g = doc.mor_by_name("g");
    auto pb = pullback(c, f, g);
    REQUIRE(pb.has_value());
    CHECK(c.objects[pb->apex] == "P");
    CHECK(pb->leg1 == doc.mor_by_name("p1"));
    CHECK(pb->leg2 == doc.mor_by_name("p2"));
    CHECK(terminal_by_scan(c, f, g, pb->apex, pb->leg1, pb->leg2));
    // every cone is recorded with its unique factorization
    CHECK(pb->factorizations.size() == 2);  // (P,p1,p2) and (W,a,b)
  }
  SUBCASE("determinism: repeated calls give the identical cone") {
    auto doc = load_category(data("b3.json"));
    int f = doc.mor_by_name("6|30"), g = doc.mor_by_name("15|30");
    auto p1 = pullback(doc.cat, f, g), p2 = pullback(doc.cat, f, g);
    REQUIRE(p1.has_value());
    CHECK(p1->apex == p2->apex);
    CHECK(p1->leg1 == p2->leg1);
    CHECK(p1->leg2 == p2->leg2);
  }
  SUBCASE("b3 admits all pullbacks; five does not") {
    CHECK(admits_all_pullbacks(load_category(data("b3.json")).cat));
    CHECK(admits_all_pullbacks(load_category(data("toy2.json")).cat));
  }
}

TEST_CASE("is_cartesian_square") {
  auto doc = load_category(data("b3.json"));
  const auto& c = doc.cat;
  SUBCASE("identity square") {
    int id1 = c.identity[0];
    Square s{id1, id1, id1, id1};
    CHECK(is_cartesian_square(c, s));
  }
  SUBCASE("degenerate square: pullback along identity") {
    int f = doc.mor_by_name("2|6");
    Square s{c.identity[c.mors[f].src], f, f, c.identity[c.mors[f].dst]};
    REQUIRE(square_commutes(c, s));
    CHECK(is_cartesian_square(c, s));
  }
  SUBCASE("meet square is Cartesian, non-meet square is not") {
    // 2 = 6 meet 10 in B3
    Square good{doc.mor_by_name("2|6"), doc.mor_by_name("2|10"), doc.mor_by_name("6|30"),
                doc.mor_by_name("10|30")};
    REQUIRE(square_commutes(c, good));
    CHECK(is_cartesian_square(c, good));
    // 1 -> 6, 1 -> 10 commutes over 30 but 1 != 2
    Square bad{doc.mor_by_name("1|6"), doc.mor_by_name("1|10"), doc.mor_by_name("6|30"),
               doc.mor_by_name("10|30")};
    REQUIRE(square_commutes(c, bad));
    CHECK_FALSE(is_cartesian_square(c, bad));
  }
  SUBCASE("agrees with pullback comparison on all commuting squares") {
    for (int right = 0; right < c.num_mors(); ++right)
      for (int bottom = 0; bottom < c.num_mors(); ++bottom) {
        if (c.mors[right].dst != c.mors[bottom].dst) continue;
        auto pb = pullback(c, right, bottom);
        REQUIRE(pb.has_value());
        for (int w = 0; w < c.num_objects(); ++w)
          for (int top : c.hom(w, c.mors[right].src))
            for (int left : c.hom(w, c.mors[bottom].src)) {
              Square s{top, left, right, bottom};
              if (!square_commutes(c, s)) continue;
              // in a poset, Cartesian iff the apex IS the pullback object
              CHECK(is_cartesian_square(c, s) == (w == pb->apex));
            }
      }
  }
}

TEST_CASE("diagonal_of") {
  SUBCASE("identity and poset morphisms have iso diagonals") {
    auto doc = load_category(data("b3.json"));
    const auto& c = doc.cat;
    auto d1 = diagonal_of(c, c.identity[3]);
    REQUIRE(d1.has_value());
    CHECK(d1->is_iso);
    auto d2 = diagonal_of(c, doc.mor_by_name("2|30"));
    REQUIRE(d2.has_value());
    CHECK(d2->is_iso);
  }
  SUBCASE("non-mono has non-iso diagonal") {
    auto doc = load_category(data("nonmono.json"));
    const auto& c = doc.cat;
    int f = doc.mor_by_name("f");
    // oracle: f is non-mono because it equalizes the parallel pair g1, g2
    int g1 = doc.mor_by_name("g1"), g2 = doc.mor_by_name("g2");
    CHECK(c.compose(f, g1) == c.compose(f, g2));
    auto d = diagonal_of(c, f);
    REQUIRE(d.has_value());
    CHECK(c.objects[d->apex] == "Q");
    CHECK(d->diagonal == doc.mor_by_name("dlt"));
    CHECK_FALSE(d->is_iso);
    // and the mono dlt has an iso diagonal
    auto dd = diagonal_of(c, doc.mor_by_name("dlt"));
    REQUIRE(dd.has_value());
    CHECK(dd->is_iso);
  }
}

TEST_CASE("class_properties") {
  SUBCASE("all morphisms form an admissible class when pullbacks exist") {
    auto doc = load_category(data("b3.json"));
    auto rep = class_properties(doc.cat, class_of_all(doc.cat));
    CHECK(rep.contains_identities);
    CHECK(rep.comp_stable);
    CHECK(rep.pullback_stable);
    CHECK(rep.cancellation);
    CHECK(rep.admissible);
  }
  SUBCASE("isomorphisms are admissible") {
    auto doc = load_category(data("nonmono.json"));
    auto rep = class_properties(doc.cat, class_of_isos(doc.cat));
    CHECK(rep.admissible);
  }
  SUBCASE("toy2 classes E1, E2 are admissible") {
    auto doc = load_category(data("toy2.json"));
    CHECK(class_properties(doc.cat, doc.named_class("E1")).admissible);
    CHECK(class_properties(doc.cat, doc.named_class("E2")).admissible);
  }
  SUBCASE("a class failing pullback-stability is flagged with a witness square") {
    auto doc = load_category(data("neg_pbstab.json"));
    const auto& c = doc.cat;
    auto rep = class_properties(c, doc.named_class("Ek"), {doc.named_class("E1")});
    REQUIRE(rep.pullback_stable_by.size() == 1);
    CHECK_FALSE(rep.pullback_stable_by[0].second);
    REQUIRE(rep.pullback_by_witness[0].has_value());
    Square s = *rep.pullback_by_witness[0];
    CHECK(is_cartesian_square(c, s));
    CHECK(c.mors[s.left].name == "2|10");
  }
}

TEST_CASE("factorization_check") {
  SUBCASE("E1 = E2 = all factors everything") {
    auto doc = load_category(data("five.json"));
    auto rep = factorization_check(doc.cat, class_of_all(doc.cat), class_of_all(doc.cat));
    CHECK(rep.all_factor);
  }
  SUBCASE("toy compactification: j factors uniquely through Xbar") {
    auto doc = load_category(data("toy1.json"));
    auto rep = factorization_check(doc.cat, doc.named_class("E1"), doc.named_class("E2"));
    CHECK(rep.all_factor);
    int j = doc.mor_by_name("j");
    REQUIRE(rep.factors[j].size() == 1);
    CHECK(rep.factors[j][0] == std::make_pair(doc.mor_by_name("p"), doc.mor_by_name("q")));
  }
  SUBCASE("iso-only classes fail on a non-iso") {
    auto doc = load_category(data("neg_fact.json"));
    auto rep = factorization_check(doc.cat, doc.named_class("E1"), doc.named_class("E2"));
    CHECK_FALSE(rep.all_factor);
    CHECK(doc.cat.mors[*rep.unfactored].name == "f");
  }
}

TEST_CASE("is_filtered") {
  SUBCASE("poset with maximum is filtered") {
    auto rep = is_filtered(category_from_poset(chain_poset(3)));
    CHECK(rep.filtered);
  }
  SUBCASE("2-element antichain is not") {
    auto rep = is_filtered(category_from_poset(antichain_poset(2)));
    CHECK_FALSE(rep.filtered);
    REQUIRE(rep.uncoconed_pair.has_value());
  }
  SUBCASE("poset filteredness agrees with upper-bound brute force, |D| <= 8") {
    std::vector<FinPoset> ps{chain_poset(2), antichain_poset(3), grid_poset(1), rcpt_poset(2),
                             make_poset(4, {{0, 2}, {1, 2}, {1, 3}})};
    for (const auto& p : ps) {
      bool oracle = true;  // every finite subset has an upper bound iff every pair does
      for (int x = 0; x < p.n && oracle; ++x)
        for (int y = 0; y < p.n && oracle; ++y) {
          bool ub = false;
          for (int z = 0; z < p.n && !ub; ++z)
            if (p.leq(x, z) && p.leq(y, z)) ub = true;
          if (!ub) oracle = false;
        }
      if (p.n == 0) oracle = false;
      // pairwise upper bounds suffice in a finite poset only when a maximum exists;
      // directedness of finite posets needs a top, and pairwise-directed finite
      // posets do have one, so the comparison is sound.
      CHECK(is_filtered(category_from_poset(p)).filtered == oracle);
    }
  }
  SUBCASE("parallel pair needs an equalizing arrow") {
    auto doc = load_category(data("nonmono.json"));
    auto rep = is_filtered(doc.cat);
    // g1, g2 : A -> B are equalized by f, but B and Q have no cocone beyond C... check result
    // by direct scan: the category has C as a sink reachable from everything.
    CHECK(rep.filtered);
  }
}

TEST_CASE("two isomorphic terminal cones: deterministic pick, witnesses invertible") {
  // objects X ~ X' (isomorphic), Y; f : X -> Y and f' = f o u'; the pullback of
  // (f, f) has terminal cones with apex X and apex X'.
  FinCat c;
  c.objects = {"X", "Xp", "Y"};
  auto add = [&](const char* n, int s, int d) {
    c.mors.push_back({n, s, d});
    return c.num_mors() - 1;
  };
  int ix = add("idX", 0, 0), ixp = add("idXp", 1, 1), iy = add("idY", 2, 2);
  int u = add("u", 0, 1), up = add("up", 1, 0);
  int f = add("f", 0, 2), fp = add("fp", 1, 2);
  c.identity = {ix, ixp, iy};
  int M = c.num_mors();
  c.comp.assign(static_cast<std::size_t>(M) * M, -1);
  auto set = [&](int g, int h, int gh) { c.comp[static_cast<std::size_t>(g) * M + h] = gh; };
  for (int m = 0; m < M; ++m) {
    set(m, c.identity[c.mors[m].src], m);
    set(c.identity[c.mors[m].dst], m, m);
  }
  set(up, u, ix);
  set(u, up, ixp);
  set(f, up, fp);
  set(fp, u, f);
  c.validate();

  auto pb = pullback(c, f, f);
  REQUIRE(pb.has_value());
  CHECK(pb->apex == 0);  // smallest apex index wins
  CHECK(pb->leg1 == ix);
  // the cone at X' is also terminal, and the two compare via the iso pair (u, u')
  CHECK(terminal_by_scan(c, f, f, 1, up, up));
  Square s_xp{up, up, f, f};
  CHECK(is_cartesian_square(c, s_xp));
  // stored factorization witnesses compose to identities across the two cones
  for (const auto& fact : pb->factorizations)
    if (fact[0] == 1) {             // the X' cone (X', up, up)
      CHECK(fact[3] == up);         // unique h : X' -> X
      CHECK(c.compose(u, fact[3]) == ixp);
      CHECK(c.compose(fact[3], u) == ix);
    }
}

TEST_CASE("opposite category") {
  auto doc = load_category(data("toy2.json"));
  auto op = opposite_category(doc.cat);
  op.validate();
  CHECK(op.mors[doc.mor_by_name("j")].src == doc.cat.mors[doc.mor_by_name("j")].dst);
  auto opop = opposite_category(op);
  for (int m = 0; m < doc.cat.num_mors(); ++m) {
    CHECK(opop.mors[m].src == doc.cat.mors[m].src);
    CHECK(opop.comp == doc.cat.comp);
  }
}
