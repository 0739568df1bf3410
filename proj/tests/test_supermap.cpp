#include <doctest.h>

#include "superjet/errors.hpp"
#include "superjet/expr.hpp"
#include "superjet/sampling.hpp"

using namespace superjet;

namespace {

const Chart kY = make_chart("M", {"y"});
const Chart kX = make_chart("N", {"x"});

SuperManifoldPresentation pres(const Chart& c, std::vector<std::string> odd) { return make_presentation(c, std::move(odd)); }

SuperPoly on(const TablePtr& t, const char* s) { return parse_poly(s, t); }

SuperManifoldPresentation random_presentation(Rng& rng, const std::string& name, const std::string& coord,
                                              const std::string& odd, int max_dim, int max_rank) {
  const Chart c = numbered_chart(name, coord, static_cast<std::size_t>(rng.uniform(1, max_dim)));
  return make_presentation(c, numbered_fibers(odd, static_cast<std::size_t>(rng.uniform(0, max_rank))).names);
}

std::optional<BundleConnection> random_bundle(Rng& rng, const SuperManifoldPresentation& n) {
  if (n.odd_rank() == 0) return std::nullopt;
  return random_bundle_connection(rng, n.chart, n.fibers());
}

ConnectionSampling linear() {
  ConnectionSampling s;
  s.max_degree = 1;
  return s;
}

}  // namespace

TEST_SUITE("supermap") {
  TEST_CASE("presentations") {
    CHECK_THROWS_AS(make_presentation(kY, {"y"}), ShapeError);
    CHECK_THROWS_AS(make_presentation(kY, {"th"}, {2}), ShapeError);
    CHECK(make_presentation(kY, {"th"}).fiber_degrees == std::vector<int>{1});
    CHECK(canonical_index({2, 0, 1}) == std::pair<OddIndex, int>{{0, 1, 2}, 1});
    CHECK(canonical_index({1, 0}) == std::pair<OddIndex, int>{{0, 1}, -1});
    CHECK(canonical_index({1, 1}).second == 0);
  }

  TEST_CASE("morphism validation") {
    const auto M = pres(kY, {"th1", "th2"});
    const auto N = pres(kX, {"eta"});
    const TablePtr S = source_table(M);
    CHECK_THROWS_AS(make_morphism(M, N, {on(S, "y + th1")}, {on(S, "th2")}), ParityError);
    CHECK_THROWS_AS(make_morphism(M, N, {on(S, "y")}, {on(S, "th1*th2")}), ParityError);
    CHECK_THROWS_AS(make_morphism(M, N, {on(S, "y")}, {}), ShapeError);
    CHECK_NOTHROW(make_morphism(M, N, {on(S, "y^2 + th1*th2")}, {on(S, "y*th2")}));
  }

  TEST_CASE("identity morphism with flat connections") {
    const auto M = make_presentation(make_chart("M", {"x1", "x2"}), {"th1", "th2"});
    const auto s = morphism_to_section(identity_morphism(M), TorsionFreeConnection::flat(M.chart), std::nullopt);
    for (const auto& t : s.tangent) CHECK(t.empty());
    for (int a = 0; a < 2; ++a) {
      REQUIRE(s.fiber[a].size() == 1);
      CHECK(s.fiber[a].begin()->first == OddIndex{a});
      CHECK(s.fiber[a].begin()->second.to_string() == "1");
    }
    CHECK(s.base_map[0].to_string() == "x1");
  }

  TEST_CASE("morphism_to_section examples") {
    SUBCASE("nilpotent shift") {
      const auto M = pres(kY, {"th1", "th2"});
      const auto N = pres(kX, {});
      const TablePtr S = source_table(M);
      const auto f = make_morphism(M, N, {on(S, "y + (y^2 + 3)*th1*th2")}, {});
      const auto s = morphism_to_section(f, TorsionFreeConnection::flat(kX), std::nullopt);
      REQUIRE(s.tangent[0].size() == 1);
      CHECK(s.tangent[0].begin()->first == OddIndex{0, 1});
      CHECK(s.tangent[0].begin()->second.to_string() == "3 + y^2");
      CHECK(s.base_map[0].to_string() == "y");
      CHECK(section_to_morphism(s, TorsionFreeConnection::flat(kX), std::nullopt) == f);
    }
    SUBCASE("fiber component") {
      const auto M = pres(kY, {"th"});
      const auto N = pres(kX, {"eta"});
      const TablePtr S = source_table(M);
      const auto f = make_morphism(M, N, {on(S, "y^3")}, {on(S, "(y - 1)*th")});
      const auto s = morphism_to_section(f, TorsionFreeConnection::flat(kX), std::nullopt);
      CHECK(s.tangent[0].empty());
      REQUIRE(s.fiber[0].size() == 1);
      CHECK(s.fiber[0].at(OddIndex{0}).to_string() == "-1 + y");
      CHECK(section_to_morphism(s, TorsionFreeConnection::flat(kX), std::nullopt) == f);
    }
  }

  TEST_CASE("section_to_morphism examples") {
    const auto M = pres(kY, {"th1", "th2"});
    const auto N = pres(kX, {"eta"});
    const auto base = {on(kY.base_table(), "y^2 - y")};
    const auto s = make_section(M, N, base, {{}}, {{}});
    const auto f = section_to_morphism(s, TorsionFreeConnection(kX, {{{on(kX.base_table(), "x")}}}), std::nullopt);
    CHECK(f.x_pullbacks[0].to_string() == "-y + y^2");
    CHECK(f.eta_pullbacks[0].is_zero());

    // Curved target: T_{12} = 1 gives x = y + th1 th2 (the quadratic correction needs two T's).
    ComponentMap t;
    t.emplace(OddIndex{0, 1}, SuperPoly(component_table(M), 1));
    const auto g = section_to_morphism(make_section(M, N, base, {t}, {{}}),
                                       TorsionFreeConnection(kX, {{{on(kX.base_table(), "x")}}}), std::nullopt);
    CHECK(g.x_pullbacks[0].to_string() == "-y + y^2 + th1*th2");

    CHECK_THROWS_AS(make_section(M, N, base, {t}, {t}), ParityError);
    CHECK_THROWS_AS(make_section(M, N, base, {{{OddIndex{1, 0}, SuperPoly(component_table(M), 1)}}}, {{}}), ShapeError);
    CHECK_THROWS_AS(make_section(M, N, base, {{{OddIndex{0, 5}, SuperPoly(component_table(M), 1)}}}, {{}}), ShapeError);
  }

  TEST_CASE("round trip with a constant connection and four odd generators") {
    const auto M = pres(kY, {"th1", "th2", "th3", "th4"});
    const auto N = pres(kX, {"eta"});
    const TorsionFreeConnection g(kX, {{{SuperPoly(kX.base_table(), make_scalar(3, 2))}}});
    const BundleConnection a(kX, FiberGenerators{{"eta"}, {1}}, {{{on(kX.base_table(), "x")}}});
    const TablePtr S = source_table(M);
    const auto f = make_morphism(M, N, {on(S, "y + th1*th2 + y*th3*th4 - 2*th1*th2*th3*th4")},
                                 {on(S, "th1 + y*th1*th2*th4 + th2*th3*th4")});
    const auto s = morphism_to_section(f, g, a);
    CHECK(check_even_degree(s));
    CHECK(section_to_morphism(s, g, a) == f);
    CHECK(morphism_to_section(section_to_morphism(s, g, a), g, a) == s);
  }

  TEST_CASE("check_even_degree") {
    const auto M = pres(kY, {"th1", "th2"});
    const auto N = pres(kX, {"eta"});
    const auto base = {on(kY.base_table(), "y")};
    const SuperPoly one(component_table(M), 1);
    CHECK(check_even_degree(make_section(M, N, base, {{{OddIndex{0, 1}, one}}}, {{}})));
    CHECK_FALSE(check_even_degree(make_section(M, N, base, {{}}, {{{OddIndex{}, one}}}, ParityMode::all)));
    CHECK(check_even_degree(make_section(M, N, base, {{}}, {{}})));
  }

  TEST_CASE("bijection on random morphisms") {
    Rng rng(21);
    for (int trial = 0; trial < 25; ++trial) {
      const auto M = random_presentation(rng, "M", "y", "th", 2, 3);
      const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
      const auto g = random_connection(rng, N.chart, linear());
      const auto a = random_bundle(rng, N);
      const auto f = random_morphism(rng, M, N);
      const SectionCorrespondence corr(N, g, a, correspondence_order(M, {}));
      const auto s = corr.to_section(f);
      CHECK(check_even_degree(s));
      CHECK(corr.to_morphism(s) == f);
      CHECK(corr.to_section(corr.to_morphism(s)) == s);
    }
  }

  TEST_CASE("connection change acts on sections fixing the base map") {
    Rng rng(22);
    for (int trial = 0; trial < 15; ++trial) {
      const auto M = random_presentation(rng, "M", "y", "th", 2, 3);
      const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
      const int k = correspondence_order(M, {});
      const SectionCorrespondence c0(N, random_connection(rng, N.chart, linear()), random_bundle(rng, N), k);
      const SectionCorrespondence c1(N, random_connection(rng, N.chart, linear()), random_bundle(rng, N), k);
      const auto f = random_morphism(rng, M, N);
      const auto s0 = c0.to_section(f);
      const auto s1 = c1.to_section(c0.to_morphism(s0));
      CHECK(s1.base_map == s0.base_map);
      CHECK(check_even_degree(s1));
      CHECK(c1.to_morphism(s1) == f);
      CHECK(c0.to_section(c1.to_morphism(s1)) == s0);
    }
  }

  TEST_CASE("parameters give sections of both parities") {
    Rng rng(23);
    int odd_tangent = 0;
    int even_fiber = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto M = random_presentation(rng, "M", "y", "th", 2, 2);
      const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
      const std::vector<std::string> params = trial % 2 ? std::vector<std::string>{"e1"} : std::vector<std::string>{"e1", "e2"};
      const auto g = random_connection(rng, N.chart, linear());
      const auto a = random_bundle(rng, N);
      const auto f = random_morphism(rng, M, N, params);
      const auto s = morphism_to_section(f, g, a);
      CHECK(s.mode == ParityMode::all);
      for (const auto& t : s.tangent)
        for (const auto& [key, c] : t) odd_tangent += key.size() % 2;
      for (const auto& t : s.fiber)
        for (const auto& [key, c] : t) even_fiber += 1 - static_cast<int>(key.size() % 2);
      CHECK(section_to_morphism(s, g, a) == f);
    }
    CHECK(odd_tangent > 0);
    CHECK(even_fiber > 0);
  }

  TEST_CASE("m = 0 tangent component must be nilpotent") {
    const auto M = pres(kY, {"th"});
    const auto N = pres(kX, {});
    const TablePtr C = component_table(M, {"e"});
    const auto s = make_section(M, N, {on(kY.base_table(), "y")}, {{{OddIndex{}, SuperPoly(C, 1)}}}, {}, ParityMode::all, {"e"});
    CHECK_THROWS_AS(section_to_morphism(s, TorsionFreeConnection::flat(kX), std::nullopt), DomainError);
  }

  TEST_CASE("compose") {
    Rng rng(24);
    const auto M = pres(kY, {"th1", "th2"});
    const auto N = pres(kX, {"eta"});
    const TablePtr S = source_table(M);
    const auto f = make_morphism(M, N, {on(S, "y^2 + th1*th2")}, {on(S, "th1 - y*th2")});
    CHECK(compose(identity_morphism(N), f) == f);
    CHECK(compose(f, identity_morphism(M)) == f);
    // Brute force: (g o f)*(x) = g*(x) with y -> f*(x), th -> f*(eta).
    const auto P = pres(make_chart("P", {"z"}), {"ze"});
    const TablePtr NS = source_table(N);
    const auto g = make_morphism(N, P, {on(NS, "x^2 + x*eta*eta + 1")}, {on(NS, "x*eta")});
    const auto gf = compose(g, f);
    CHECK(gf.x_pullbacks[0].to_string() == "1 + y^4 + 2*y^2*th1*th2");
    CHECK(gf.eta_pullbacks[0].to_string() == "y^2*th1 - y^3*th2");
    CHECK_THROWS_AS(compose(f, g), MismatchError);

    for (int trial = 0; trial < 10; ++trial) {
      const auto A = random_presentation(rng, "A", "a", "al", 2, 2);
      const auto B = random_presentation(rng, "B", "b", "be", 2, 2);
      const auto C = random_presentation(rng, "C", "c", "ga", 2, 2);
      const auto D = random_presentation(rng, "D", "d", "de", 2, 2);
      const auto h1 = random_morphism(rng, A, B);
      const auto h2 = random_morphism(rng, B, C);
      const auto h3 = random_morphism(rng, C, D);
      CHECK(compose(h3, compose(h2, h1)) == compose(compose(h3, h2), h1));
    }
  }

  TEST_CASE("diagonal vanishing") {
    const auto M = pres(kY, {"th1", "th2"});
    const auto N = pres(kX, {});
    const TablePtr S = source_table(M);
    const TablePtr D = diagonal_table(kX);
    const auto f = make_morphism(M, N, {on(S, "y + y^2*th1*th2")}, {});
    CHECK(diagonal_vanishing_check(f, on(D, "(x' - x)^3")).is_zero());
    CHECK(diagonal_vanishing_check(f, SuperPoly(D)).is_zero());
    CHECK(diagonal_vanishing_check(f, on(D, "x' - x")).to_string() == "y^2*th1*th2");

    Rng rng(25);
    for (int trial = 0; trial < 15; ++trial) {
      const auto Ms = random_presentation(rng, "M", "y", "th", 2, 4);
      const auto Ns = random_presentation(rng, "N", "x", "eta", 2, 1);
      const auto h = random_morphism(rng, Ms, Ns);
      const int k = static_cast<int>(Ms.odd_rank());
      const TablePtr Dn = diagonal_table(Ns.chart);
      // Products of k+1 generators x'^i - x^i of the diagonal ideal.
      SuperPoly prod(Dn, 1);
      for (int j = 0; j <= k; ++j) {
        const auto& c = Ns.chart.coords[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(Ns.chart.dim()) - 1))];
        prod = prod * (SuperPoly::generator(Dn, primed_name(c)) - SuperPoly::generator(Dn, c));
      }
      CHECK(diagonal_vanishing_check(h, prod).is_zero());
    }
  }

  TEST_CASE("curry examples") {
    const auto ZM = make_presentation(make_chart("ZM", {"z", "y"}), {"la", "th"});
    const auto N = pres(kX, {});
    const SuperPoly c(component_table(ZM), make_scalar(5));
    const auto s = make_section(ZM, N, {on(ZM.chart.base_table(), "z + y")}, {{{OddIndex{0, 1}, c}}}, {});
    const auto cur = curry(s, ProductSplit{{"z"}, {"la"}});
    CHECK(cur.tangent[0].at(BlockIndex{{0}, {0}}) == c);
    CHECK(uncurry(cur) == s);

    // Declared order th before la: la th = -th la.
    const auto MZ = make_presentation(make_chart("ZM", {"z", "y"}), {"th", "la"});
    const auto s2 = make_section(MZ, N, {on(MZ.chart.base_table(), "z + y")}, {{{OddIndex{0, 1}, c}}}, {});
    CHECK(curry(s2, ProductSplit{{"z"}, {"la"}}).tangent[0].at(BlockIndex{{0}, {0}}) == Scalar(-1) * c);

    // Z a point: nothing moves.
    const auto plain = curry(s, ProductSplit{});
    CHECK(plain.tangent[0].at(BlockIndex{{}, {0, 1}}) == c);
    CHECK_THROWS_AS(curry(s, ProductSplit{{"w"}, {}}), ShapeError);
    CHECK_THROWS_AS(curry(s, ProductSplit{{}, {"mu"}}), ShapeError);
  }

  TEST_CASE("curry round trip and agreement with the parametrised route") {
    Rng rng(26);
    for (int trial = 0; trial < 15; ++trial) {
      const std::size_t zdim = static_cast<std::size_t>(rng.uniform(0, 1));
      const std::size_t ydim = static_cast<std::size_t>(rng.uniform(1, 2));
      std::vector<std::string> coords;
      for (std::size_t i = 1; i <= zdim; ++i) coords.push_back("z" + std::to_string(i));
      for (std::size_t i = 1; i <= ydim; ++i) coords.push_back("y" + std::to_string(i));
      const int nl = rng.uniform(0, 2);
      const int nt = rng.uniform(0, 2);
      std::vector<std::string> la, th;
      for (int i = 1; i <= nl; ++i) la.push_back("la" + std::to_string(i));
      for (int i = 1; i <= nt; ++i) th.push_back("th" + std::to_string(i));
      std::vector<std::string> odd = la;
      odd.insert(odd.end(), th.begin(), th.end());
      const Chart chart = make_chart("ZM", coords);
      const auto product = make_presentation(chart, odd);
      const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
      const auto g = random_connection(rng, N.chart, linear());
      const auto a = random_bundle(rng, N);
      const auto G = random_morphism(rng, product, N);
      const ProductSplit split{{coords.begin(), coords.begin() + static_cast<long>(zdim)}, la};

      const auto s = morphism_to_section(G, g, a);
      const auto cur = curry(s, split);
      CHECK(uncurry(cur) == s);

      // The same data read as an M -> N morphism parametrised by the odd generators of Z.
      const auto M = make_presentation(chart, th);
      const auto Gp = make_morphism(M, N, G.x_pullbacks, G.eta_pullbacks, la);
      const auto sp = morphism_to_section(Gp, g, a);
      auto blocks = [&](const std::vector<ComponentMap>& all) {
        std::vector<BlockMap> out;
        for (const auto& comps : all) {
          BlockMap b;
          for (const auto& [key, v] : comps)
            for (const auto& [mono, coeff] : v.terms()) {
              OddIndex A;
              for (int i = 0; i < nl; ++i)
                if (mono.odd >> i & 1) A.push_back(i);
              Monomial m = mono;
              m.odd = 0;
              auto it = b.try_emplace(BlockIndex{A, key}, SuperPoly(product.chart.base_table())).first;
              it->second.add_term(m, coeff);
            }
          out.push_back(std::move(b));
        }
        return out;
      };
      CHECK(blocks(sp.tangent) == cur.tangent);
      CHECK(blocks(sp.fiber) == cur.fiber);
    }
  }
}
