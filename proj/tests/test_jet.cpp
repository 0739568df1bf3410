#include <doctest.h>

#include "superjet/errors.hpp"
#include "superjet/expr.hpp"
#include "superjet/jet.hpp"
#include "superjet/random.hpp"

using namespace superjet;

namespace {

const Chart kLine = make_chart("M", {"x"});
const Chart kPlane = make_chart("M", {"x1", "x2"});

SuperPoly base_poly(const Chart& c, const char* s) { return parse_poly(s, c.base_table()); }

JetElement jet_from(const Chart& c, int k, const char* s) {
  return JetElement{c, k, JetBasis::jet, parse_poly(s, jet_table(c, k, JetBasis::jet))};
}

// Oracle for j^k(h): expand h(x + dx) by substitution and let the table truncate.
SuperPoly shifted(const SuperPoly& h, const Chart& c, int k) {
  const TablePtr t = jet_table(c, k, JetBasis::jet);
  Assignments a;
  for (const auto& x : c.coords)
    a.emplace(x, SuperPoly::generator(t, x) + SuperPoly::generator(t, jet_generator_name(x)));
  return substitute(embed(h, t), a, t);
}

}  // namespace

TEST_SUITE("jet-calculus") {
  TEST_CASE("jet_of_function examples") {
    CHECK(jet_of_function(base_poly(kLine, "x^2"), kLine, 2).value.to_string() == "x^2 + 2*x*dx + dx^2");
    CHECK(jet_of_function(base_poly(kLine, "7/3"), kLine, 4).value.to_string() == "7/3");
    CHECK(jet_of_function(base_poly(kPlane, "x1*x2"), kPlane, 2).value.to_string() ==
          "x1*x2 + x2*dx1 + x1*dx2 + dx1*dx2");
    CHECK_THROWS_AS(jet_of_function(base_poly(kLine, "x"), kLine, -1), DomainError);
  }

  TEST_CASE("jet_of_function agrees with the shifted-argument oracle") {
    Rng rng(21);
    for (int n = 0; n < 20; ++n) {
      const Chart& c = n % 2 ? kPlane : kLine;
      const int k = rng.uniform(0, 4);
      auto h = random_poly(rng, c.base_table(), {.terms = 4, .max_base_degree = 5});
      CHECK(jet_of_function(h, c, k).value == shifted(h, c, k));
    }
  }

  TEST_CASE("jet_of_function is multiplicative") {
    Rng rng(22);
    for (int n = 0; n < 20; ++n) {
      const int k = rng.uniform(1, 4);
      auto h = random_poly(rng, kPlane.base_table(), {.terms = 3, .max_base_degree = 3});
      auto g = random_poly(rng, kPlane.base_table(), {.terms = 3, .max_base_degree = 3});
      CHECK(jet_of_function(mul(h, g), kPlane, k).value ==
            multiply(jet_of_function(h, kPlane, k), jet_of_function(g, kPlane, k)).value);
    }
  }

  TEST_CASE("jet_change_of_coords examples") {
    const Chart y2 = make_chart("N", {"y1", "y2"});
    auto lin = jet_change_of_coords(JetElement{y2, 2, JetBasis::jet, parse_poly("dy1", jet_table(y2, 2, JetBasis::jet))},
                                    kPlane, {base_poly(kPlane, "x1 + 2*x2"), base_poly(kPlane, "3*x1 + 4*x2")});
    CHECK(lin.value.to_string() == "dx1 + 2*dx2");

    const Chart y1 = make_chart("N", {"y"});
    auto sq = jet_change_of_coords(JetElement{y1, 2, JetBasis::jet, parse_poly("dy", jet_table(y1, 2, JetBasis::jet))},
                                   kLine, {base_poly(kLine, "x^2")});
    CHECK(sq.value.to_string() == "2*x*dx + dx^2");

    CHECK_THROWS_AS(jet_change_of_coords(sq, kPlane, {base_poly(kPlane, "x1"), base_poly(kPlane, "x2")}), MismatchError);
  }

  TEST_CASE("coordinate changes compose along the composite map") {
    Rng rng(23);
    const Chart y = make_chart("Y", {"y1", "y2"});
    const Chart w = make_chart("W", {"w1", "w2"});
    for (int n = 0; n < 10; ++n) {
      const int k = rng.uniform(1, 3);
      // y = f(x), x = g(w); degree <= 2 components.
      std::vector<SuperPoly> f, g;
      for (int i = 0; i < 2; ++i) {
        f.push_back(random_poly(rng, kPlane.base_table(), {.terms = 3, .max_base_degree = 2}));
        g.push_back(random_poly(rng, w.base_table(), {.terms = 3, .max_base_degree = 2}));
      }
      JetElement j{y, k, JetBasis::jet, random_poly(rng, jet_table(y, k, JetBasis::jet), {.terms = 4})};
      // Brute force: the composite y = f(g(w)) by substitution.
      std::vector<SuperPoly> fg;
      for (const auto& fi : f)
        fg.push_back(substitute(fi, {{"x1", g[0]}, {"x2", g[1]}}, w.base_table()));
      auto stepwise = jet_change_of_coords(jet_change_of_coords(j, kPlane, f), w, g);
      auto direct = jet_change_of_coords(j, w, fg);
      CHECK(stepwise.value == direct.value);
    }
  }

  TEST_CASE("change along a unipotent map and back is the identity") {
    Rng rng(24);
    const Chart y = make_chart("Y", {"y1", "y2"});
    for (int n = 0; n < 10; ++n) {
      const int k = rng.uniform(1, 4);
      auto p = random_poly(rng, make_table({"x2"}), {.terms = 3, .max_base_degree = 3});
      auto p_y = substitute(p, {{"x2", SuperPoly::generator(y.base_table(), "y2")}}, y.base_table());
      auto p_x = embed(p, kPlane.base_table());
      // y = (x1 + p(x2), x2) with inverse x = (y1 - p(y2), y2).
      std::vector<SuperPoly> f{base_poly(kPlane, "x1") + p_x, base_poly(kPlane, "x2")};
      std::vector<SuperPoly> finv{parse_poly("y1", y.base_table()) - p_y, parse_poly("y2", y.base_table())};
      JetElement j{y, k, JetBasis::jet, random_poly(rng, jet_table(y, k, JetBasis::jet), {.terms = 5})};
      auto back = jet_change_of_coords(jet_change_of_coords(j, kPlane, f), y, finv);
      CHECK(back.value == j.value);
    }
  }

  TEST_CASE("pullback of a jet of a function is the jet of the pulled-back function") {
    Rng rng(25);
    const Chart y = make_chart("Y", {"y"});
    for (int n = 0; n < 10; ++n) {
      const int k = rng.uniform(1, 4);
      auto h = random_poly(rng, y.base_table(), {.terms = 3, .max_base_degree = 3});
      auto f = random_poly(rng, kLine.base_table(), {.terms = 2, .max_base_degree = 2});
      auto hf = substitute(h, {{"y", f}}, kLine.base_table());
      CHECK(jet_change_of_coords(jet_of_function(h, y, k), kLine, {f}).value == jet_of_function(hf, kLine, k).value);
    }
  }

  TEST_CASE("module_action examples") {
    CHECK(module_action(ModuleSide::first, base_poly(kLine, "x"), jet_from(kLine, 2, "dx")).value.to_string() == "x*dx");
    CHECK(module_action(ModuleSide::second, base_poly(kLine, "x"), jet_from(kLine, 1, "1")).value.to_string() == "x + dx");
    CHECK(module_action(ModuleSide::second, base_poly(kLine, "x^2"), jet_from(kLine, 2, "dx")).value.to_string() ==
          "x^2*dx + 2*x*dx^2");
  }

  TEST_CASE("mixed orders are refused") {
    CHECK_THROWS_AS(multiply(jet_from(kLine, 1, "dx"), jet_from(kLine, 2, "dx")), MismatchError);
  }

  TEST_CASE("diagonal_representative_to_jet examples") {
    auto d = diagonal_table(kLine);
    CHECK(diagonal_representative_to_jet(parse_poly("x' - x", d), kLine, 2).value.to_string() == "dx");
    CHECK(diagonal_representative_to_jet(parse_poly("(x' - x)^3", d), kLine, 2).value.is_zero());
    CHECK(diagonal_representative_to_jet(parse_poly("x*x'", d), kLine, 1).value.to_string() == "x^2 + x*dx");
  }

  TEST_CASE("the (k+1)-st power of the diagonal ideal maps to zero") {
    Rng rng(26);
    auto d = diagonal_table(kPlane);
    for (int n = 0; n < 15; ++n) {
      const int k = rng.uniform(0, 3);
      SuperPoly r = random_poly(rng, d, {.terms = 2, .max_base_degree = 2});
      for (int f = 0; f <= k; ++f) {
        SuperPoly linear(d);
        for (const auto& x : kPlane.coords)
          linear += mul(random_poly(rng, d, {.terms = 2, .max_base_degree = 1}),
                        SuperPoly::generator(d, primed_name(x)) - SuperPoly::generator(d, x));
        r = mul(r, linear);
      }
      CHECK(diagonal_representative_to_jet(r, kPlane, k).value.is_zero());
    }
  }
}
