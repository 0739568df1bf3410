#include <doctest.h>

#include "superjet/errors.hpp"
#include "superjet/expr.hpp"
#include "superjet/random.hpp"
#include "superjet/series.hpp"

using namespace superjet;

namespace {

TablePtr odd_table() { return make_table({}, {}, {"th1", "th2"}); }

SuperPoly P(const TablePtr& t, const char* s) { return parse_poly(s, t); }

// Table used by the randomized algebra laws.
TablePtr law_table() { return make_table({"x", "y"}, {"a", "b"}, {"t1", "t2", "t3"}, 3); }

SuperPoly homogeneous(Rng& rng, const TablePtr& t, int parity) {
  RandomPolyOptions o;
  o.terms = rng.uniform(1, 4);
  o.parity = parity;
  return random_poly(rng, t, o);
}

int sign_of(int pa, int pb) { return (pa * pb) % 2 ? -1 : 1; }

}  // namespace

TEST_SUITE("graded-core") {
  TEST_CASE("odd generators are nilpotent and anticommute") {
    auto t = odd_table();
    auto th1 = SuperPoly::generator(t, "th1");
    auto th2 = SuperPoly::generator(t, "th2");
    CHECK(mul(th1, th1).is_zero());
    CHECK(mul(th1, th2).to_string() == "th1*th2");
    CHECK(mul(th2, th1).to_string() == "-th1*th2");
  }

  TEST_CASE("formal generators are truncated") {
    auto t = make_table({}, {"xi"}, {}, 3);
    auto xi = SuperPoly::generator(t, "xi");
    CHECK(mul(xi, power(xi, 3)).is_zero());
    CHECK(mul(xi, power(xi, 2)).to_string() == "xi^3");
  }

  TEST_CASE("mul rejects mismatched tables") {
    auto a = SuperPoly::generator(make_table({"x"}), "x");
    auto b = SuperPoly::generator(make_table({"y"}), "y");
    CHECK_THROWS_AS(mul(a, b), MismatchError);
  }

  TEST_CASE("substitute: binomial shift") {
    auto t = make_table({"x"}, {"dx"}, {}, 2);
    auto p = P(t, "x^2");
    auto r = substitute(p, {{"x", P(t, "x + dx")}});
    CHECK(r.to_string() == "x^2 + 2*x*dx + dx^2");
  }

  TEST_CASE("substitute: transposition of odd generators") {
    auto t = odd_table();
    auto r = substitute(P(t, "th1*th2"), {{"th1", P(t, "th2")}, {"th2", P(t, "th1")}});
    CHECK(r.to_string() == "-th1*th2");
  }

  TEST_CASE("substitute: between tables") {
    // p = x*xi over (x; xi), with xi -> f(y) th1 th2 and x -> f0(y); here f = y + 1, f0 = y^2.
    auto src = make_table({"x"}, {"xi"}, {}, 2);
    auto dst = make_table({"y"}, {}, {"th1", "th2"});
    auto r = substitute(P(src, "x*xi"), {{"xi", P(dst, "(y+1)*th1*th2")}, {"x", P(dst, "y^2")}}, dst);
    // Direct expansion: y^2 * (y + 1) th1 th2.
    CHECK(r == P(dst, "y^3*th1*th2 + y^2*th1*th2"));
  }

  TEST_CASE("substitute rejects parity violations") {
    auto t = make_table({"x"}, {}, {"th1", "th2"});
    CHECK_THROWS_AS(substitute(P(t, "x"), {{"x", P(t, "th1")}}), ParityError);
    CHECK_THROWS_AS(substitute(P(t, "th1"), {{"th1", P(t, "x")}}), ParityError);
    CHECK_THROWS_AS(substitute(P(t, "x"), {{"z", P(t, "x")}}), UnknownGeneratorError);
  }

  TEST_CASE("derive: left derivative and ordinary derivatives") {
    auto t = odd_table();
    CHECK(derive(P(t, "th1*th2"), "th1").to_string() == "th2");
    CHECK(derive(P(t, "th1*th2"), "th2").to_string() == "-th1");
    auto u = make_table({"x"}, {"xi"}, {}, 3);
    CHECK(derive(P(u, "x*xi^2"), "xi").to_string() == "2*x*xi");
    CHECK_THROWS_AS(derive(P(u, "x"), "q"), UnknownGeneratorError);
  }

  TEST_CASE("series_invert examples") {
    auto t1 = make_table({"x"}, {"xi"}, {}, 1);
    CHECK(series_invert({P(t1, "xi")})[0].to_string() == "xi");

    auto t2 = make_table({"x"}, {"xi"}, {}, 2);
    // v(w) = w - 1/2 x w^2 = xi + 1/2 x xi^2 - 1/2 x xi^2 = xi mod xi^3.
    CHECK(series_invert({P(t2, "xi - 1/2*x*xi^2")})[0] == P(t2, "xi + 1/2*x*xi^2"));

    auto t3 = make_table({}, {"xi"}, {}, 3);
    // Lagrange reversion of xi + xi^2: coefficients (-1)^(n-1) Catalan(n-1).
    CHECK(series_invert({P(t3, "xi + xi^2")})[0] == P(t3, "xi - xi^2 + 2*xi^3"));

    CHECK_THROWS_AS(series_invert({P(t3, "2*xi")}), DomainError);
    CHECK_THROWS_AS(series_invert({P(t3, "xi + 1")}), DomainError);
  }

  TEST_CASE("canonical printing") {
    auto t = make_table({"x"}, {"xi"}, {}, 2);
    CHECK(P(t, "xi^2 - x^2*xi^2 + 2*x*xi + x^2").to_string() == "x^2 + 2*x*xi + xi^2 - x^2*xi^2");
    CHECK(SuperPoly(t).to_string() == "0");
    CHECK(P(odd_table(), "th2*th1").to_string() == "-th1*th2");
  }

  TEST_CASE("supercommutativity, associativity, distributivity") {
    Rng rng(11);
    auto t = law_table();
    for (int n = 0; n < 60; ++n) {
      const int pa = rng.uniform(0, 1), pb = rng.uniform(0, 1);
      auto a = homogeneous(rng, t, pa);
      auto b = homogeneous(rng, t, pb);
      auto c = random_poly(rng, t);
      CHECK(mul(a, b) == Scalar(sign_of(pa, pb)) * mul(b, a));
      CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
      CHECK(mul(a, b + c) == mul(a, b) + mul(a, c));
    }
  }

  TEST_CASE("graded Leibniz rule") {
    Rng rng(12);
    auto t = law_table();
    for (int n = 0; n < 40; ++n) {
      const int pa = rng.uniform(0, 1), pb = rng.uniform(0, 1);
      auto a = homogeneous(rng, t, pa);
      auto b = homogeneous(rng, t, pb);
      for (const char* g : {"x", "t1", "t3"}) {
        const int pg = t->lookup(g).kind == GenKind::odd ? 1 : 0;
        CHECK(derive(mul(a, b), g) == mul(derive(a, g), b) + Scalar(sign_of(pg, pa)) * mul(a, derive(b, g)));
      }
      // Formal derivatives obey Leibniz below the top truncation degree.
      auto below_top = [&](const SuperPoly& p) {
        return p.filter([&](const Monomial& m) { return m.formal_degree() < t->truncation(); });
      };
      CHECK(below_top(derive(mul(a, b), "a")) ==
            below_top(mul(derive(a, "a"), b) + mul(a, derive(b, "a"))));
    }
  }

  TEST_CASE("substitute is an algebra homomorphism") {
    Rng rng(13);
    auto t = law_table();
    for (int n = 0; n < 30; ++n) {
      RandomPolyOptions nil;
      nil.min_formal_degree = 1;
      nil.parity = 0;
      RandomPolyOptions odd;
      odd.parity = 1;
      Assignments as{{"x", random_poly(rng, t, {.terms = 2, .parity = 0})},
                     {"a", random_poly(rng, t, nil)},
                     {"t2", random_poly(rng, t, odd)}};
      auto a = random_poly(rng, t);
      auto b = random_poly(rng, t);
      CHECK(substitute(mul(a, b), as) == mul(substitute(a, as), substitute(b, as)));
    }
  }

  TEST_CASE("series_invert is a two-sided inverse") {
    Rng rng(14);
    auto t = make_table({"x"}, {"a", "b"}, {}, 4);
    for (int n = 0; n < 20; ++n) {
      RandomPolyOptions high;
      high.min_formal_degree = 2;
      std::vector<SuperPoly> v{SuperPoly::generator(t, "a") + random_poly(rng, t, high),
                               SuperPoly::generator(t, "b") + random_poly(rng, t, high)};
      auto w = series_invert(v);
      Assignments vw{{"a", w[0]}, {"b", w[1]}};
      Assignments wv{{"a", v[0]}, {"b", v[1]}};
      for (int i = 0; i < 2; ++i) {
        CHECK(substitute(v[static_cast<std::size_t>(i)], vw) == SuperPoly::generator(t, t->formal()[static_cast<std::size_t>(i)]));
        CHECK(substitute(w[static_cast<std::size_t>(i)], wv) == SuperPoly::generator(t, t->formal()[static_cast<std::size_t>(i)]));
      }
    }
  }
}
