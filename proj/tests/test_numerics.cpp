#include <doctest.h>

#include <cmath>

#include "superjet/errors.hpp"
#include "superjet/expr.hpp"
#include "superjet/numerics.hpp"
#include "superjet/sampling.hpp"

using namespace superjet;

namespace {

const Chart kLine = make_chart("N", {"x"});
const Chart kPlane = make_chart("N", {"x1", "x2"});

TorsionFreeConnection constant_line(double c) {
  return TorsionFreeConnection(kLine, {{{parse_poly(std::to_string(static_cast<int>(c * 1000)) + "/1000", kLine.base_table())}}});
}

TorsionFreeConnection small_plane(Rng& rng) {
  ConnectionSampling s;
  s.max_degree = 1;
  return interpolate_connection(TorsionFreeConnection::flat(kPlane), random_connection(rng, kPlane, s), make_scalar(1, 10));
}

SampleGrid grid(int n, std::size_t dim) {
  SampleGrid g;
  for (int k = 0; k < n; ++k) g.points.push_back(Vec(dim, -1.0 + 2.0 * k / std::max(1, n - 1)));
  return g;
}

std::vector<Vec> random_vectors(Rng& rng, std::size_t count, std::size_t dim, double scale) {
  std::vector<Vec> out(count, Vec(dim));
  for (auto& v : out)
    for (auto& x : v) x = rng.real(-scale, scale);
  return out;
}

Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.size(), Vec(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

double mat_distance(const Mat& a, const Mat& b) { return sup_distance(a, b); }

Mat identity(std::size_t r) {
  Mat m(r, Vec(r, 0.0));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("mapping-space-numerics") {
  TEST_CASE("exp_numeric examples") {
    const Vec flat = exp_numeric(TorsionFreeConnection::flat(kPlane), {0.25, -1.0}, {0.5, 2.0}, 8);
    CHECK(flat[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(flat[1] == doctest::Approx(1.0).epsilon(1e-15));
    for (double c : {0.5, 1.0, -0.7}) {
      for (double xi : {0.3, -0.4, 0.8}) {
        const double expected = std::log(1.0 + c * xi) / c;
        CHECK(std::abs(exp_numeric(constant_line(c), {0.0}, {xi}, 200)[0] - expected) < 1e-8);
      }
    }
    CHECK(exp_numeric(constant_line(1.0), {0.3}, {0.0}, 10)[0] == 0.3);
    CHECK_THROWS_AS(exp_numeric(constant_line(1.0), {0.0}, {1.0}, 0), DomainError);
    CHECK_THROWS_AS(exp_numeric(constant_line(1.0), {0.0, 1.0}, {1.0}, 10), ShapeError);
    CHECK_THROWS_AS(exp_numeric(constant_line(1.0), {0.0}, {1e200}, 10), NumericError);
  }

  TEST_CASE("exp_numeric is fourth order") {
    const double c = 1.0, xi = 0.8;
    const double exact = std::log(1.0 + c * xi) / c;
    const double e1 = std::abs(exp_numeric(constant_line(c), {0.0}, {xi}, 10)[0] - exact);
    const double e2 = std::abs(exp_numeric(constant_line(c), {0.0}, {xi}, 20)[0] - exact);
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
  }

  TEST_CASE("variational Jacobian matches finite differences") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      const NumericConnection g(small_plane(rng));
      const Vec x = random_vectors(rng, 1, 2, 0.5)[0];
      const Vec v = random_vectors(rng, 1, 2, 0.3)[0];
      const auto e = exp_with_jacobian(g, x, v, 100);
      for (std::size_t c = 0; c < 2; ++c) {
        Vec vp = v, vm = v;
        vp[c] += 1e-6;
        vm[c] -= 1e-6;
        const Vec a = exp_numeric(g, x, vp, 100), b = exp_numeric(g, x, vm, 100);
        for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs((a[i] - b[i]) / 2e-6 - e.jacobian[i][c]) < 1e-6);
      }
    }
  }

  TEST_CASE("chart_psi") {
    Rng rng(32);
    const auto g = small_plane(rng);
    const DiscreteMap f{grid(4, 2), random_vectors(rng, 4, 2, 1.0)};
    const DiscreteSection zero{f.grid, std::vector<Vec>(4, Vec(2, 0.0))};
    CHECK(sup_distance(chart_psi(f, zero, g, 50).values, f.values) == 0.0);
    const DiscreteSection s{f.grid, random_vectors(rng, 4, 2, 0.5)};
    const auto flat = chart_psi(f, s, TorsionFreeConnection::flat(kPlane), 16);
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < 2; ++i) CHECK(flat.values[k][i] == doctest::Approx(f.values[k][i] + s.vectors[k][i]));
    DiscreteSection half = s;
    for (auto& v : half.vectors)
      for (auto& x : v) x *= 0.5;
    const auto mid = chart_psi(f, half, TorsionFreeConnection::flat(kPlane), 16);
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < 2; ++i)
        CHECK(mid.values[k][i] == doctest::Approx(0.5 * (f.values[k][i] + flat.values[k][i])));
    CHECK_THROWS_AS(chart_psi(f, DiscreteSection{grid(3, 2), random_vectors(rng, 3, 2, 1.0)}, g, 10), MismatchError);
  }

  TEST_CASE("chart_phi") {
    Rng rng(33);
    const DiscreteMap f{grid(5, 1), random_vectors(rng, 5, 1, 1.0)};
    const auto g = constant_line(0.7);
    const auto same = chart_phi(f, f, g, 100);
    CHECK(same.all_converged());
    for (const auto& v : same.section.vectors) CHECK(v[0] == 0.0);

    const DiscreteMap h{f.grid, random_vectors(rng, 5, 1, 1.0)};
    const auto flat = chart_phi(f, h, TorsionFreeConnection::flat(kLine), 10);
    for (std::size_t k = 0; k < 5; ++k) CHECK(flat.section.vectors[k][0] == doctest::Approx(h.values[k][0] - f.values[k][0]));

    for (int trial = 0; trial < 10; ++trial) {
      const DiscreteSection s{f.grid, random_vectors(rng, 5, 1, 0.4)};
      const auto back = chart_phi(f, chart_psi(f, s, g, 200), g, 200);
      CHECK(back.all_converged());
      CHECK(sup_distance(back.section.vectors, s.vectors) < 1e-6);
    }

    NewtonOptions few;
    few.max_iterations = 1;
    const DiscreteMap far{f.grid, std::vector<Vec>(5, Vec{40.0})};
    const auto res = chart_phi(DiscreteMap{f.grid, std::vector<Vec>(5, Vec{0.0})}, far, constant_line(1.0), 50, few);
    CHECK_FALSE(res.all_converged());
    CHECK(res.status[0].iterations == 1);
    CHECK(res.status[0].residual > 1.0);
  }

  TEST_CASE("chart round trips and transitions in the plane") {
    Rng rng(34);
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = small_plane(rng);
      const DiscreteMap f{grid(4, 2), random_vectors(rng, 4, 2, 0.5)};
      const DiscreteSection s{f.grid, random_vectors(rng, 4, 2, 0.2)};
      const auto m = chart_psi(f, s, g, 100);
      const auto back = chart_phi(f, m, g, 100);
      CHECK(back.all_converged());
      CHECK(sup_distance(back.section.vectors, s.vectors) < 1e-6);
      CHECK(sup_distance(chart_psi(f, back.section, g, 100).values, m.values) < 1e-6);

      // Transition maps between the charts at f and at a nearby h.
      const DiscreteMap h = chart_psi(f, DiscreteSection{f.grid, random_vectors(rng, 4, 2, 0.1)}, g, 100);
      const DiscreteSection u{f.grid, random_vectors(rng, 4, 2, 0.1)};
      const auto over_f = chart_phi(f, chart_psi(h, u, g, 100), g, 100);
      REQUIRE(over_f.all_converged());
      const auto over_h = chart_phi(h, chart_psi(f, over_f.section, g, 100), g, 100);
      REQUIRE(over_h.all_converged());
      CHECK(sup_distance(over_h.section.vectors, u.vectors) < 1e-5);
    }
  }

  TEST_CASE("parallel_transport") {
    const BundleConnection zero = BundleConnection::trivial(kPlane, FiberGenerators{{"v1", "v2"}, {1, 1}});
    const TimedPath path{{0.0, 0.5, 1.0}, {{0.0, 0.0}, {0.3, 1.0}, {1.0, -1.0}}};
    CHECK(parallel_transport(zero, path, {2.0, -3.0}) == Vec{2.0, -3.0});

    const double a = 0.8;
    const BundleConnection con(kLine, FiberGenerators{{"v"}, {1}}, {{{parse_poly("4/5", kLine.base_table())}}});
    const TimedPath line{{0.0, 1.0}, {{0.2}, {1.5}}};
    CHECK(std::abs(parallel_transport(con, line, {2.0})[0] - 2.0 * std::exp(-a * 1.3)) < 1e-8);

    Rng rng(35);
    ConnectionSampling cs;
    cs.max_degree = 1;
    const auto A = random_bundle_connection(rng, kPlane, FiberGenerators{{"v1", "v2"}, {1, 1}}, cs);
    TimedPath there, back;
    for (int k = 0; k <= 10; ++k) {
      const double t = k / 10.0;
      there.times.push_back(t);
      there.points.push_back({std::sin(t), t * t});
    }
    for (int k = 10; k >= 0; --k) {
      back.times.push_back(there.times[static_cast<std::size_t>(k)]);
      back.points.push_back(there.points[static_cast<std::size_t>(k)]);
    }
    const Vec v0{0.7, -1.1};
    const Vec w = parallel_transport(A, there, v0);
    const Vec r = parallel_transport(A, back, w);
    CHECK(std::abs(r[0] - v0[0]) < 1e-8);
    CHECK(std::abs(r[1] - v0[1]) < 1e-8);

    // Linearity and concatenation.
    const Vec e1 = parallel_transport(A, there, {1.0, 0.0});
    const Vec e2 = parallel_transport(A, there, {0.0, 1.0});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(w[i] - (0.7 * e1[i] - 1.1 * e2[i])) < 1e-12);
    TimedPath first{{there.times.begin(), there.times.begin() + 6}, {there.points.begin(), there.points.begin() + 6}};
    TimedPath second{{there.times.begin() + 5, there.times.end()}, {there.points.begin() + 5, there.points.end()}};
    const Vec joined = parallel_transport(A, second, parallel_transport(A, first, v0));
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(joined[i] - w[i]) < 1e-7);

    CHECK_THROWS_AS(parallel_transport(A, TimedPath{{0.0}, {{0.0, 0.0}}}, v0), ShapeError);
    CHECK_THROWS_AS(parallel_transport(A, TimedPath{{0.0, 0.0}, {{0.0, 0.0}, {1.0, 1.0}}}, v0), ShapeError);
  }

  TEST_CASE("trivialize_over_chart") {
    Rng rng(36);
    const auto g = small_plane(rng);
    const FiberGenerators fib{{"v1", "v2"}, {1, 1}};
    ConnectionSampling cs;
    cs.max_degree = 1;
    const auto A = interpolate_connection(BundleConnection::trivial(kPlane, fib),
                                          random_bundle_connection(rng, kPlane, fib, cs), make_scalar(1, 4));
    const DiscreteMap f{grid(3, 2), random_vectors(rng, 3, 2, 0.5)};
    const DiscreteSection zero{f.grid, std::vector<Vec>(3, Vec(2, 0.0))};
    for (const auto& m : trivialize_over_chart(f, zero, g, A, 0.0, 1.0, 50)) CHECK(mat_distance(m, identity(2)) == 0.0);
    const DiscreteSection eta{f.grid, random_vectors(rng, 3, 2, 0.4)};
    for (const auto& m : trivialize_over_chart(f, eta, g, BundleConnection::trivial(kPlane, fib), 0.0, 1.0, 50))
      CHECK(mat_distance(m, identity(2)) == 0.0);
    const auto full = trivialize_over_chart(f, eta, g, A, 0.0, 1.0, 200);
    const auto a = trivialize_over_chart(f, eta, g, A, 0.0, 0.5, 200);
    const auto b = trivialize_over_chart(f, eta, g, A, 0.5, 1.0, 200);
    for (std::size_t k = 0; k < 3; ++k) CHECK(mat_distance(matmul(b[k], a[k]), full[k]) < 1e-7);
    // Agrees with transport along the sampled geodesic.
    TimedPath path;
    for (int j = 0; j <= 100; ++j) {
      const double t = j / 100.0;
      path.times.push_back(t);
      path.points.push_back(exp_numeric(g, f.values[0], {t * eta.vectors[0][0], t * eta.vectors[0][1]}, 200));
    }
    const Vec col = parallel_transport(A, path, {1.0, 0.0});
    CHECK(std::abs(col[0] - full[0][0][0]) < 1e-4);
    CHECK(std::abs(col[1] - full[0][1][0]) < 1e-4);
  }

  TEST_CASE("tangent_check") {
    Rng rng(37);
    const DiscreteMap f{grid(4, 2), random_vectors(rng, 4, 2, 0.5)};
    const DiscreteSection eta{f.grid, random_vectors(rng, 4, 2, 1.0)};
    CHECK(sup_distance(tangent_check(f, eta, TorsionFreeConnection::flat(kPlane), 1e-3, 4).vectors, eta.vectors) < 1e-12);
    const DiscreteMap f1{grid(4, 1), random_vectors(rng, 4, 1, 0.5)};
    const DiscreteSection eta1{f1.grid, random_vectors(rng, 4, 1, 1.0)};
    CHECK(sup_distance(tangent_check(f1, eta1, constant_line(1.3), 1e-4, 50).vectors, eta1.vectors) < 1e-6);
    const DiscreteSection zero{f.grid, std::vector<Vec>(4, Vec(2, 0.0))};
    CHECK(sup_distance(tangent_check(f, zero, small_plane(rng), 1e-4, 50).vectors, zero.vectors) == 0.0);
    CHECK_THROWS_AS(tangent_check(f, zero, small_plane(rng), 0.0, 50), DomainError);
  }
}
