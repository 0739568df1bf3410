#include "superjet/verify.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include "superjet/document.hpp"
#include "superjet/errors.hpp"
#include "superjet/expr.hpp"
#include "superjet/numerics.hpp"
#include "superjet/sampling.hpp"

namespace superjet {

namespace {

std::uint64_t seed_for(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h ^ (seed * 0x9E3779B97F4A7C15ull);
}

// Runs `cases` trials; a trial fails by returning a message or by throwing.
CheckOutcome tally(const char* suite, const char* name, int cases,
                   const std::function<std::string(int trial)>& trial) {
  CheckOutcome out{suite, name, cases, 0, {}};
  for (int i = 0; i < cases; ++i) {
    std::string msg;
    try {
      msg = trial(i);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    if (!msg.empty()) {
      if (out.failures++ == 0) out.detail = "case " + std::to_string(i) + ": " + msg;
    }
  }
  return out;
}

std::size_t pick(Rng& rng, int lo, int hi) { return static_cast<std::size_t>(rng.uniform(lo, hi)); }

ConnectionSampling degree(int d) {
  ConnectionSampling s;
  s.max_degree = d;
  return s;
}

SuperManifoldPresentation random_presentation(Rng& rng, const std::string& name, const std::string& coord,
                                              const std::string& odd, int max_dim, int max_rank) {
  const Chart c = numbered_chart(name, coord, pick(rng, 1, max_dim));
  return make_presentation(c, numbered_fibers(odd, pick(rng, 0, max_rank)).names);
}

std::optional<BundleConnection> random_bundle(Rng& rng, const SuperManifoldPresentation& n) {
  if (n.odd_rank() == 0) return std::nullopt;
  return random_bundle_connection(rng, n.chart, n.fibers());
}

// Random antisymmetric coefficient table supported on index tuples of size parity `parity`.
ComponentMap random_components(Rng& rng, const TablePtr& table, std::size_t rank, int parity, bool allow_empty) {
  ComponentMap out;
  RandomPolyOptions o;
  o.terms = 2;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rank); ++mask) {
    const int size = std::popcount(mask);
    if (size % 2 != parity || (size == 0 && !allow_empty) || !rng.coin()) continue;
    OddIndex key;
    for (std::size_t i = 0; i < rank; ++i)
      if (mask >> i & 1) key.push_back(static_cast<int>(i));
    const SuperPoly v = random_poly(rng, table, o);
    if (!v.is_zero()) out.emplace(std::move(key), v);
  }
  return out;
}

TorsionFreeConnection small_connection(Rng& rng, const Chart& c) {
  return interpolate_connection(TorsionFreeConnection::flat(c), random_connection(rng, c, degree(1)),
                                make_scalar(1, 10));
}

Scalar rational_near(double v) { return make_scalar(std::lround(v * 1000.0), 1000); }

TorsionFreeConnection constant_line(const Chart& c, const Scalar& value) {
  return TorsionFreeConnection(c, {{{SuperPoly(c.base_table(), value)}}});
}

Vec random_vec(Rng& rng, std::size_t dim, double scale) {
  Vec v(dim);
  for (auto& x : v) x = rng.real(-scale, scale);
  return v;
}

std::string not_equal(const SuperPoly& got, const SuperPoly& want) {
  return "got " + got.to_string() + ", expected " + want.to_string();
}

// Random expression text over `table` for the parser fuzz.
std::string random_expression(Rng& rng, const std::vector<std::string>& names, int depth) {
  auto space = [&] { return rng.uniform(0, 3) == 0 ? std::string(" ") : std::string(); };
  std::function<std::string(int)> expr, term, primary;
  primary = [&](int d) -> std::string {
    const int r = rng.uniform(0, d > 0 ? 5 : 3);
    std::string p;
    if (r == 0) p = std::to_string(rng.uniform(0, 12));
    else if (r <= 3) p = names[pick(rng, 0, static_cast<int>(names.size()) - 1)];
    else p = "(" + space() + expr(d - 1) + space() + ")";
    if (rng.uniform(0, 4) == 0) p += "^" + std::to_string(rng.uniform(0, 3));
    return p;
  };
  term = [&](int d) {
    std::string t = rng.uniform(0, 5) == 0 ? "-" + primary(d) : primary(d);
    const int factors = rng.uniform(0, 2);
    for (int i = 0; i < factors; ++i) {
      if (rng.uniform(0, 3) == 0) t += space() + "/" + space() + std::to_string(rng.uniform(1, 7));
      else t += space() + "*" + space() + primary(d);
    }
    return t;
  };
  expr = [&](int d) {
    std::string e = term(d);
    const int terms = rng.uniform(0, 3);
    for (int i = 0; i < terms; ++i) e += space() + (rng.coin() ? "+" : "-") + space() + term(d);
    return e;
  };
  return expr(depth);
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "core") return Suite::core;
  if (name == "supermap") return Suite::supermap;
  if (name == "numeric") return Suite::numeric;
  if (name == "all") return Suite::all;
  throw DomainError("unknown suite '" + name + "' (expected core, supermap, numeric or all)");
}

CheckOutcome check_phi_identity(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "phi-identity"));
  return tally("core", "phi-identity", cases, [&](int) -> std::string {
    const Chart c = numbered_chart("M", "x", pick(rng, 1, 3));
    const int k = rng.uniform(1, 4);
    const auto g = random_connection(rng, c, degree(2));
    RandomPolyOptions o;
    o.max_base_degree = 3;
    o.terms = 4;
    const SuperPoly h = random_poly(rng, c.base_table(), o);
    const auto d = chi(g, std::nullopt, k);
    const auto dx = geodesic_jet(g, k);
    Assignments shift;
    for (std::size_t i = 0; i < c.dim(); ++i)
      shift.emplace(c.coords[i], SuperPoly::generator(d.table(), c.coords[i]) + embed(dx[i], d.table()));
    const SuperPoly lhs = exp_chi(d, h);
    const SuperPoly rhs = substitute(embed(h, d.table()), shift);
    return lhs == rhs ? "" : not_equal(lhs, rhs);
  });
}

CheckOutcome check_geodesic_coefficients(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "geodesic-coefficients"));
  return tally("core", "geodesic-coefficients", cases, [&](int) -> std::string {
    const Chart c = numbered_chart("M", "x", pick(rng, 1, 3));
    const std::size_t n = c.dim();
    const auto g = random_connection(rng, c, degree(2));
    const auto dx = geodesic_jet(g, 3);
    const TablePtr N = dx[0].table_ptr();
    std::vector<SuperPoly> xi;
    for (const auto& x : c.coords) xi.push_back(SuperPoly::generator(N, normal_generator_name(x)));
    auto G = [&](std::size_t i, std::size_t j, std::size_t l) { return embed(g(i, j, l), N); };
    for (std::size_t i = 0; i < n; ++i) {
      SuperPoly two(N), three(N);
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          two -= make_scalar(1, 2) * G(i, j, l) * xi[j] * xi[l];
          for (std::size_t s = 0; s < n; ++s) {
            SuperPoly coeff = -embed(derive(g(i, j, l), c.coords[s]), N);
            for (std::size_t p = 0; p < n; ++p) coeff += Scalar(2) * G(i, p, s) * G(p, j, l);
            three += make_scalar(1, 6) * coeff * xi[s] * xi[j] * xi[l];
          }
        }
      if (dx[i].formal_homogeneous(2) != two) return "xi^2 part: " + not_equal(dx[i].formal_homogeneous(2), two);
      if (dx[i].formal_homogeneous(3) != three) return "xi^3 part: " + not_equal(dx[i].formal_homogeneous(3), three);
    }
    return "";
  });
}

CheckOutcome check_psi_automorphism(std::uint64_t seed, int cases, int pairs) {
  Rng rng(seed_for(seed, "psi-automorphism"));
  return tally("core", "psi-automorphism", cases, [&](int) -> std::string {
    const Chart c = numbered_chart("M", "x", pick(rng, 1, 2));
    const FiberGenerators f = numbered_fibers("v", pick(rng, 0, 1));
    const int k = rng.uniform(1, 3);
    std::vector<TorsionFreeConnection> g;
    std::vector<std::optional<BundleConnection>> a;
    for (int i = 0; i < 3; ++i) {
      g.push_back(random_connection(rng, c));
      a.push_back(f.names.empty() ? std::nullopt : std::optional(random_bundle_connection(rng, c, f)));
    }
    const AlgebraMap p01 = psi_automorphism(g[0], g[1], a[0], a[1], k);
    const AlgebraMap p12 = psi_automorphism(g[1], g[2], a[1], a[2], k);
    const AlgebraMap p02 = psi_automorphism(g[0], g[2], a[0], a[2], k);
    if (!(p12.after(p01) == p02)) return "cocycle identity fails";
    for (const auto& x : c.coords) {
      const SuperPoly gen = SuperPoly::generator(p01.source(), x);
      if (p01(gen) != gen) return "moves base coordinate " + x;
    }
    RandomPolyOptions o;
    o.terms = 4;
    for (int j = 0; j < pairs; ++j) {
      const SuperPoly u = random_poly(rng, p01.source(), o);
      const SuperPoly w = random_poly(rng, p01.source(), o);
      if (p01(u * w) != p01(u) * p01(w)) return "not multiplicative on " + u.to_string() + ", " + w.to_string();
      SuperPoly d = u;
      for (int i = 0; i <= k; ++i) d = p01(d) - d;
      if (!d.is_zero()) return "(Psi - Id)^(k+1) does not vanish on " + u.to_string();
    }
    return "";
  });
}

CheckOutcome check_psi_example(std::uint64_t, int cases) {
  return tally("core", "psi-example", cases, [&](int) -> std::string {
    const Chart c = make_chart("M", {"x"});
    const TorsionFreeConnection curved(c, {{{SuperPoly::generator(c.base_table(), "x")}}});
    const AlgebraMap psi = psi_automorphism(TorsionFreeConnection::flat(c), curved, std::nullopt, std::nullopt, 2);
    const std::string got = psi.image("xi").to_string();
    return got == "xi - 1/2*x*xi^2" ? "" : "got " + got;
  });
}

CheckOutcome check_parse_print(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "parse-print"));
  const TablePtr t = make_table({"x", "y"}, {"xi1", "xi2"}, {"th1", "th2", "th3"}, 3);
  const std::vector<std::string> names{"x", "y", "xi1", "xi2", "th1", "th2", "th3"};
  return tally("core", "parse-print", cases, [&](int) -> std::string {
    const std::string text = random_expression(rng, names, 2);
    const SuperPoly p = parse_poly(text, t);
    const std::string printed = p.to_string();
    const SuperPoly q = parse_poly(printed, t);
    if (q != p) return "'" + text + "' printed as '" + printed + "' which parses differently";
    if (q.to_string() != printed) return "'" + printed + "' is not a fixed point";
    return "";
  });
}

CheckOutcome check_bijection(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "bijection"));
  return tally("supermap", "bijection", cases, [&](int) -> std::string {
    const auto M = random_presentation(rng, "M", "y", "th", 2, 3);
    const auto N = random_presentation(rng, "N", "x", "eta", 2, 3);
    const auto g = random_connection(rng, N.chart, degree(1));
    const auto a = random_bundle(rng, N);
    const auto f = random_morphism(rng, M, N);
    const SectionCorrespondence corr(N, g, a, correspondence_order(M, {}));
    const auto s = corr.to_section(f);
    if (!check_even_degree(s)) return "section is not even";
    if (!(corr.to_morphism(s) == f)) return "morphism does not round-trip";
    if (!(corr.to_section(corr.to_morphism(s)) == s)) return "section does not round-trip";
    return "";
  });
}

CheckOutcome check_connection_change(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "connection-change"));
  return tally("supermap", "connection-change", cases, [&](int) -> std::string {
    const auto M = random_presentation(rng, "M", "y", "th", 2, 3);
    const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
    const int k = correspondence_order(M, {});
    const SectionCorrespondence c0(N, random_connection(rng, N.chart, degree(1)), random_bundle(rng, N), k);
    const SectionCorrespondence c1(N, random_connection(rng, N.chart, degree(1)), random_bundle(rng, N), k);
    const auto f = random_morphism(rng, M, N);
    const auto s0 = c0.to_section(f);
    const auto s1 = c1.to_section(c0.to_morphism(s0));
    if (s1.base_map != s0.base_map) return "base map changed";
    if (!check_even_degree(s1)) return "transformed section is not even";
    if (!(c0.to_section(c1.to_morphism(s1)) == s0)) return "transform is not invertible";
    return "";
  });
}

CheckOutcome check_inner_hom(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "inner-hom"));
  return tally("supermap", "inner-hom", cases, [&](int) -> std::string {
    const auto M = random_presentation(rng, "M", "y", "th", 2, 2);
    const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
    std::vector<std::string> params;
    const int np = rng.uniform(1, 2);
    for (int i = 1; i <= np; ++i) params.push_back("e" + std::to_string(i));
    const auto g = random_connection(rng, N.chart, degree(1));
    const auto a = random_bundle(rng, N);
    const auto f = random_morphism(rng, M, N, params);
    const auto s = morphism_to_section(f, g, a);
    if (!(section_to_morphism(s, g, a) == f)) return "morphism does not round-trip";
    if (!(morphism_to_section(section_to_morphism(s, g, a), g, a) == s)) return "section does not round-trip";
    return "";
  });
}

CheckOutcome check_diagonal(std::uint64_t seed, int cases, int elements) {
  Rng rng(seed_for(seed, "diagonal-vanishing"));
  return tally("supermap", "diagonal-vanishing", cases, [&](int) -> std::string {
    const auto M = random_presentation(rng, "M", "y", "th", 2, 3);
    const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
    const auto f = random_morphism(rng, M, N);
    const int k = static_cast<int>(M.odd_rank());
    const TablePtr D = diagonal_table(N.chart);
    RandomPolyOptions o;
    o.terms = 2;
    for (int e = 0; e < elements; ++e) {
      SuperPoly F(D);
      const int summands = rng.uniform(1, 2);
      for (int s = 0; s < summands; ++s) {
        SuperPoly prod = random_poly(rng, D, o);
        for (int j = 0; j <= k; ++j) {
          const auto& x = N.chart.coords[pick(rng, 0, static_cast<int>(N.chart.dim()) - 1)];
          prod = prod * (SuperPoly::generator(D, primed_name(x)) - SuperPoly::generator(D, x));
        }
        F += prod;
      }
      const SuperPoly image = diagonal_vanishing_check(f, F);
      if (!image.is_zero()) return "image of " + F.to_string() + " is " + image.to_string();
    }
    return "";
  });
}

CheckOutcome check_curry_round_trip(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "curry-round-trip"));
  return tally("supermap", "curry-round-trip", cases, [&](int) -> std::string {
    const std::size_t zdim = pick(rng, 0, 2);
    const std::size_t ydim = pick(rng, 1, 2);
    std::vector<std::string> coords, odd;
    for (std::size_t i = 1; i <= zdim; ++i) coords.push_back("z" + std::to_string(i));
    for (std::size_t i = 1; i <= ydim; ++i) coords.push_back("y" + std::to_string(i));
    const int rank = rng.uniform(0, 4);
    for (int i = 1; i <= rank; ++i) odd.push_back("th" + std::to_string(i));
    const auto P = make_presentation(make_chart("P", coords), odd);
    const auto N = random_presentation(rng, "N", "x", "eta", 2, 2);
    const TablePtr C = component_table(P);
    RandomPolyOptions o;
    o.terms = 2;
    std::vector<SuperPoly> base;
    for (std::size_t i = 0; i < N.chart.dim(); ++i) base.push_back(random_poly(rng, P.chart.base_table(), o));
    std::vector<ComponentMap> tangent, fiber;
    for (std::size_t i = 0; i < N.chart.dim(); ++i) tangent.push_back(random_components(rng, C, odd.size(), 0, false));
    for (std::size_t a = 0; a < N.odd_rank(); ++a) fiber.push_back(random_components(rng, C, odd.size(), 1, false));
    const auto s = make_section(P, N, base, tangent, fiber);
    ProductSplit split;
    for (std::size_t i = 0; i < zdim; ++i) split.outer_coords.push_back(coords[i]);
    for (const auto& th : odd)
      if (rng.coin()) split.outer_odd.push_back(th);
    return uncurry(curry(s, split)) == s ? "" : "uncurry(curry(s)) differs from s";
  });
}

CheckOutcome check_curry_parametrised(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "curry-parametrised"));
  return tally("supermap", "curry-parametrised", cases, [&](int) -> std::string {
    const std::size_t zdim = pick(rng, 0, 1);
    const std::size_t ydim = pick(rng, 1, 2);
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
    const auto g = random_connection(rng, N.chart, degree(1));
    const auto a = random_bundle(rng, N);
    const auto G = random_morphism(rng, product, N);
    const ProductSplit split{{coords.begin(), coords.begin() + static_cast<long>(zdim)}, la};
    const auto cur = curry(morphism_to_section(G, g, a), split);

    // The same pullbacks read as a morphism from M parametrised by the odd generators of Z.
    const auto Gp = make_morphism(make_presentation(chart, th), N, G.x_pullbacks, G.eta_pullbacks, la);
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
            auto it = b.try_emplace(BlockIndex{A, key}, SuperPoly(chart.base_table())).first;
            it->second.add_term(m, coeff);
          }
        out.push_back(std::move(b));
      }
      return out;
    };
    if (blocks(sp.tangent) != cur.tangent) return "tangent blocks differ from the parametrised route";
    if (blocks(sp.fiber) != cur.fiber) return "fiber blocks differ from the parametrised route";
    return "";
  });
}

CheckOutcome check_exp_closed_form(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "exp-closed-form"));
  const Chart line = make_chart("N", {"x"});
  return tally("numeric", "exp-closed-form", cases, [&](int) -> std::string {
    const Scalar cq = rational_near(rng.real(0.2, 1.5));
    const double c = to_double(cq);
    const double x0 = rng.real(-1.0, 1.0);
    const double xi = rng.real(-0.4, 1.0);
    const double got = exp_numeric(constant_line(line, cq), {x0}, {xi}, 200)[0];
    const double want = x0 + std::log1p(c * xi) / c;
    const double err = std::abs(got - want);
    return err < 1e-8 ? "" : "error " + format_number(err) + " at c=" + format_number(c) + ", xi=" + format_number(xi);
  });
}

CheckOutcome check_exp_order(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "exp-order"));
  const Chart line = make_chart("N", {"x"});
  return tally("numeric", "exp-fourth-order", cases, [&](int) -> std::string {
    const Scalar cq = rational_near(rng.real(0.5, 1.5));
    const double c = to_double(cq);
    const double xi = rng.real(0.5, 1.5);
    const auto g = constant_line(line, cq);
    const double want = std::log1p(c * xi) / c;
    const double coarse = std::abs(exp_numeric(g, {0.0}, {xi}, 16)[0] - want);
    const double fine = std::abs(exp_numeric(g, {0.0}, {xi}, 32)[0] - want);
    const double ratio = coarse / fine;
    return std::abs(ratio - 16.0) <= 3.0 ? "" : "error ratio " + format_number(ratio);
  });
}

CheckOutcome check_chart_round_trip(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "chart-round-trip"));
  const Chart plane = make_chart("N", {"x1", "x2"});
  SampleGrid grid;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) grid.points.push_back({-1.0 + 2.0 * i / 7.0, -1.0 + 2.0 * j / 7.0});
  return tally("numeric", "chart-round-trip", cases, [&](int) -> std::string {
    const auto g = small_connection(rng, plane);
    DiscreteMap f{grid, {}};
    DiscreteSection s{grid, {}};
    for (std::size_t p = 0; p < grid.points.size(); ++p) {
      f.values.push_back(random_vec(rng, 2, 0.5));
      s.vectors.push_back(random_vec(rng, 2, 0.3));
    }
    const auto back = chart_phi(f, chart_psi(f, s, g, 50), g, 50);
    if (!back.all_converged()) return "Newton did not converge";
    const double err = sup_distance(back.section.vectors, s.vectors);
    return err < 1e-6 ? "" : "sup error " + format_number(err);
  });
}

CheckOutcome check_transport(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "transport"));
  const Chart plane = make_chart("N", {"x1", "x2"});
  const Chart line = make_chart("N", {"x"});
  const FiberGenerators fib{{"v1", "v2"}, {1, 1}};
  return tally("numeric", "transport", cases, [&](int) -> std::string {
    const auto A = random_bundle_connection(rng, plane, fib, degree(1));
    TimedPath path;
    const int samples = rng.uniform(3, 8);
    for (int j = 0; j < samples; ++j) {
      path.times.push_back(static_cast<double>(j) / (samples - 1));
      path.points.push_back(random_vec(rng, 2, 0.5));
    }
    const std::size_t cut = pick(rng, 1, samples - 2);
    const TimedPath first{{path.times.begin(), path.times.begin() + static_cast<long>(cut) + 1},
                          {path.points.begin(), path.points.begin() + static_cast<long>(cut) + 1}};
    const TimedPath second{{path.times.begin() + static_cast<long>(cut), path.times.end()},
                           {path.points.begin() + static_cast<long>(cut), path.points.end()}};
    const Vec v0 = random_vec(rng, 2, 1.0);
    const Vec whole = parallel_transport(A, path, v0);
    const Vec joined = parallel_transport(A, second, parallel_transport(A, first, v0));
    const double err = sup_distance({whole}, {joined});
    if (err >= 1e-7) return "concatenation error " + format_number(err);

    const Scalar aq = rational_near(rng.real(-1.5, 1.5));
    const BundleConnection scalar(line, FiberGenerators{{"v"}, {1}}, {{{SuperPoly(line.base_table(), aq)}}});
    const double p0 = rng.real(-1.0, 1.0);
    const double p1 = rng.real(-1.0, 1.0);
    const double w0 = rng.real(-2.0, 2.0);
    const double got = parallel_transport(scalar, TimedPath{{0.0, 1.0}, {{p0}, {p1}}}, {w0}, 256)[0];
    const double want = w0 * std::exp(-to_double(aq) * (p1 - p0));
    const double serr = std::abs(got - want);
    return serr < 1e-8 ? "" : "scalar closed-form error " + format_number(serr);
  });
}

CheckOutcome check_tangent(std::uint64_t seed, int cases) {
  Rng rng(seed_for(seed, "tangent"));
  return tally("numeric", "tangent-check", cases, [&](int) -> std::string {
    const Chart c = numbered_chart("N", "x", pick(rng, 1, 2));
    const auto g = small_connection(rng, c);
    DiscreteMap f;
    DiscreteSection eta;
    for (int p = 0; p < 8; ++p) {
      f.grid.points.push_back(random_vec(rng, 1, 1.0));
      f.values.push_back(random_vec(rng, c.dim(), 0.5));
      eta.vectors.push_back(random_vec(rng, c.dim(), 1.0));
    }
    eta.grid = f.grid;
    const double err = sup_distance(tangent_check(f, eta, g, 1e-4, 50).vectors, eta.vectors);
    return err < 1e-6 ? "" : "sup error " + format_number(err);
  });
}

const std::vector<CheckEntry>& registered_checks() {
  static const std::vector<CheckEntry> checks{
      {"core", "phi-identity", check_phi_identity},
      {"core", "geodesic-coefficients", check_geodesic_coefficients},
      {"core", "psi-automorphism", [](std::uint64_t s, int n) { return check_psi_automorphism(s, n, 20); }},
      {"core", "psi-example", [](std::uint64_t s, int) { return check_psi_example(s, 1); }},
      {"core", "parse-print", [](std::uint64_t s, int n) { return check_parse_print(s, 20 * n); }},
      {"supermap", "bijection", check_bijection},
      {"supermap", "connection-change", check_connection_change},
      {"supermap", "inner-hom", check_inner_hom},
      {"supermap", "diagonal-vanishing", [](std::uint64_t s, int n) { return check_diagonal(s, n, 10); }},
      {"supermap", "curry-round-trip", check_curry_round_trip},
      {"supermap", "curry-parametrised", check_curry_parametrised},
      {"numeric", "exp-closed-form", check_exp_closed_form},
      {"numeric", "exp-fourth-order", check_exp_order},
      {"numeric", "chart-round-trip", check_chart_round_trip},
      {"numeric", "transport", check_transport},
      {"numeric", "tangent-check", check_tangent},
  };
  return checks;
}

std::vector<CheckOutcome> run_verify(Suite suite, std::uint64_t seed, int cases) {
  if (cases < 1) throw DomainError("--cases must be at least 1");
  const char* wanted = suite == Suite::core ? "core" : suite == Suite::supermap ? "supermap" : "numeric";
  std::vector<CheckOutcome> out;
  for (const auto& c : registered_checks())
    if (suite == Suite::all || std::string_view(c.suite) == wanted) out.push_back(c.run(seed, cases));
  return out;
}

std::string format_report(const std::vector<CheckOutcome>& outcomes) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-9s %-22s %6s  %s\n", "suite", "check", "cases", "result");
  out += line;
  int passed = 0;
  for (const auto& o : outcomes) {
    std::snprintf(line, sizeof line, "%-9s %-22s %6d  %s\n", o.suite.c_str(), o.name.c_str(), o.cases,
                  o.passed() ? "pass" : "FAIL");
    out += line;
    if (o.passed()) ++passed;
    else out += "  " + std::to_string(o.failures) + " failing case(s); " + o.detail + "\n";
  }
  out += std::to_string(passed) + "/" + std::to_string(outcomes.size()) + " checks passed\n";
  return out;
}

}  // namespace superjet
