#include "superjet/sampling.hpp"

namespace superjet {

namespace {

SuperPoly entry(Rng& rng, const TablePtr& table, const ConnectionSampling& s) {
  if (rng.uniform(1, 100) > s.density) return SuperPoly(table);
  RandomPolyOptions opts;
  opts.terms = rng.uniform(1, s.terms);
  opts.max_base_degree = s.max_degree;
  return random_poly(rng, table, opts);
}

}  // namespace

TorsionFreeConnection random_connection(Rng& rng, const Chart& chart, const ConnectionSampling& s) {
  const std::size_t n = chart.dim();
  const TablePtr t = chart.base_table();
  std::vector<std::vector<std::vector<SuperPoly>>> g(
      n, std::vector<std::vector<SuperPoly>>(n, std::vector<SuperPoly>(n, SuperPoly(t))));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = j; l < n; ++l) {
        g[i][j][l] = entry(rng, t, s);
        g[i][l][j] = g[i][j][l];
      }
  return TorsionFreeConnection(chart, std::move(g));
}

BundleConnection random_bundle_connection(Rng& rng, const Chart& chart, const FiberGenerators& fibers,
                                          const ConnectionSampling& s) {
  const std::size_t r = fibers.names.size();
  const TablePtr t = chart.base_table();
  std::vector<int> degrees = fibers.degrees;
  if (degrees.empty()) degrees.assign(r, 1);
  std::vector<std::vector<std::vector<SuperPoly>>> a(
      r, std::vector<std::vector<SuperPoly>>(chart.dim(), std::vector<SuperPoly>(r, SuperPoly(t))));
  for (std::size_t al = 0; al < r; ++al)
    for (std::size_t i = 0; i < chart.dim(); ++i)
      for (std::size_t be = 0; be < r; ++be)
        if (degrees[al] == degrees[be]) a[al][i][be] = entry(rng, t, s);
  return BundleConnection(chart, fibers, std::move(a));
}

Chart numbered_chart(const std::string& name, const std::string& prefix, std::size_t dim) {
  std::vector<std::string> coords;
  if (dim == 1) {
    coords.push_back(prefix);
  } else {
    for (std::size_t i = 1; i <= dim; ++i) coords.push_back(prefix + std::to_string(i));
  }
  return make_chart(name, std::move(coords));
}

FiberGenerators numbered_fibers(const std::string& prefix, std::size_t rank) {
  FiberGenerators f;
  for (std::size_t i = 1; i <= rank; ++i) f.names.push_back(prefix + std::to_string(i));
  f.degrees.assign(rank, 1);
  return f;
}

SuperMorphism random_morphism(Rng& rng, const SuperManifoldPresentation& source,
                              const SuperManifoldPresentation& target, const std::vector<std::string>& parameters,
                              const MorphismSampling& s) {
  const TablePtr t = source_table(source, parameters);
  RandomPolyOptions base;
  base.terms = s.terms;
  base.max_base_degree = s.base_degree;
  base.max_odd_degree = 0;
  RandomPolyOptions even = base;
  even.max_odd_degree = std::nullopt;
  even.min_odd_degree = 1;
  even.parity = 0;
  RandomPolyOptions odd = even;
  odd.parity = 1;
  std::vector<SuperPoly> x, eta;
  for (std::size_t i = 0; i < target.chart.dim(); ++i) x.push_back(random_poly(rng, t, base) + random_poly(rng, t, even));
  for (std::size_t i = 0; i < target.odd_rank(); ++i) eta.push_back(random_poly(rng, t, odd));
  return make_morphism(source, target, std::move(x), std::move(eta), parameters);
}

}  // namespace superjet
