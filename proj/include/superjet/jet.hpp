#pragma once

#include <string>
#include <vector>

#include "superjet/superpoly.hpp"

namespace superjet {

/// A single coordinate chart; every construction in the library is chart-local.
struct Chart {
  std::string name;
  std::vector<std::string> coords;

  std::size_t dim() const noexcept { return coords.size(); }
  /// Table holding only the coordinates (for coefficient functions).
  TablePtr base_table() const;

  friend bool operator==(const Chart&, const Chart&) = default;
};

Chart make_chart(std::string name, std::vector<std::string> coords);

/// Names of the formal generators attached to a coordinate: "dx" for jets and
/// "xi"/"xi1"/"xi_u" (for coordinates x, x1, u) in normal coordinates.
std::string jet_generator_name(const std::string& coord);
std::string normal_generator_name(const std::string& coord);
/// Second copy of a coordinate on the product chart: "x" -> "x'".
std::string primed_name(const std::string& coord);

/// Odd (or even) fiber generators carried alongside the formal ones, e.g. dual frame
/// generators of a bundle. Even Z-degrees are stored as extra untruncated even generators.
struct FiberGenerators {
  std::vector<std::string> names;
  std::vector<int> degrees;
};

enum class JetBasis { jet, normal };

/// Table (coords; dx or xi truncated at k; odd fiber generators). Even-degree fiber generators
/// are appended to the base block.
TablePtr jet_table(const Chart& chart, int order, JetBasis basis, const FiberGenerators& fibers = {});

/// Table (coords, coords') for representatives of functions near the diagonal.
TablePtr diagonal_table(const Chart& chart);

/// An element of J^k (jet basis, generators dx) or of S^(k)(T*) (x) A (normal basis,
/// generators xi) in one chart, stored over the first (sigma) module structure.
struct JetElement {
  Chart chart;
  int order;
  JetBasis basis;
  SuperPoly value;
};

/// Product of two jets; refuses mixed charts, orders or bases.
JetElement multiply(const JetElement& a, const JetElement& b);

/// j^k(h) = sum_{|mu| <= k} dx^mu / mu! d^mu h (x). With fiber generators, h may be a section of
/// the algebra they generate; fiber generators then stand for their tau-pullbacks j^k(v).
JetElement jet_of_function(const SuperPoly& h, const Chart& chart, int order, const FiberGenerators& fibers = {});

/// Pulls a jet on the chart of j (coordinates y) back along y = f(x), with x the coordinates of
/// `source`: y -> f(x) and dy^i -> sum_{1 <= |mu| <= k} dx^mu / mu! d^mu f^i(x).
JetElement jet_change_of_coords(const JetElement& j, const Chart& source, const std::vector<SuperPoly>& f);

enum class ModuleSide { first, second };

/// first: g(x) * j (the sigma structure); second: j^k(g) * j (the tau structure).
JetElement module_action(ModuleSide side, const SuperPoly& g, const JetElement& j);

/// Image of a representative r(x, x') in J^k: r(x, x + dx) mod dx^{k+1}.
JetElement diagonal_representative_to_jet(const SuperPoly& r, const Chart& chart, int order);

}  // namespace superjet
