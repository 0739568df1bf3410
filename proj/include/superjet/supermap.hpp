#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "superjet/connection.hpp"

namespace superjet {

/// A split supermanifold PiV over a chart: even coordinates plus the odd generators (the dual
/// frame of the odd bundle). All fiber degrees must be odd.
struct SuperManifoldPresentation {
  Chart chart;
  std::vector<std::string> odd;
  std::vector<int> fiber_degrees;

  std::size_t odd_rank() const noexcept { return odd.size(); }
  FiberGenerators fibers() const { return FiberGenerators{odd, fiber_degrees}; }

  friend bool operator==(const SuperManifoldPresentation&, const SuperManifoldPresentation&) = default;
};

SuperManifoldPresentation make_presentation(Chart chart, std::vector<std::string> odd,
                                            std::vector<int> fiber_degrees = {});

/// Strictly ascending, 0-based indices into the source odd generators.
using OddIndex = std::vector<int>;
using ComponentMap = std::map<OddIndex, SuperPoly>;

/// Sorts `indices` into an OddIndex and returns the sign of the permutation, or sign 0 when an
/// index repeats.
std::pair<OddIndex, int> canonical_index(std::vector<int> indices);

/// Functions on the source: base = source coordinates, odd = parameters followed by the source
/// odd generators. Parameters are extra odd generators used to probe morphisms that are not
/// parity preserving (S-points of the inner Hom); an empty list is the classical case.
TablePtr source_table(const SuperManifoldPresentation& source, const std::vector<std::string>& parameters = {});
/// Coefficients of section components: source coordinates and parameters.
TablePtr component_table(const SuperManifoldPresentation& source, const std::vector<std::string>& parameters = {});
/// Functions on the target: base = target coordinates, odd = target odd generators.
TablePtr target_table(const SuperManifoldPresentation& target);

/// Pullbacks of the target coordinates and odd generators, over source_table(source, parameters).
struct SuperMorphism {
  SuperManifoldPresentation source;
  SuperManifoldPresentation target;
  std::vector<std::string> parameters;
  std::vector<SuperPoly> x_pullbacks;
  std::vector<SuperPoly> eta_pullbacks;

  TablePtr table() const { return source_table(source, parameters); }
  /// Odd-free part of the x pullbacks, over the source chart's table.
  std::vector<SuperPoly> base_map() const;
  /// f* applied to a function on the target.
  SuperPoly pullback(const SuperPoly& g) const;

  friend bool operator==(const SuperMorphism& a, const SuperMorphism& b);
};

/// Validates shapes and parities and embeds the pullbacks into the source table.
SuperMorphism make_morphism(SuperManifoldPresentation source, SuperManifoldPresentation target,
                            std::vector<SuperPoly> x_pullbacks, std::vector<SuperPoly> eta_pullbacks,
                            std::vector<std::string> parameters = {});

SuperMorphism identity_morphism(const SuperManifoldPresentation& m);

enum class ParityMode { even_only, all };

/// Superfield data of a morphism relative to connections on the target:
///   tangent[i][a_1..a_m] = T^i_{a_1..a_m}(y)   for m >= 1 (m = 0 only with parameters),
///   fiber[alpha][a_1..a_m] = Psi^alpha_{a_1..a_m}(y)   for m >= 0,
/// stored antisymmetrically on ascending index tuples; zero components are absent.
struct SuperfieldSection {
  SuperManifoldPresentation source;
  SuperManifoldPresentation target;
  std::vector<std::string> parameters;
  ParityMode mode = ParityMode::even_only;
  std::vector<SuperPoly> base_map;  // over source.chart.base_table()
  std::vector<ComponentMap> tangent;  // over component_table
  std::vector<ComponentMap> fiber;

  int truncation() const noexcept { return static_cast<int>(source.odd_rank()); }

  friend bool operator==(const SuperfieldSection& a, const SuperfieldSection& b);
};

/// Validates shapes, index tuples and (in even-only mode) the parity support; drops zeros and
/// embeds everything into the canonical tables.
SuperfieldSection make_section(SuperManifoldPresentation source, SuperManifoldPresentation target,
                               std::vector<SuperPoly> base_map, std::vector<ComponentMap> tangent,
                               std::vector<ComponentMap> fiber, ParityMode mode = ParityMode::even_only,
                               std::vector<std::string> parameters = {});

/// True iff T is supported on even m and Psi on odd m.
bool check_even_degree(const SuperfieldSection& s);

/// The identification of morphisms with sections fixed by (Gamma_N, nabla_V). Build once and
/// apply to many morphisms; the inverse of Phi on the normal algebra is computed up front.
class SectionCorrespondence {
 public:
  /// `bundle` may be omitted when the target has no odd generators (or for the trivial connection).
  SectionCorrespondence(SuperManifoldPresentation target, TorsionFreeConnection gamma,
                        std::optional<BundleConnection> bundle, int order);

  const SuperManifoldPresentation& target() const noexcept { return target_; }
  int order() const noexcept { return order_; }

  SuperfieldSection to_section(const SuperMorphism& f) const;
  SuperMorphism to_morphism(const SuperfieldSection& s) const;

 private:
  SuperManifoldPresentation target_;
  TorsionFreeConnection gamma_;
  std::optional<BundleConnection> bundle_;
  int order_;
  TablePtr normal_;
  std::vector<std::string> generators_;  // xi then fiber generators
  std::vector<SuperPoly> forward_;  // images: dx(x, xi) and exp(chi)(eta)
  std::vector<SuperPoly> inverse_;
};

/// Truncation used for the normal algebra: source odd rank plus parameter count.
int correspondence_order(const SuperManifoldPresentation& source, const std::vector<std::string>& parameters);

SuperfieldSection morphism_to_section(const SuperMorphism& f, const TorsionFreeConnection& gamma,
                                      const std::optional<BundleConnection>& bundle);
SuperMorphism section_to_morphism(const SuperfieldSection& s, const TorsionFreeConnection& gamma,
                                  const std::optional<BundleConnection>& bundle);

/// g o f, with (g o f)* = f* o g*. g must be classical.
SuperMorphism compose(const SuperMorphism& g, const SuperMorphism& f);

/// (f' x f)*(F): x -> f_0(y), x' -> f*(x). F is a polynomial over diagonal_table(target chart).
SuperPoly diagonal_vanishing_check(const SuperMorphism& f, const SuperPoly& F);

/// Splits a product source Z x M: the coordinates and odd generators listed here belong to Z,
/// the rest to M.
struct ProductSplit {
  std::vector<std::string> outer_coords;
  std::vector<std::string> outer_odd;

  friend bool operator==(const ProductSplit&, const ProductSplit&) = default;
};

using BlockIndex = std::pair<OddIndex, OddIndex>;
using BlockMap = std::map<BlockIndex, SuperPoly>;

/// Section data over Z x M regrouped by (outer, inner) odd index blocks: the block (A, B) holds
/// the coefficient of lambda^A theta^B, with A indexing the outer odd generators and B the inner
/// ones, each in declared order.
struct CurriedSection {
  SuperManifoldPresentation source;
  SuperManifoldPresentation target;
  ProductSplit split;
  ParityMode mode = ParityMode::even_only;
  std::vector<SuperPoly> base_map;
  std::vector<BlockMap> tangent;
  std::vector<BlockMap> fiber;

  std::vector<std::string> outer_odd() const;
  std::vector<std::string> inner_odd() const;

  friend bool operator==(const CurriedSection& a, const CurriedSection& b);
};

CurriedSection curry(const SuperfieldSection& s, const ProductSplit& split);
SuperfieldSection uncurry(const CurriedSection& c);

}  // namespace superjet
