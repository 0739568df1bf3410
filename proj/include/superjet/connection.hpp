#pragma once

#include <optional>
#include <vector>

#include "superjet/jet.hpp"
#include "superjet/series.hpp"

namespace superjet {

/// Christoffel symbols Gamma^i_{jl}(x) of a torsion-free connection on TM, with polynomial
/// entries over the chart's coordinates. Symmetry in (j, l) is checked on construction.
class TorsionFreeConnection {
 public:
  /// `gamma` is indexed [i][j][l] with the upper index first.
  TorsionFreeConnection(Chart chart, std::vector<std::vector<std::vector<SuperPoly>>> gamma);

  static TorsionFreeConnection flat(const Chart& chart);

  const Chart& chart() const noexcept { return chart_; }
  std::size_t dim() const noexcept { return chart_.dim(); }
  const SuperPoly& operator()(std::size_t i, std::size_t j, std::size_t l) const { return gamma_[i][j][l]; }
  const std::vector<std::vector<std::vector<SuperPoly>>>& symbols() const noexcept { return gamma_; }

 private:
  Chart chart_;
  std::vector<std::vector<std::vector<SuperPoly>>> gamma_;
};

/// Connection coefficients A^alpha_{i beta}(x) of a graded connection on a bundle whose dual frame
/// generators are `fibers`. Convention: nabla_i v^alpha = d_i v^alpha - A^alpha_{i beta} v^beta.
/// Coefficients vanish unless deg alpha = deg beta.
class BundleConnection {
 public:
  /// `coeffs` is indexed [alpha][i][beta].
  BundleConnection(Chart base, FiberGenerators fibers, std::vector<std::vector<std::vector<SuperPoly>>> coeffs);

  static BundleConnection trivial(const Chart& base, const FiberGenerators& fibers);

  const Chart& chart() const noexcept { return chart_; }
  const FiberGenerators& fibers() const noexcept { return fibers_; }
  std::size_t rank() const noexcept { return fibers_.names.size(); }
  const SuperPoly& operator()(std::size_t alpha, std::size_t i, std::size_t beta) const {
    return coeffs_[alpha][i][beta];
  }

 private:
  Chart chart_;
  FiberGenerators fibers_;
  std::vector<std::vector<std::vector<SuperPoly>>> coeffs_;
};

/// (1 - t) a + t b.
TorsionFreeConnection interpolate_connection(const TorsionFreeConnection& a, const TorsionFreeConnection& b,
                                             const Scalar& t);
BundleConnection interpolate_connection(const BundleConnection& a, const BundleConnection& b, const Scalar& t);

/// Normal-coordinate expansion dx^i(x, xi) = z^i(x, xi, 1) - x^i mod xi^{k+1} of the geodesic flow,
/// over jet_table(chart, k, normal).
std::vector<SuperPoly> geodesic_jet(const TorsionFreeConnection& gamma, int order);

/// The derivation chi = xi^s d/dx^s - Gamma^s_{jl} xi^j xi^l d/dxi^s
///                      - xi^i A^alpha_{i beta} v^beta d/dv^alpha   (mod xi^{k+1})
/// on S^(k)(T*) (x) A, realised over jet_table(chart, k, normal, fibers).
class ChiDerivation {
 public:
  ChiDerivation(TorsionFreeConnection gamma, std::optional<BundleConnection> bundle, int order);

  const TablePtr& table() const noexcept { return table_; }
  int order() const noexcept { return order_; }
  const TorsionFreeConnection& connection() const noexcept { return gamma_; }
  const std::optional<BundleConnection>& bundle() const noexcept { return bundle_; }
  FiberGenerators fibers() const;

  SuperPoly operator()(const SuperPoly& p) const;

 private:
  TorsionFreeConnection gamma_;
  std::optional<BundleConnection> bundle_;
  int order_;
  TablePtr table_;
  std::vector<SuperPoly> xi_;
  std::vector<SuperPoly> quadratic_;  // Gamma^s_{jl} xi^j xi^l
  std::vector<SuperPoly> fiber_terms_;  // xi^i A^alpha_{i beta} v^beta
};

ChiDerivation chi(const TorsionFreeConnection& gamma, const std::optional<BundleConnection>& bundle, int order);

/// sum_{m=0}^{k} chi^m(p) / m!. Polynomials over the bare chart table (or the chart plus fibers)
/// are embedded into the derivation's table first.
SuperPoly exp_chi(const ChiDerivation& chi, const SuperPoly& p);

/// The isomorphism Phi^k : J^k(A) -> S^(k)(T*) (x) A fixed by the connections. It is the identity
/// on coefficient functions, sends dx^i to the geodesic expansion and each fiber generator (read
/// as j^k(v)) to exp(chi)(v).
class PhiIsomorphism {
 public:
  PhiIsomorphism(const TorsionFreeConnection& gamma, const std::optional<BundleConnection>& bundle, int order);

  const ChiDerivation& derivation() const noexcept { return chi_; }
  /// jet table -> normal table.
  const AlgebraMap& forward() const noexcept { return forward_; }
  /// normal table -> jet table.
  const AlgebraMap& backward() const noexcept { return backward_; }

  JetElement operator()(const JetElement& j) const;
  JetElement inverse(const JetElement& s) const;

 private:
  ChiDerivation chi_;
  AlgebraMap forward_;
  AlgebraMap backward_;
};

JetElement phi(const TorsionFreeConnection& gamma, const std::optional<BundleConnection>& bundle, int order,
               const JetElement& j);

/// Psi = Phi_1 o Phi_0^{-1}, an automorphism of S^(k)(T*) (x) A fixing coefficient functions.
AlgebraMap psi_automorphism(const TorsionFreeConnection& gamma0, const TorsionFreeConnection& gamma1,
                            const std::optional<BundleConnection>& bundle0,
                            const std::optional<BundleConnection>& bundle1, int order);

}  // namespace superjet
