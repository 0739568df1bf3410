#pragma once

#include <cstddef>
#include <vector>

#include "superjet/connection.hpp"

namespace superjet {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

/// A polynomial in the chart coordinates, compiled for floating-point evaluation.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  /// p may only involve base generators.
  explicit CompiledPoly(const SuperPoly& p);

  double operator()(const Vec& point) const;
  bool is_zero() const noexcept { return terms_.empty(); }

 private:
  struct Term {
    double coefficient;
    std::vector<std::uint16_t> exponents;
  };
  std::vector<Term> terms_;
};

/// Gamma^i_{jl} and its first derivatives, compiled.
class NumericConnection {
 public:
  explicit NumericConnection(const TorsionFreeConnection& gamma);

  std::size_t dim() const noexcept { return n_; }
  /// -Gamma^s_{jl}(z) p^j p^l.
  Vec acceleration(const Vec& z, const Vec& p) const;
  /// Linearisation of the acceleration at (z, p) applied to (dz, dp).
  Vec acceleration_variation(const Vec& z, const Vec& p, const Vec& dz, const Vec& dp) const;

 private:
  std::size_t n_;
  std::vector<CompiledPoly> g_;   // [s][j][l] flattened
  std::vector<CompiledPoly> dg_;  // [s][j][l][m] flattened, d/dz^m
  bool flat_ = true;
};

/// A^alpha_{i beta}, compiled.
class NumericBundle {
 public:
  explicit NumericBundle(const BundleConnection& a);

  std::size_t dim() const noexcept { return n_; }
  std::size_t rank() const noexcept { return r_; }
  /// -A^alpha_{i beta}(z) zdot^i v^beta.
  Vec derivative(const Vec& z, const Vec& zdot, const Vec& v) const;

 private:
  std::size_t n_;
  std::size_t r_;
  std::vector<CompiledPoly> a_;  // [alpha][i][beta] flattened
};

/// exp_x(v): the geodesic from x with initial velocity v at t = 1, by classical RK4 with
/// `steps` fixed steps.
Vec exp_numeric(const NumericConnection& gamma, const Vec& x, const Vec& v, int steps);
Vec exp_numeric(const TorsionFreeConnection& gamma, const Vec& x, const Vec& v, int steps);

struct ExpWithJacobian {
  Vec point;
  Mat jacobian;  // d exp_x(v) / dv
};

/// exp_x(v) together with its derivative in v (geodesic variational equation, integrated by the
/// same RK4 scheme).
ExpWithJacobian exp_with_jacobian(const NumericConnection& gamma, const Vec& x, const Vec& v, int steps);

struct SampleGrid {
  std::vector<Vec> points;
};

struct DiscreteMap {
  SampleGrid grid;
  std::vector<Vec> values;
};

struct DiscreteSection {
  SampleGrid grid;
  std::vector<Vec> vectors;
};

void validate(const DiscreteMap& f);
void validate(const DiscreteSection& s);

/// psi_f(s)(x) = exp_{f(x)}(s(x)).
DiscreteMap chart_psi(const DiscreteMap& f, const DiscreteSection& s, const TorsionFreeConnection& gamma, int steps);

struct NewtonOptions {
  int max_iterations = 50;
  double tolerance = 1e-12;
};

struct ChartPhiPoint {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

struct ChartPhiResult {
  DiscreteSection section;
  std::vector<ChartPhiPoint> status;

  bool all_converged() const;
};

/// phi_f(g): per point, the v with exp_{f(x)}(v) = g(x), found by damped Newton from v = g - f.
ChartPhiResult chart_phi(const DiscreteMap& f, const DiscreteMap& g, const TorsionFreeConnection& gamma, int steps,
                         const NewtonOptions& options = {});

/// Points of a curve with their sample times (strictly increasing or strictly decreasing).
struct TimedPath {
  std::vector<double> times;
  std::vector<Vec> points;
};

/// Transports v0 along the piecewise-linear interpolation of the samples, solving
/// vdot^alpha = -A^alpha_{i beta}(gamma) gammadot^i v^beta with `steps_per_segment` RK4 steps on
/// each segment.
Vec parallel_transport(const BundleConnection& a, const TimedPath& curve, const Vec& v0, int steps_per_segment = 64);
Vec parallel_transport(const NumericBundle& a, const TimedPath& curve, const Vec& v0, int steps_per_segment = 64);

/// For each grid point, the matrix of parallel transport along t -> psi_f(t eta)(x) from t0 to
/// t1 (columns are the transported frame vectors). Geodesic and transport are integrated
/// together with steps = ceil(steps * |t1 - t0|) (and likewise to reach t0).
std::vector<Mat> trivialize_over_chart(const DiscreteMap& f, const DiscreteSection& eta,
                                       const TorsionFreeConnection& gamma, const BundleConnection& a, double t0,
                                       double t1, int steps);

/// (psi_f(h eta) - psi_f(-h eta)) / 2h per point.
DiscreteSection tangent_check(const DiscreteMap& f, const DiscreteSection& eta, const TorsionFreeConnection& gamma,
                              double h, int steps);

/// max_i |a_i - b_i| over all points.
double sup_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

}  // namespace superjet
