#include "superjet/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "superjet/errors.hpp"

namespace superjet {

namespace {

// One classical Runge-Kutta step for y' = rhs(y).
template <class Rhs>
void rk4_step(Vec& y, double h, const Rhs& rhs) {
  const std::size_t n = y.size();
  Vec tmp(n);
  const Vec k1 = rhs(y);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  const Vec k2 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  const Vec k3 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  const Vec k4 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void require_finite(const Vec& y, const char* what) {
  for (double v : y)
    if (!std::isfinite(v)) throw NumericError(std::string(what) + " produced a non-finite value");
}

void require_steps(int steps) {
  if (steps < 1) throw DomainError("step count must be at least 1");
}

void require_dim(const Vec& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw ShapeError(std::string(what) + " has " + std::to_string(v.size()) + " components, expected " +
                     std::to_string(n));
}

// Geodesic state y = (z, p); rhs = (p, acceleration).
Vec geodesic_rhs(const NumericConnection& g, const Vec& y) {
  const std::size_t n = g.dim();
  const Vec z(y.begin(), y.begin() + static_cast<long>(n));
  const Vec p(y.begin() + static_cast<long>(n), y.begin() + static_cast<long>(2 * n));
  Vec out(p);
  const Vec a = g.acceleration(z, p);
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

void integrate_geodesic(const NumericConnection& g, Vec& state, double span, int steps) {
  const double h = span / steps;
  for (int s = 0; s < steps; ++s) rk4_step(state, h, [&](const Vec& y) { return geodesic_rhs(g, y); });
  require_finite(state, "geodesic integration");
}

// Solves a x = b by Gaussian elimination with partial pivoting; false if singular.
bool solve(Mat a, Vec b, Vec& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return true;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

int steps_for(double span, int steps) { return std::max(1, static_cast<int>(std::ceil(std::abs(span) * steps - 1e-9))); }

}  // namespace

CompiledPoly::CompiledPoly(const SuperPoly& p) {
  for (const auto& [mono, c] : p.terms()) {
    if (mono.formal_degree() != 0 || mono.odd != 0)
      throw DomainError("only polynomials in the chart coordinates can be evaluated numerically");
    terms_.push_back(Term{to_double(c), mono.base});
  }
}

double CompiledPoly::operator()(const Vec& point) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (std::size_t i = 0; i < t.exponents.size(); ++i)
      for (std::uint16_t e = 0; e < t.exponents[i]; ++e) v *= point[i];
    sum += v;
  }
  return sum;
}

NumericConnection::NumericConnection(const TorsionFreeConnection& gamma) : n_(gamma.dim()) {
  const Chart& chart = gamma.chart();
  for (std::size_t s = 0; s < n_; ++s)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t l = 0; l < n_; ++l) {
        g_.emplace_back(gamma(s, j, l));
        if (!gamma(s, j, l).is_zero()) flat_ = false;
        for (std::size_t m = 0; m < n_; ++m) dg_.emplace_back(derive(gamma(s, j, l), chart.coords[m]));
      }
}

Vec NumericConnection::acceleration(const Vec& z, const Vec& p) const {
  Vec out(n_, 0.0);
  if (flat_) return out;
  for (std::size_t s = 0; s < n_; ++s)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t l = 0; l < n_; ++l) {
        const CompiledPoly& g = g_[(s * n_ + j) * n_ + l];
        if (!g.is_zero()) out[s] -= g(z) * p[j] * p[l];
      }
  return out;
}

Vec NumericConnection::acceleration_variation(const Vec& z, const Vec& p, const Vec& dz, const Vec& dp) const {
  Vec out(n_, 0.0);
  if (flat_) return out;
  for (std::size_t s = 0; s < n_; ++s)
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t l = 0; l < n_; ++l) {
        const std::size_t idx = (s * n_ + j) * n_ + l;
        const CompiledPoly& g = g_[idx];
        if (g.is_zero()) continue;
        double dgam = 0.0;
        for (std::size_t m = 0; m < n_; ++m) {
          const CompiledPoly& d = dg_[idx * n_ + m];
          if (!d.is_zero()) dgam += d(z) * dz[m];
        }
        out[s] -= dgam * p[j] * p[l] + g(z) * (dp[j] * p[l] + p[j] * dp[l]);
      }
  return out;
}

NumericBundle::NumericBundle(const BundleConnection& a) : n_(a.chart().dim()), r_(a.rank()) {
  for (std::size_t al = 0; al < r_; ++al)
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t be = 0; be < r_; ++be) a_.emplace_back(a(al, i, be));
}

Vec NumericBundle::derivative(const Vec& z, const Vec& zdot, const Vec& v) const {
  Vec out(r_, 0.0);
  for (std::size_t al = 0; al < r_; ++al)
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t be = 0; be < r_; ++be) {
        const CompiledPoly& a = a_[(al * n_ + i) * r_ + be];
        if (!a.is_zero()) out[al] -= a(z) * zdot[i] * v[be];
      }
  return out;
}

Vec exp_numeric(const NumericConnection& gamma, const Vec& x, const Vec& v, int steps) {
  require_steps(steps);
  require_dim(x, gamma.dim(), "point");
  require_dim(v, gamma.dim(), "vector");
  Vec state = x;
  state.insert(state.end(), v.begin(), v.end());
  integrate_geodesic(gamma, state, 1.0, steps);
  state.resize(gamma.dim());
  return state;
}

Vec exp_numeric(const TorsionFreeConnection& gamma, const Vec& x, const Vec& v, int steps) {
  return exp_numeric(NumericConnection(gamma), x, v, steps);
}

ExpWithJacobian exp_with_jacobian(const NumericConnection& gamma, const Vec& x, const Vec& v, int steps) {
  require_steps(steps);
  const std::size_t n = gamma.dim();
  require_dim(x, n, "point");
  require_dim(v, n, "vector");
  // State: z, p, then for each column c: dz_c, dp_c.
  Vec state = x;
  state.insert(state.end(), v.begin(), v.end());
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) state.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) state.push_back(i == c ? 1.0 : 0.0);
  }
  auto rhs = [&](const Vec& y) {
    const Vec z(y.begin(), y.begin() + static_cast<long>(n));
    const Vec p(y.begin() + static_cast<long>(n), y.begin() + static_cast<long>(2 * n));
    Vec out(p);
    const Vec a = gamma.acceleration(z, p);
    out.insert(out.end(), a.begin(), a.end());
    for (std::size_t c = 0; c < n; ++c) {
      const auto base = y.begin() + static_cast<long>(2 * n + 2 * n * c);
      const Vec dz(base, base + static_cast<long>(n));
      const Vec dp(base + static_cast<long>(n), base + static_cast<long>(2 * n));
      out.insert(out.end(), dp.begin(), dp.end());
      const Vec ddp = gamma.acceleration_variation(z, p, dz, dp);
      out.insert(out.end(), ddp.begin(), ddp.end());
    }
    return out;
  };
  const double h = 1.0 / steps;
  for (int s = 0; s < steps; ++s) rk4_step(state, h, rhs);
  require_finite(state, "geodesic integration");
  ExpWithJacobian out{Vec(state.begin(), state.begin() + static_cast<long>(n)), Mat(n, Vec(n))};
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) out.jacobian[i][c] = state[2 * n + 2 * n * c + i];
  return out;
}

void validate(const DiscreteMap& f) {
  if (f.grid.points.empty()) throw ShapeError("sample grid is empty");
  if (f.values.size() != f.grid.points.size()) throw ShapeError("map needs one value per grid point");
}

void validate(const DiscreteSection& s) {
  if (s.grid.points.empty()) throw ShapeError("sample grid is empty");
  if (s.vectors.size() != s.grid.points.size()) throw ShapeError("section needs one vector per grid point");
}

namespace {

void require_same_grid(const SampleGrid& a, const SampleGrid& b) {
  if (a.points != b.points) throw MismatchError("sample grids differ");
}

}  // namespace

DiscreteMap chart_psi(const DiscreteMap& f, const DiscreteSection& s, const TorsionFreeConnection& gamma, int steps) {
  validate(f);
  validate(s);
  require_same_grid(f.grid, s.grid);
  const NumericConnection g(gamma);
  DiscreteMap out{f.grid, {}};
  for (std::size_t k = 0; k < f.values.size(); ++k) out.values.push_back(exp_numeric(g, f.values[k], s.vectors[k], steps));
  return out;
}

bool ChartPhiResult::all_converged() const {
  return std::all_of(status.begin(), status.end(), [](const ChartPhiPoint& p) { return p.converged; });
}

ChartPhiResult chart_phi(const DiscreteMap& f, const DiscreteMap& g, const TorsionFreeConnection& gamma, int steps,
                         const NewtonOptions& options) {
  validate(f);
  validate(g);
  require_same_grid(f.grid, g.grid);
  const NumericConnection con(gamma);
  const std::size_t n = con.dim();
  ChartPhiResult out{DiscreteSection{f.grid, {}}, {}};
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const Vec& x = f.values[k];
    const Vec& target = g.values[k];
    require_dim(target, n, "map value");
    const double tol = options.tolerance * (1.0 + max_abs(target));
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = target[i] - x[i];
    ChartPhiPoint st;
    auto residual_at = [&](const Vec& w, ExpWithJacobian& e) {
      e = exp_with_jacobian(con, x, w, steps);
      Vec r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = e.point[i] - target[i];
      return r;
    };
    ExpWithJacobian e;
    Vec r = residual_at(v, e);
    st.residual = max_abs(r);
    while (st.residual > tol && st.iterations < options.max_iterations) {
      ++st.iterations;
      Vec delta;
      if (!solve(e.jacobian, r, delta)) break;
      bool improved = false;
      for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
        Vec trial = v;
        for (std::size_t i = 0; i < n; ++i) trial[i] -= lambda * delta[i];
        ExpWithJacobian et;
        Vec rt;
        try {
          rt = residual_at(trial, et);
        } catch (const NumericError&) {
          continue;
        }
        if (max_abs(rt) < st.residual) {
          v = std::move(trial);
          r = std::move(rt);
          e = std::move(et);
          st.residual = max_abs(r);
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    st.converged = st.residual <= tol;
    out.section.vectors.push_back(std::move(v));
    out.status.push_back(st);
  }
  return out;
}

Vec parallel_transport(const NumericBundle& a, const TimedPath& curve, const Vec& v0, int steps_per_segment) {
  require_steps(steps_per_segment);
  if (curve.points.size() < 2) throw ShapeError("a transport curve needs at least two samples");
  if (curve.times.size() != curve.points.size()) throw ShapeError("curve needs one time per sample");
  require_dim(v0, a.rank(), "fiber vector");
  const double dir = curve.times[1] - curve.times[0];
  Vec v = v0;
  for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
    const double dt = curve.times[k + 1] - curve.times[k];
    if (dt == 0.0 || (dt > 0) != (dir > 0)) throw ShapeError("sample times must be strictly monotone");
    const Vec& p0 = curve.points[k];
    const Vec& p1 = curve.points[k + 1];
    require_dim(p0, a.dim(), "curve point");
    require_dim(p1, a.dim(), "curve point");
    Vec zdot(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) zdot[i] = (p1[i] - p0[i]) / dt;
    // State: (tau, v) with tau the time elapsed in this segment.
    Vec state{0.0};
    state.insert(state.end(), v.begin(), v.end());
    auto rhs = [&](const Vec& y) {
      Vec z(a.dim());
      for (std::size_t i = 0; i < a.dim(); ++i) z[i] = p0[i] + y[0] * zdot[i];
      const Vec w = a.derivative(z, zdot, Vec(y.begin() + 1, y.end()));
      Vec out{1.0};
      out.insert(out.end(), w.begin(), w.end());
      return out;
    };
    const double h = dt / steps_per_segment;
    for (int s = 0; s < steps_per_segment; ++s) rk4_step(state, h, rhs);
    require_finite(state, "parallel transport");
    v.assign(state.begin() + 1, state.end());
  }
  return v;
}

Vec parallel_transport(const BundleConnection& a, const TimedPath& curve, const Vec& v0, int steps_per_segment) {
  return parallel_transport(NumericBundle(a), curve, v0, steps_per_segment);
}

std::vector<Mat> trivialize_over_chart(const DiscreteMap& f, const DiscreteSection& eta,
                                       const TorsionFreeConnection& gamma, const BundleConnection& a, double t0,
                                       double t1, int steps) {
  validate(f);
  validate(eta);
  require_same_grid(f.grid, eta.grid);
  require_steps(steps);
  if (!(a.chart() == gamma.chart())) throw MismatchError("connections live on different charts");
  const NumericConnection g(gamma);
  const NumericBundle b(a);
  const std::size_t n = g.dim();
  const std::size_t r = b.rank();
  std::vector<Mat> out;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    require_dim(f.values[k], n, "map value");
    require_dim(eta.vectors[k], n, "section vector");
    Vec state = f.values[k];
    state.insert(state.end(), eta.vectors[k].begin(), eta.vectors[k].end());
    if (t0 != 0.0) integrate_geodesic(g, state, t0, steps_for(t0, steps));
    // Append the frame: column c of the transport matrix.
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t al = 0; al < r; ++al) state.push_back(al == c ? 1.0 : 0.0);
    auto rhs = [&](const Vec& y) {
      const Vec z(y.begin(), y.begin() + static_cast<long>(n));
      const Vec p(y.begin() + static_cast<long>(n), y.begin() + static_cast<long>(2 * n));
      Vec out(p);
      const Vec acc = g.acceleration(z, p);
      out.insert(out.end(), acc.begin(), acc.end());
      for (std::size_t c = 0; c < r; ++c) {
        const auto base = y.begin() + static_cast<long>(2 * n + r * c);
        const Vec w = b.derivative(z, p, Vec(base, base + static_cast<long>(r)));
        out.insert(out.end(), w.begin(), w.end());
      }
      return out;
    };
    if (t1 != t0) {
      const int m = steps_for(t1 - t0, steps);
      const double h = (t1 - t0) / m;
      for (int s = 0; s < m; ++s) rk4_step(state, h, rhs);
      require_finite(state, "transport along the chart");
    }
    Mat mat(r, Vec(r));
    for (std::size_t c = 0; c < r; ++c)
      for (std::size_t al = 0; al < r; ++al) mat[al][c] = state[2 * n + r * c + al];
    out.push_back(std::move(mat));
  }
  return out;
}

DiscreteSection tangent_check(const DiscreteMap& f, const DiscreteSection& eta, const TorsionFreeConnection& gamma,
                              double h, int steps) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  DiscreteSection plus = eta, minus = eta;
  for (auto& v : plus.vectors)
    for (auto& x : v) x *= h;
  for (auto& v : minus.vectors)
    for (auto& x : v) x *= -h;
  const DiscreteMap a = chart_psi(f, plus, gamma, steps);
  const DiscreteMap b = chart_psi(f, minus, gamma, steps);
  DiscreteSection out{f.grid, {}};
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    Vec d(a.values[k].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (a.values[k][i] - b.values[k][i]) / (2.0 * h);
    out.vectors.push_back(std::move(d));
  }
  return out;
}

double sup_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.size() != b.size()) throw ShapeError("point counts differ");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) throw ShapeError("dimensions differ");
    for (std::size_t i = 0; i < a[k].size(); ++i) m = std::max(m, std::abs(a[k][i] - b[k][i]));
  }
  return m;
}

}  // namespace superjet
