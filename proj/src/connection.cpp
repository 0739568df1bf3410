#include "superjet/connection.hpp"

#include "superjet/errors.hpp"

namespace superjet {

namespace {

using Tensor3 = std::vector<std::vector<std::vector<SuperPoly>>>;

std::string index_string(std::size_t a, std::size_t b, std::size_t c) {
  return std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(c + 1);
}

void check_shape(const Tensor3& t, std::size_t n0, std::size_t n1, std::size_t n2, const char* what) {
  if (t.size() != n0) throw ShapeError(std::string(what) + ": wrong outer dimension");
  for (const auto& a : t) {
    if (a.size() != n1) throw ShapeError(std::string(what) + ": wrong middle dimension");
    for (const auto& b : a)
      if (b.size() != n2) throw ShapeError(std::string(what) + ": wrong inner dimension");
  }
}

Tensor3 localize(const Tensor3& t, const TablePtr& table) {
  Tensor3 out = t;
  for (auto& a : out)
    for (auto& b : a)
      for (auto& c : b) c = embed(c, table);
  return out;
}

Tensor3 zeros(std::size_t n0, std::size_t n1, std::size_t n2, const TablePtr& table) {
  return Tensor3(n0, std::vector<std::vector<SuperPoly>>(n1, std::vector<SuperPoly>(n2, SuperPoly(table))));
}

Tensor3 blend(const Tensor3& a, const Tensor3& b, Scalar t) {
  t.canonicalize();
  Tensor3 out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      for (std::size_t l = 0; l < a[i][j].size(); ++l)
        out[i][j][l] = (Scalar(1) - t) * a[i][j][l] + t * b[i][j][l];
  return out;
}

void require_pair(const std::optional<BundleConnection>& a, const std::optional<BundleConnection>& b) {
  if (a.has_value() != b.has_value()) throw MismatchError("bundle connections must be given for both sides or neither");
  if (a && (!(a->chart() == b->chart()) || a->fibers().names != b->fibers().names ||
            a->fibers().degrees != b->fibers().degrees))
    throw MismatchError("bundle connections act on different bundles");
}

}  // namespace

TorsionFreeConnection::TorsionFreeConnection(Chart chart, Tensor3 gamma) : chart_(std::move(chart)) {
  const std::size_t n = chart_.dim();
  check_shape(gamma, n, n, n, "Christoffel symbols");
  gamma_ = localize(gamma, chart_.base_table());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = j + 1; l < n; ++l)
        if (!(gamma_[i][j][l] == gamma_[i][l][j]))
          throw ShapeError("connection is not torsion-free: Gamma(" + index_string(i, j, l) + ") != Gamma(" +
                           index_string(i, l, j) + ")");
}

TorsionFreeConnection TorsionFreeConnection::flat(const Chart& chart) {
  const std::size_t n = chart.dim();
  return TorsionFreeConnection(chart, zeros(n, n, n, chart.base_table()));
}

BundleConnection::BundleConnection(Chart base, FiberGenerators fibers, Tensor3 coeffs)
    : chart_(std::move(base)), fibers_(std::move(fibers)) {
  if (fibers_.degrees.empty()) fibers_.degrees.assign(fibers_.names.size(), 1);
  if (fibers_.degrees.size() != fibers_.names.size()) throw ShapeError("fiber degree count mismatch");
  const std::size_t r = rank();
  check_shape(coeffs, r, chart_.dim(), r, "bundle connection coefficients");
  coeffs_ = localize(coeffs, chart_.base_table());
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t i = 0; i < chart_.dim(); ++i)
      for (std::size_t b = 0; b < r; ++b)
        if (fibers_.degrees[a] != fibers_.degrees[b] && !coeffs_[a][i][b].is_zero())
          throw ShapeError("bundle connection mixes degrees at (" + index_string(a, i, b) + ")");
}

BundleConnection BundleConnection::trivial(const Chart& base, const FiberGenerators& fibers) {
  const std::size_t r = fibers.names.size();
  return BundleConnection(base, fibers, zeros(r, base.dim(), r, base.base_table()));
}

TorsionFreeConnection interpolate_connection(const TorsionFreeConnection& a, const TorsionFreeConnection& b,
                                             const Scalar& t) {
  if (!(a.chart() == b.chart())) throw MismatchError("connections live on different charts");
  return TorsionFreeConnection(a.chart(), blend(a.symbols(), b.symbols(), t));
}

BundleConnection interpolate_connection(const BundleConnection& a, const BundleConnection& b, const Scalar& t) {
  require_pair(a, b);
  const std::size_t r = a.rank();
  const std::size_t n = a.chart().dim();
  Tensor3 ca(r, std::vector<std::vector<SuperPoly>>(n)), cb = ca;
  for (std::size_t al = 0; al < r; ++al)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t be = 0; be < r; ++be) {
        ca[al][i].push_back(a(al, i, be));
        cb[al][i].push_back(b(al, i, be));
      }
  return BundleConnection(a.chart(), a.fibers(), blend(ca, cb, t));
}

std::vector<SuperPoly> geodesic_jet(const TorsionFreeConnection& gamma, int order) {
  if (order < 1) throw DomainError("geodesic expansion needs order >= 1");
  const Chart& chart = gamma.chart();
  const std::size_t n = chart.dim();
  // Jet coordinates of curves: z^s are the chart coordinates, p^s the first derivatives (the xi
  // generators). On the prolonged geodesic equation the total derivative is
  //   D_t = p^s d/dz^s - Gamma^s_{jl}(z) p^j p^l d/dp^s.
  const TablePtr t = jet_table(chart, order, JetBasis::normal);
  std::vector<SuperPoly> p;
  for (const auto& c : chart.coords) p.push_back(SuperPoly::generator(t, normal_generator_name(c)));
  std::vector<SuperPoly> acceleration(n, SuperPoly(t));  // -Gamma^s_{jl}(z) p^j p^l
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        if (!gamma(s, j, l).is_zero()) acceleration[s] -= embed(gamma(s, j, l), t) * p[j] * p[l];

  auto total_derivative = [&](const SuperPoly& f) {
    SuperPoly out(t);
    for (std::size_t s = 0; s < n; ++s) {
      out += p[s] * derive(f, chart.coords[s]);
      out += acceleration[s] * derive(f, normal_generator_name(chart.coords[s]));
    }
    return out;
  };

  std::vector<SuperPoly> dx;
  for (std::size_t i = 0; i < n; ++i) {
    // d_t^m z^i at t = 0 is D_t^{m-1}(p^i); start from the acceleration at m = 2.
    SuperPoly sum = p[i];
    SuperPoly derivative = acceleration[i];
    for (int m = 2; m <= order && !derivative.is_zero(); ++m) {
      sum += (Scalar(1) / factorial(static_cast<unsigned>(m))) * derivative;
      derivative = total_derivative(derivative);
    }
    dx.push_back(sum);
  }
  return dx;
}

ChiDerivation::ChiDerivation(TorsionFreeConnection gamma, std::optional<BundleConnection> bundle, int order)
    : gamma_(std::move(gamma)), bundle_(std::move(bundle)), order_(order) {
  if (order_ < 0) throw DomainError("order must be non-negative");
  const Chart& chart = gamma_.chart();
  if (bundle_ && !(bundle_->chart() == chart)) throw MismatchError("connections live on different charts");
  table_ = jet_table(chart, order_, JetBasis::normal, fibers());
  const std::size_t n = chart.dim();
  for (const auto& c : chart.coords) xi_.push_back(SuperPoly::generator(table_, normal_generator_name(c)));
  for (std::size_t s = 0; s < n; ++s) {
    SuperPoly q(table_);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        if (!gamma_(s, j, l).is_zero()) q += embed(gamma_(s, j, l), table_) * xi_[j] * xi_[l];
    quadratic_.push_back(q);
  }
  if (bundle_) {
    const auto& names = bundle_->fibers().names;
    for (std::size_t a = 0; a < names.size(); ++a) {
      SuperPoly f(table_);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < names.size(); ++b)
          if (!(*bundle_)(a, i, b).is_zero())
            f += embed((*bundle_)(a, i, b), table_) * xi_[i] * SuperPoly::generator(table_, names[b]);
      fiber_terms_.push_back(f);
    }
  }
}

FiberGenerators ChiDerivation::fibers() const { return bundle_ ? bundle_->fibers() : FiberGenerators{}; }

SuperPoly ChiDerivation::operator()(const SuperPoly& p) const {
  if (!same_table(p.table_ptr(), table_)) throw MismatchError("chi applied outside its algebra");
  const Chart& chart = gamma_.chart();
  SuperPoly out(table_);
  for (std::size_t s = 0; s < chart.dim(); ++s) {
    out += xi_[s] * derive(p, chart.coords[s]);
    if (!quadratic_[s].is_zero()) out -= quadratic_[s] * derive(p, normal_generator_name(chart.coords[s]));
  }
  for (std::size_t a = 0; a < fiber_terms_.size(); ++a)
    if (!fiber_terms_[a].is_zero()) out -= fiber_terms_[a] * derive(p, bundle_->fibers().names[a]);
  return out;
}

ChiDerivation chi(const TorsionFreeConnection& gamma, const std::optional<BundleConnection>& bundle, int order) {
  return ChiDerivation(gamma, bundle, order);
}

SuperPoly exp_chi(const ChiDerivation& chi, const SuperPoly& p) {
  SuperPoly term = embed(p, chi.table());
  SuperPoly sum = term;
  for (int m = 1; m <= chi.order() && !term.is_zero(); ++m) {
    term = Scalar(1, m) * chi(term);
    sum += term;
  }
  return sum;
}

namespace {

AlgebraMap build_forward(const ChiDerivation& chi) {
  const Chart& chart = chi.connection().chart();
  const FiberGenerators fibers = chi.fibers();
  const TablePtr jets = jet_table(chart, chi.order(), JetBasis::jet, fibers);
  Assignments images;
  const std::vector<SuperPoly> dx = geodesic_jet(chi.connection(), std::max(chi.order(), 1));
  for (std::size_t i = 0; i < chart.dim(); ++i)
    images.emplace(jet_generator_name(chart.coords[i]), embed(dx[i], chi.table()));
  for (const auto& v : fibers.names) images.emplace(v, exp_chi(chi, SuperPoly::generator(chi.table(), v)));
  return AlgebraMap(jets, chi.table(), std::move(images));
}

AlgebraMap build_backward(const ChiDerivation& chi, const AlgebraMap& forward) {
  const Chart& chart = chi.connection().chart();
  const FiberGenerators fibers = chi.fibers();
  // Read the forward images as a self-map of the normal table (dx^i <-> xi^i) and invert it there.
  std::vector<std::string> gens;
  std::vector<SuperPoly> images;
  for (const auto& c : chart.coords) {
    gens.push_back(normal_generator_name(c));
    images.push_back(forward.image(jet_generator_name(c)));
  }
  for (const auto& v : fibers.names) {
    gens.push_back(v);
    images.push_back(forward.image(v));
  }
  const std::vector<SuperPoly> inverse = invert_triangular(gens, images);
  const TablePtr jets = forward.source();
  Assignments rename;
  for (const auto& c : chart.coords)
    rename.emplace(normal_generator_name(c), SuperPoly::generator(jets, jet_generator_name(c)));
  Assignments result;
  for (std::size_t g = 0; g < gens.size(); ++g) result.emplace(gens[g], substitute(inverse[g], rename, jets));
  return AlgebraMap(chi.table(), jets, std::move(result));
}

}  // namespace

PhiIsomorphism::PhiIsomorphism(const TorsionFreeConnection& gamma, const std::optional<BundleConnection>& bundle,
                               int order)
    : chi_(gamma, bundle, order), forward_(build_forward(chi_)), backward_(build_backward(chi_, forward_)) {}

JetElement PhiIsomorphism::operator()(const JetElement& j) const {
  if (j.basis != JetBasis::jet || !(j.chart == chi_.connection().chart()) || j.order != chi_.order())
    throw MismatchError("Phi expects a jet on its chart, order and basis");
  return JetElement{j.chart, j.order, JetBasis::normal, forward_(j.value)};
}

JetElement PhiIsomorphism::inverse(const JetElement& s) const {
  if (s.basis != JetBasis::normal || !(s.chart == chi_.connection().chart()) || s.order != chi_.order())
    throw MismatchError("Phi^-1 expects an element of the normal algebra on its chart and order");
  return JetElement{s.chart, s.order, JetBasis::jet, backward_(s.value)};
}

JetElement phi(const TorsionFreeConnection& gamma, const std::optional<BundleConnection>& bundle, int order,
               const JetElement& j) {
  return PhiIsomorphism(gamma, bundle, order)(j);
}

AlgebraMap psi_automorphism(const TorsionFreeConnection& gamma0, const TorsionFreeConnection& gamma1,
                            const std::optional<BundleConnection>& bundle0,
                            const std::optional<BundleConnection>& bundle1, int order) {
  if (!(gamma0.chart() == gamma1.chart())) throw MismatchError("connections live on different charts");
  require_pair(bundle0, bundle1);
  const PhiIsomorphism phi0(gamma0, bundle0, order);
  const PhiIsomorphism phi1(gamma1, bundle1, order);
  return phi1.forward().after(phi0.backward());
}

}  // namespace superjet
