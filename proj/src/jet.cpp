#include "superjet/jet.hpp"

#include <set>

#include "superjet/errors.hpp"

namespace superjet {

TablePtr Chart::base_table() const { return make_table(coords); }

Chart make_chart(std::string name, std::vector<std::string> coords) {
  if (coords.empty()) throw ShapeError("chart '" + name + "' needs at least one coordinate");
  std::set<std::string> seen(coords.begin(), coords.end());
  if (seen.size() != coords.size()) throw ShapeError("chart '" + name + "' has duplicate coordinates");
  return Chart{std::move(name), std::move(coords)};
}

std::string jet_generator_name(const std::string& coord) { return "d" + coord; }

std::string normal_generator_name(const std::string& coord) {
  if (!coord.empty() && coord[0] == 'x') return "xi" + coord.substr(1);
  return "xi_" + coord;
}

std::string primed_name(const std::string& coord) { return coord + "'"; }

TablePtr jet_table(const Chart& chart, int order, JetBasis basis, const FiberGenerators& fibers) {
  if (order < 0) throw DomainError("jet order must be non-negative");
  std::vector<int> degrees = fibers.degrees;
  if (degrees.empty()) degrees.assign(fibers.names.size(), 1);
  if (degrees.size() != fibers.names.size()) throw ShapeError("fiber degree count mismatch");
  std::vector<std::string> base = chart.coords;
  std::vector<std::string> formal;
  std::vector<std::string> odd;
  std::vector<int> odd_degrees;
  for (const auto& c : chart.coords)
    formal.push_back(basis == JetBasis::jet ? jet_generator_name(c) : normal_generator_name(c));
  for (std::size_t i = 0; i < fibers.names.size(); ++i) {
    if (degrees[i] % 2 == 0) {
      base.push_back(fibers.names[i]);
    } else {
      odd.push_back(fibers.names[i]);
      odd_degrees.push_back(degrees[i]);
    }
  }
  return make_table(std::move(base), std::move(formal), std::move(odd), order, std::move(odd_degrees));
}

TablePtr diagonal_table(const Chart& chart) {
  std::vector<std::string> base = chart.coords;
  for (const auto& c : chart.coords) base.push_back(primed_name(c));
  return make_table(std::move(base));
}

JetElement multiply(const JetElement& a, const JetElement& b) {
  if (!(a.chart == b.chart)) throw MismatchError("jets live on different charts");
  if (a.order != b.order) throw MismatchError("jets of different orders");
  if (a.basis != b.basis) throw MismatchError("jets in different bases");
  return JetElement{a.chart, a.order, a.basis, mul(a.value, b.value)};
}

namespace {

// Accumulates dx^mu / mu! * d^mu h for all mu with |mu| <= order, one variable at a time.
void taylor_terms(const SuperPoly& h, const Chart& chart, std::size_t var, int budget, Monomial& mono,
                  Scalar weight, const TablePtr& target, SuperPoly& out) {
  if (h.is_zero()) return;
  if (var == chart.dim()) {
    out += SuperPoly::term(target, mono, weight) * embed(h, target);
    return;
  }
  SuperPoly d = h;
  for (int e = 0; e <= budget && !d.is_zero(); ++e) {
    mono.formal[var] = static_cast<std::uint16_t>(e);
    taylor_terms(d, chart, var + 1, budget - e, mono, weight / factorial(static_cast<unsigned>(e)), target, out);
    d = derive(d, chart.coords[var]);
  }
  mono.formal[var] = 0;
}

SuperPoly taylor(const SuperPoly& h, const Chart& chart, const TablePtr& target,
                 const FiberGenerators& fibers = {}) {
  const SuperPoly local = embed(h, fibers.names.empty() ? chart.base_table() : jet_table(chart, 0, JetBasis::jet, fibers));
  SuperPoly out(target);
  Monomial mono;
  mono.base.assign(target->base_count(), 0);
  mono.formal.assign(target->formal_count(), 0);
  taylor_terms(local, chart, 0, target->truncation(), mono, Scalar(1), target, out);
  return out;
}

}  // namespace

JetElement jet_of_function(const SuperPoly& h, const Chart& chart, int order, const FiberGenerators& fibers) {
  if (order < 0) throw DomainError("jet order must be non-negative");
  const TablePtr t = jet_table(chart, order, JetBasis::jet, fibers);
  return JetElement{chart, order, JetBasis::jet, taylor(h, chart, t, fibers)};
}

JetElement jet_change_of_coords(const JetElement& j, const Chart& source, const std::vector<SuperPoly>& f) {
  if (f.size() != j.chart.dim()) throw MismatchError("coordinate map has the wrong number of components");
  if (j.basis != JetBasis::jet) throw MismatchError("coordinate changes act on jets in the dx basis");
  const GeneratorTable& jt = j.value.table();
  FiberGenerators fibers;
  for (std::size_t i = j.chart.dim(); i < jt.base_count(); ++i) {
    fibers.names.push_back(jt.base()[i]);
    fibers.degrees.push_back(0);
  }
  for (std::size_t i = 0; i < jt.odd_count(); ++i) {
    fibers.names.push_back(jt.odd()[i]);
    fibers.degrees.push_back(jt.odd_degrees()[i]);
  }
  const TablePtr target = jet_table(source, j.order, JetBasis::jet, fibers);
  Assignments images;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const SuperPoly fi = embed(f[i], target);
    images.emplace(j.chart.coords[i], fi);
    images.emplace(jet_generator_name(j.chart.coords[i]), taylor(f[i], source, target) - fi);
  }
  return JetElement{source, j.order, JetBasis::jet, substitute(j.value, images, target)};
}

JetElement module_action(ModuleSide side, const SuperPoly& g, const JetElement& j) {
  const TablePtr& t = j.value.table_ptr();
  SuperPoly factor = side == ModuleSide::first ? embed(g, t) : taylor(g, j.chart, t);
  if (side == ModuleSide::second && j.basis != JetBasis::jet)
    throw MismatchError("the second module structure is defined on jets in the dx basis");
  return JetElement{j.chart, j.order, j.basis, mul(factor, j.value)};
}

JetElement diagonal_representative_to_jet(const SuperPoly& r, const Chart& chart, int order) {
  const TablePtr t = jet_table(chart, order, JetBasis::jet);
  const TablePtr diag = diagonal_table(chart);
  Assignments images;
  for (const auto& c : chart.coords) {
    images.emplace(c, SuperPoly::generator(t, c));
    images.emplace(primed_name(c), SuperPoly::generator(t, c) + SuperPoly::generator(t, jet_generator_name(c)));
  }
  return JetElement{chart, order, JetBasis::jet, substitute(embed(r, diag), images, t)};
}

}  // namespace superjet
