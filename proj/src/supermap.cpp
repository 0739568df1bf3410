#include "superjet/supermap.hpp"

#include <algorithm>
#include <set>

#include "superjet/errors.hpp"

namespace superjet {

namespace {

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

std::uint64_t mask_of(const OddIndex& idx, std::size_t shift = 0) {
  std::uint64_t m = 0;
  for (int i : idx) m |= bit(static_cast<std::size_t>(i) + shift);
  return m;
}

OddIndex index_of(std::uint64_t mask) {
  OddIndex out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

std::vector<SuperPoly> embed_all(const std::vector<SuperPoly>& ps, const TablePtr& t) {
  std::vector<SuperPoly> out;
  for (const auto& p : ps) out.push_back(embed(p, t));
  return out;
}

void require_presentation_match(const SuperManifoldPresentation& a, const SuperManifoldPresentation& b,
                                const char* what) {
  if (!(a == b)) throw MismatchError(std::string(what) + " presentations differ");
}

// Splits a polynomial over source_table into coefficients of theta-subsets; the parameter
// factor stays in the coefficient (to the left of theta^B).
ComponentMap decompose(const SuperPoly& p, std::size_t parameter_count, const TablePtr& components) {
  const std::uint64_t low = parameter_count == 0 ? 0 : (bit(parameter_count) - 1);
  std::map<OddIndex, SuperPoly> out;
  for (const auto& [mono, c] : p.terms()) {
    const OddIndex key = index_of(mono.odd >> parameter_count);
    auto it = out.try_emplace(key, SuperPoly(components)).first;
    it->second.add_term(Monomial{mono.base, {}, mono.odd & low}, c);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

SuperPoly recompose(const ComponentMap& comps, std::size_t parameter_count, const TablePtr& source) {
  SuperPoly out(source);
  for (const auto& [key, c] : comps) {
    Monomial m;
    m.base.assign(source->base_count(), 0);
    m.odd = mask_of(key, parameter_count);
    out += mul(embed(c, source), SuperPoly::term(source, m, Scalar(1)));
  }
  return out;
}

}  // namespace

SuperManifoldPresentation make_presentation(Chart chart, std::vector<std::string> odd,
                                            std::vector<int> fiber_degrees) {
  chart = make_chart(std::move(chart.name), std::move(chart.coords));
  if (fiber_degrees.empty()) fiber_degrees.assign(odd.size(), 1);
  if (fiber_degrees.size() != odd.size()) throw ShapeError("fiber degree count mismatch");
  for (int d : fiber_degrees)
    if (d % 2 == 0) throw ShapeError("odd generators must carry odd fiber degrees");
  std::set<std::string> names(chart.coords.begin(), chart.coords.end());
  for (const auto& o : odd)
    if (!names.insert(o).second) throw ShapeError("duplicate generator name '" + o + "'");
  return SuperManifoldPresentation{std::move(chart), std::move(odd), std::move(fiber_degrees)};
}

std::pair<OddIndex, int> canonical_index(std::vector<int> indices) {
  int sign = 1;
  for (std::size_t i = 1; i < indices.size(); ++i)
    for (std::size_t j = i; j > 0 && indices[j - 1] >= indices[j]; --j) {
      if (indices[j - 1] == indices[j]) return {{}, 0};
      std::swap(indices[j - 1], indices[j]);
      sign = -sign;
    }
  return {std::move(indices), sign};
}

TablePtr source_table(const SuperManifoldPresentation& source, const std::vector<std::string>& parameters) {
  std::vector<std::string> odd = parameters;
  std::vector<int> degrees(parameters.size(), 1);
  odd.insert(odd.end(), source.odd.begin(), source.odd.end());
  degrees.insert(degrees.end(), source.fiber_degrees.begin(), source.fiber_degrees.end());
  return make_table(source.chart.coords, {}, std::move(odd), 0, std::move(degrees));
}

TablePtr component_table(const SuperManifoldPresentation& source, const std::vector<std::string>& parameters) {
  return make_table(source.chart.coords, {}, parameters, 0);
}

TablePtr target_table(const SuperManifoldPresentation& target) {
  return make_table(target.chart.coords, {}, target.odd, 0, target.fiber_degrees);
}

std::vector<SuperPoly> SuperMorphism::base_map() const {
  const TablePtr base = source.chart.base_table();
  std::vector<SuperPoly> out;
  for (const auto& x : x_pullbacks)
    out.push_back(embed(x.filter([](const Monomial& m) { return m.odd == 0; }), base));
  return out;
}

SuperPoly SuperMorphism::pullback(const SuperPoly& g) const {
  const TablePtr t = table();
  Assignments a;
  for (std::size_t i = 0; i < x_pullbacks.size(); ++i) a.emplace(target.chart.coords[i], x_pullbacks[i]);
  for (std::size_t i = 0; i < eta_pullbacks.size(); ++i) a.emplace(target.odd[i], eta_pullbacks[i]);
  return substitute(embed(g, target_table(target)), a, t);
}

bool operator==(const SuperMorphism& a, const SuperMorphism& b) {
  return a.source == b.source && a.target == b.target && a.parameters == b.parameters &&
         a.x_pullbacks == b.x_pullbacks && a.eta_pullbacks == b.eta_pullbacks;
}

SuperMorphism make_morphism(SuperManifoldPresentation source, SuperManifoldPresentation target,
                            std::vector<SuperPoly> x_pullbacks, std::vector<SuperPoly> eta_pullbacks,
                            std::vector<std::string> parameters) {
  if (x_pullbacks.size() != target.chart.dim())
    throw ShapeError("expected " + std::to_string(target.chart.dim()) + " coordinate pullbacks, got " +
                     std::to_string(x_pullbacks.size()));
  if (eta_pullbacks.size() != target.odd_rank())
    throw ShapeError("expected " + std::to_string(target.odd_rank()) + " odd pullbacks, got " +
                     std::to_string(eta_pullbacks.size()));
  const TablePtr t = source_table(source, parameters);
  SuperMorphism f{std::move(source), std::move(target), std::move(parameters), embed_all(x_pullbacks, t),
                  embed_all(eta_pullbacks, t)};
  for (std::size_t i = 0; i < f.x_pullbacks.size(); ++i)
    if (f.x_pullbacks[i].parity() != Parity::even)
      throw ParityError("pullback of '" + f.target.chart.coords[i] + "' is not even");
  for (std::size_t i = 0; i < f.eta_pullbacks.size(); ++i)
    if (!f.eta_pullbacks[i].is_zero() && f.eta_pullbacks[i].parity() != Parity::odd)
      throw ParityError("pullback of '" + f.target.odd[i] + "' is not odd");
  return f;
}

SuperMorphism identity_morphism(const SuperManifoldPresentation& m) {
  const TablePtr t = source_table(m);
  std::vector<SuperPoly> x, eta;
  for (const auto& c : m.chart.coords) x.push_back(SuperPoly::generator(t, c));
  for (const auto& o : m.odd) eta.push_back(SuperPoly::generator(t, o));
  return make_morphism(m, m, std::move(x), std::move(eta));
}

bool operator==(const SuperfieldSection& a, const SuperfieldSection& b) {
  return a.source == b.source && a.target == b.target && a.parameters == b.parameters && a.mode == b.mode &&
         a.base_map == b.base_map && a.tangent == b.tangent && a.fiber == b.fiber;
}

bool check_even_degree(const SuperfieldSection& s) {
  for (const auto& comps : s.tangent)
    for (const auto& [key, c] : comps)
      if (key.size() % 2 != 0 && !c.is_zero()) return false;
  for (const auto& comps : s.fiber)
    for (const auto& [key, c] : comps)
      if (key.size() % 2 != 1 && !c.is_zero()) return false;
  return true;
}

SuperfieldSection make_section(SuperManifoldPresentation source, SuperManifoldPresentation target,
                               std::vector<SuperPoly> base_map, std::vector<ComponentMap> tangent,
                               std::vector<ComponentMap> fiber, ParityMode mode,
                               std::vector<std::string> parameters) {
  const std::size_t n = target.chart.dim();
  if (base_map.size() != n) throw ShapeError("base map needs one component per target coordinate");
  if (tangent.size() != n) throw ShapeError("tangent components need one entry per target coordinate");
  if (fiber.size() != target.odd_rank()) throw ShapeError("fiber components need one entry per target odd generator");
  const TablePtr comp = component_table(source, parameters);
  const int q = static_cast<int>(source.odd_rank());
  auto normalize = [&](std::vector<ComponentMap>& all, bool allow_empty_key) {
    for (auto& comps : all) {
      ComponentMap clean;
      for (auto& [key, c] : comps) {
        for (std::size_t i = 0; i < key.size(); ++i) {
          if (key[i] < 0 || key[i] >= q) throw ShapeError("odd index out of range");
          if (i > 0 && key[i - 1] >= key[i]) throw ShapeError("odd index tuple is not strictly ascending");
        }
        if (key.empty() && !allow_empty_key)
          throw ShapeError("tangent component at m = 0 is only meaningful with parameters");
        SuperPoly v = embed(c, comp);
        if (!v.is_zero()) clean.emplace(key, std::move(v));
      }
      comps = std::move(clean);
    }
  };
  normalize(tangent, !parameters.empty());
  normalize(fiber, true);
  base_map = embed_all(base_map, source.chart.base_table());
  SuperfieldSection s{std::move(source), std::move(target), std::move(parameters), mode,
                      std::move(base_map), std::move(tangent), std::move(fiber)};
  if (mode == ParityMode::even_only && !check_even_degree(s))
    throw ParityError("section is not of even degree");
  return s;
}

int correspondence_order(const SuperManifoldPresentation& source, const std::vector<std::string>& parameters) {
  return static_cast<int>(source.odd_rank() + parameters.size());
}

SectionCorrespondence::SectionCorrespondence(SuperManifoldPresentation target, TorsionFreeConnection gamma,
                                             std::optional<BundleConnection> bundle, int order)
    : target_(std::move(target)), gamma_(std::move(gamma)), bundle_(std::move(bundle)), order_(order) {
  if (!(gamma_.chart() == target_.chart)) throw MismatchError("connection lives on a different chart than the target");
  if (target_.odd_rank() == 0) {
    if (bundle_ && bundle_->rank() != 0) throw MismatchError("bundle connection given for a target without odd generators");
    bundle_.reset();
  } else if (!bundle_) {
    bundle_ = BundleConnection::trivial(target_.chart, target_.fibers());
  } else if (!(bundle_->chart() == target_.chart) || bundle_->fibers().names != target_.odd ||
             bundle_->fibers().degrees != target_.fiber_degrees) {
    throw MismatchError("bundle connection does not act on the target's odd bundle");
  }
  const ChiDerivation chi(gamma_, bundle_, order_);
  normal_ = chi.table();
  const std::vector<SuperPoly> dx = geodesic_jet(gamma_, std::max(order_, 1));
  for (std::size_t i = 0; i < target_.chart.dim(); ++i) {
    generators_.push_back(normal_generator_name(target_.chart.coords[i]));
    forward_.push_back(embed(dx[i], normal_));
  }
  for (const auto& v : target_.odd) {
    generators_.push_back(v);
    forward_.push_back(exp_chi(chi, SuperPoly::generator(normal_, v)));
  }
  inverse_ = invert_triangular(generators_, forward_);
}

SuperfieldSection SectionCorrespondence::to_section(const SuperMorphism& f) const {
  require_presentation_match(f.target, target_, "target");
  if (correspondence_order(f.source, f.parameters) > order_)
    throw DomainError("truncation order " + std::to_string(order_) + " is below the source odd rank");
  const TablePtr S = f.table();
  const std::vector<SuperPoly> f0 = f.base_map();
  const std::size_t n = target_.chart.dim();
  Assignments a;
  for (std::size_t i = 0; i < n; ++i) {
    const SuperPoly base = embed(f0[i], S);
    a.emplace(target_.chart.coords[i], base);
    a.emplace(generators_[i], f.x_pullbacks[i] - base);
  }
  for (std::size_t al = 0; al < target_.odd_rank(); ++al) a.emplace(target_.odd[al], f.eta_pullbacks[al]);

  const TablePtr comp = component_table(f.source, f.parameters);
  std::vector<ComponentMap> tangent, fiber;
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    ComponentMap c = decompose(substitute(inverse_[g], a, S), f.parameters.size(), comp);
    (g < n ? tangent : fiber).push_back(std::move(c));
  }
  return make_section(f.source, f.target, f0, std::move(tangent), std::move(fiber),
                      f.parameters.empty() ? ParityMode::even_only : ParityMode::all, f.parameters);
}

SuperMorphism SectionCorrespondence::to_morphism(const SuperfieldSection& s) const {
  require_presentation_match(s.target, target_, "target");
  if (correspondence_order(s.source, s.parameters) > order_)
    throw DomainError("truncation order " + std::to_string(order_) + " is below the source odd rank");
  const TablePtr S = source_table(s.source, s.parameters);
  const std::size_t n = target_.chart.dim();
  const std::size_t p = s.parameters.size();
  Assignments a;
  std::vector<SuperPoly> base;
  for (std::size_t i = 0; i < n; ++i) {
    base.push_back(embed(s.base_map[i], S));
    a.emplace(target_.chart.coords[i], base.back());
    const auto m0 = s.tangent[i].find(OddIndex{});
    if (m0 != s.tangent[i].end() && !m0->second.filter([](const Monomial& m) { return m.odd == 0; }).is_zero())
      throw DomainError("tangent component at m = 0 must lie in the parameter ideal");
    a.emplace(generators_[i], recompose(s.tangent[i], p, S));
  }
  for (std::size_t al = 0; al < target_.odd_rank(); ++al) a.emplace(target_.odd[al], recompose(s.fiber[al], p, S));
  std::vector<SuperPoly> x, eta;
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    SuperPoly v = substitute(forward_[g], a, S);
    if (g < n) x.push_back(base[g] + v);
    else eta.push_back(std::move(v));
  }
  return make_morphism(s.source, s.target, std::move(x), std::move(eta), s.parameters);
}

SuperfieldSection morphism_to_section(const SuperMorphism& f, const TorsionFreeConnection& gamma,
                                      const std::optional<BundleConnection>& bundle) {
  return SectionCorrespondence(f.target, gamma, bundle, correspondence_order(f.source, f.parameters)).to_section(f);
}

SuperMorphism section_to_morphism(const SuperfieldSection& s, const TorsionFreeConnection& gamma,
                                  const std::optional<BundleConnection>& bundle) {
  return SectionCorrespondence(s.target, gamma, bundle, correspondence_order(s.source, s.parameters)).to_morphism(s);
}

SuperMorphism compose(const SuperMorphism& g, const SuperMorphism& f) {
  require_presentation_match(f.target, g.source, "intermediate");
  if (!g.parameters.empty()) throw MismatchError("the outer morphism of a composition must be classical");
  std::vector<SuperPoly> x, eta;
  for (const auto& p : g.x_pullbacks) x.push_back(f.pullback(p));
  for (const auto& p : g.eta_pullbacks) eta.push_back(f.pullback(p));
  return make_morphism(f.source, g.target, std::move(x), std::move(eta), f.parameters);
}

SuperPoly diagonal_vanishing_check(const SuperMorphism& f, const SuperPoly& F) {
  const TablePtr S = f.table();
  const std::vector<SuperPoly> f0 = f.base_map();
  Assignments a;
  for (std::size_t i = 0; i < f.target.chart.dim(); ++i) {
    a.emplace(f.target.chart.coords[i], embed(f0[i], S));
    a.emplace(primed_name(f.target.chart.coords[i]), f.x_pullbacks[i]);
  }
  return substitute(embed(F, diagonal_table(f.target.chart)), a, S);
}

namespace {

struct SplitPositions {
  std::vector<int> outer;  // positions in source.odd
  std::vector<int> inner;
};

SplitPositions split_positions(const SuperManifoldPresentation& source, const ProductSplit& split) {
  const std::set<std::string> coords(source.chart.coords.begin(), source.chart.coords.end());
  std::set<std::string> seen;
  for (const auto& c : split.outer_coords) {
    if (!coords.count(c)) throw ShapeError("split names unknown coordinate '" + c + "'");
    if (!seen.insert(c).second) throw ShapeError("split repeats '" + c + "'");
  }
  const std::set<std::string> outer(split.outer_odd.begin(), split.outer_odd.end());
  if (outer.size() != split.outer_odd.size()) throw ShapeError("split repeats an odd generator");
  SplitPositions pos;
  for (std::size_t i = 0; i < source.odd.size(); ++i)
    (outer.count(source.odd[i]) ? pos.outer : pos.inner).push_back(static_cast<int>(i));
  if (pos.outer.size() != outer.size()) throw ShapeError("split names an unknown odd generator");
  return pos;
}

std::vector<std::string> pick(const std::vector<std::string>& names, const std::vector<int>& positions) {
  std::vector<std::string> out;
  for (int p : positions) out.push_back(names[static_cast<std::size_t>(p)]);
  return out;
}

}  // namespace

std::vector<std::string> CurriedSection::outer_odd() const { return pick(source.odd, split_positions(source, split).outer); }
std::vector<std::string> CurriedSection::inner_odd() const { return pick(source.odd, split_positions(source, split).inner); }

bool operator==(const CurriedSection& a, const CurriedSection& b) {
  return a.source == b.source && a.target == b.target && a.split == b.split && a.mode == b.mode &&
         a.base_map == b.base_map && a.tangent == b.tangent && a.fiber == b.fiber;
}

CurriedSection curry(const SuperfieldSection& s, const ProductSplit& split) {
  if (!s.parameters.empty()) throw MismatchError("curry expects a section without parameters");
  const SplitPositions pos = split_positions(s.source, split);
  auto regroup = [&](const std::vector<ComponentMap>& all) {
    std::vector<BlockMap> out;
    for (const auto& comps : all) {
      BlockMap blocks;
      for (const auto& [key, c] : comps) {
        OddIndex A, B;
        std::uint64_t ma = 0, mb = 0;
        for (int k : key) {
          const auto o = std::find(pos.outer.begin(), pos.outer.end(), k);
          if (o != pos.outer.end()) {
            A.push_back(static_cast<int>(o - pos.outer.begin()));
            ma |= bit(static_cast<std::size_t>(k));
          } else {
            B.push_back(static_cast<int>(std::find(pos.inner.begin(), pos.inner.end(), k) - pos.inner.begin()));
            mb |= bit(static_cast<std::size_t>(k));
          }
        }
        blocks.emplace(BlockIndex{A, B}, Scalar(koszul_sign(ma, mb)) * c);
      }
      out.push_back(std::move(blocks));
    }
    return out;
  };
  return CurriedSection{s.source, s.target, split, s.mode, s.base_map, regroup(s.tangent), regroup(s.fiber)};
}

SuperfieldSection uncurry(const CurriedSection& c) {
  const SplitPositions pos = split_positions(c.source, c.split);
  auto regroup = [&](const std::vector<BlockMap>& all) {
    std::vector<ComponentMap> out;
    for (const auto& blocks : all) {
      ComponentMap comps;
      for (const auto& [block, v] : blocks) {
        if (!std::is_sorted(block.first.begin(), block.first.end()) ||
            std::adjacent_find(block.first.begin(), block.first.end()) != block.first.end() ||
            !std::is_sorted(block.second.begin(), block.second.end()) ||
            std::adjacent_find(block.second.begin(), block.second.end()) != block.second.end())
          throw ShapeError("block indices are not strictly ascending");
        std::uint64_t ma = 0, mb = 0;
        for (int a : block.first) {
          if (a < 0 || static_cast<std::size_t>(a) >= pos.outer.size()) throw ShapeError("outer block index out of range");
          ma |= bit(static_cast<std::size_t>(pos.outer[static_cast<std::size_t>(a)]));
        }
        for (int b : block.second) {
          if (b < 0 || static_cast<std::size_t>(b) >= pos.inner.size()) throw ShapeError("inner block index out of range");
          mb |= bit(static_cast<std::size_t>(pos.inner[static_cast<std::size_t>(b)]));
        }
        comps.emplace(index_of(ma | mb), Scalar(koszul_sign(ma, mb)) * v);
      }
      out.push_back(std::move(comps));
    }
    return out;
  };
  return make_section(c.source, c.target, c.base_map, regroup(c.tangent), regroup(c.fiber), c.mode);
}

}  // namespace superjet
