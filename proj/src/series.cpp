#include "superjet/series.hpp"

#include "superjet/errors.hpp"

namespace superjet {

AlgebraMap::AlgebraMap(TablePtr source, TablePtr target, Assignments images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  for (const auto& [name, value] : images_) {
    if (!source_->find(name)) throw UnknownGeneratorError("map image for unknown generator '" + name + "'");
    if (!same_table(value.table_ptr(), target_)) throw MismatchError("map image for '" + name + "' has wrong table");
  }
}

AlgebraMap AlgebraMap::identity(const TablePtr& table) { return AlgebraMap(table, table, {}); }

SuperPoly AlgebraMap::image(const std::string& generator) const {
  auto it = images_.find(generator);
  if (it != images_.end()) return it->second;
  source_->lookup(generator);
  return SuperPoly::generator(target_, generator);
}

SuperPoly AlgebraMap::operator()(const SuperPoly& p) const {
  if (!same_table(p.table_ptr(), source_)) throw MismatchError("argument is not over the map's source table");
  return substitute(p, images_, target_);
}

AlgebraMap AlgebraMap::after(const AlgebraMap& first) const {
  if (!same_table(first.target_, source_)) throw MismatchError("maps are not composable");
  Assignments composed;
  auto add = [&](const std::vector<std::string>& names) {
    for (const auto& n : names) composed.emplace(n, (*this)(first.image(n)));
  };
  add(first.source_->base());
  add(first.source_->formal());
  add(first.source_->odd());
  return AlgebraMap(first.source_, target_, std::move(composed));
}

bool operator==(const AlgebraMap& a, const AlgebraMap& b) {
  if (!same_table(a.source_, b.source_) || !same_table(a.target_, b.target_)) return false;
  for (const auto* names : {&a.source_->base(), &a.source_->formal(), &a.source_->odd()})
    for (const auto& n : *names)
      if (!(a.image(n) == b.image(n))) return false;
  return true;
}

std::vector<SuperPoly> invert_triangular(const std::vector<std::string>& generators,
                                         const std::vector<SuperPoly>& images) {
  if (generators.size() != images.size()) throw ShapeError("generator/image count mismatch");
  if (images.empty()) return {};
  const TablePtr table = images.front().table_ptr();
  std::vector<SuperPoly> gens;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (!same_table(images[i].table_ptr(), table)) throw MismatchError("images over different tables");
    gens.push_back(SuperPoly::generator(table, generators[i]));
    const int level = table->lookup(generators[i]).kind == GenKind::formal ? 1 : 0;
    const SuperPoly rest = images[i] - gens.back();
    if (!rest.is_zero() && rest.min_formal_degree() <= level)
      throw DomainError("linear part of the image of '" + generators[i] + "' is not the identity");
  }

  auto apply = [&](const std::vector<SuperPoly>& w) {
    Assignments a;
    for (std::size_t i = 0; i < generators.size(); ++i) a.emplace(generators[i], w[i]);
    std::vector<SuperPoly> out;
    for (const auto& img : images) out.push_back(substitute(img, a, table));
    return out;
  };

  std::vector<SuperPoly> w = gens;
  const int rounds = table->truncation() + 1;
  for (int r = 0; r < rounds; ++r) {
    const std::vector<SuperPoly> vw = apply(w);
    bool done = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const SuperPoly residual = vw[i] - gens[i];
      if (!residual.is_zero()) done = false;
      w[i] = w[i] - residual;
    }
    if (done) break;
  }
  return w;
}

std::vector<SuperPoly> series_invert(const std::vector<SuperPoly>& v) {
  if (v.empty()) return {};
  const GeneratorTable& t = v.front().table();
  if (v.size() != t.formal_count()) throw ShapeError("series_invert needs one component per formal generator");
  for (const auto& c : v) {
    if (c.min_formal_degree() < 1) throw DomainError("series has a non-zero constant part");
  }
  return invert_triangular(t.formal(), v);
}

}  // namespace superjet
