#include "superjet/generators.hpp"

#include <set>

#include "superjet/errors.hpp"

namespace superjet {

GeneratorTable::GeneratorTable(std::vector<std::string> base, std::vector<std::string> formal,
                               std::vector<std::string> odd, int truncation,
                               std::vector<int> odd_degrees)
    : base_(std::move(base)),
      formal_(std::move(formal)),
      odd_(std::move(odd)),
      odd_degrees_(std::move(odd_degrees)),
      truncation_(truncation) {
  if (truncation_ < 0) throw DomainError("truncation order must be non-negative");
  if (odd_.size() > 64) throw DomainError("at most 64 odd generators are supported");
  if (odd_degrees_.empty()) odd_degrees_.assign(odd_.size(), 1);
  if (odd_degrees_.size() != odd_.size()) throw ShapeError("odd degree tags do not match odd generators");
  for (int d : odd_degrees_) {
    if (d % 2 == 0) throw ParityError("odd generator with even Z-degree " + std::to_string(d));
  }
  std::set<std::string, std::less<>> seen;
  for (const auto* group : {&base_, &formal_, &odd_}) {
    for (const auto& n : *group) {
      if (n.empty()) throw ShapeError("empty generator name");
      if (!seen.insert(n).second) throw ShapeError("duplicate generator name '" + n + "'");
    }
  }
}

std::optional<GenRef> GeneratorTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < base_.size(); ++i)
    if (base_[i] == name) return GenRef{GenKind::base, i};
  for (std::size_t i = 0; i < formal_.size(); ++i)
    if (formal_[i] == name) return GenRef{GenKind::formal, i};
  for (std::size_t i = 0; i < odd_.size(); ++i)
    if (odd_[i] == name) return GenRef{GenKind::odd, i};
  return std::nullopt;
}

GenRef GeneratorTable::lookup(std::string_view name) const {
  auto ref = find(name);
  if (!ref) throw UnknownGeneratorError("unknown generator '" + std::string(name) + "'");
  return *ref;
}

const std::string& GeneratorTable::name(GenRef ref) const {
  switch (ref.kind) {
    case GenKind::base: return base_.at(ref.index);
    case GenKind::formal: return formal_.at(ref.index);
    case GenKind::odd: return odd_.at(ref.index);
  }
  throw UnknownGeneratorError("bad generator reference");
}

bool operator==(const GeneratorTable& a, const GeneratorTable& b) {
  return a.truncation_ == b.truncation_ && a.base_ == b.base_ && a.formal_ == b.formal_ &&
         a.odd_ == b.odd_ && a.odd_degrees_ == b.odd_degrees_;
}

TablePtr make_table(std::vector<std::string> base, std::vector<std::string> formal,
                    std::vector<std::string> odd, int truncation, std::vector<int> odd_degrees) {
  return std::make_shared<const GeneratorTable>(std::move(base), std::move(formal), std::move(odd),
                                                truncation, std::move(odd_degrees));
}

bool same_table(const TablePtr& a, const TablePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace superjet
