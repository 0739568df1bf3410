#pragma once

#include <string>
#include <vector>

#include "superjet/superpoly.hpp"

namespace superjet {

/// An algebra homomorphism given by the images of (some of) the source generators; the
/// remaining generators map to their namesakes in the target table.
class AlgebraMap {
 public:
  AlgebraMap(TablePtr source, TablePtr target, Assignments images);

  static AlgebraMap identity(const TablePtr& table);

  const TablePtr& source() const noexcept { return source_; }
  const TablePtr& target() const noexcept { return target_; }
  const Assignments& images() const noexcept { return images_; }

  /// Image of a single generator (explicit or implied).
  SuperPoly image(const std::string& generator) const;

  SuperPoly operator()(const SuperPoly& p) const;

  /// (*this) after `first`: x -> (*this)(first(x)).
  AlgebraMap after(const AlgebraMap& first) const;

  /// Equality as maps: compares the images of every source generator.
  friend bool operator==(const AlgebraMap& a, const AlgebraMap& b);

 private:
  TablePtr source_;
  TablePtr target_;
  Assignments images_;
};

/// Inverts a map g_i -> v_i = g_i + Q_i on a single table, where each Q_i only holds terms of
/// formal degree strictly above that of g_i (so the map is unipotent for the formal filtration).
/// Returns w with v(w) = g. Uses the fixed-point iteration w <- g - (v(w) - w), exact after at
/// most truncation+1 rounds. Throws DomainError if the linear part is not the identity.
std::vector<SuperPoly> invert_triangular(const std::vector<std::string>& generators,
                                         const std::vector<SuperPoly>& images);

/// Series reversion over the formal generators of v's table: v_i = xi_i + (degree >= 2 terms).
std::vector<SuperPoly> series_invert(const std::vector<SuperPoly>& v);

}  // namespace superjet
