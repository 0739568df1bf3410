#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "superjet/superpoly.hpp"

namespace superjet {

/// Seeded generator whose output depends only on the seed (mt19937_64 is fully specified and
/// the range reduction below is done by hand, not by a library distribution).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi);
  bool coin() { return uniform(0, 1) == 1; }
  /// Uniform double in [lo, hi).
  double real(double lo, double hi);
  /// Small non-zero rational p/q with |p| <= 5, 1 <= q <= 3.
  Scalar rational();

 private:
  std::mt19937_64 engine_;
};

struct RandomPolyOptions {
  int terms = 3;
  int max_base_degree = 2;
  int min_formal_degree = 0;
  /// Defaults to the table's truncation order.
  std::optional<int> max_formal_degree;
  int min_odd_degree = 0;
  /// Defaults to the number of odd generators.
  std::optional<int> max_odd_degree;
  /// Restricts the odd degree of every term to this parity (0 even, 1 odd).
  std::optional<int> parity;
};

SuperPoly random_poly(Rng& rng, const TablePtr& table, const RandomPolyOptions& options = {});

}  // namespace superjet
