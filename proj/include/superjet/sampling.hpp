#pragma once

#include "superjet/connection.hpp"
#include "superjet/random.hpp"
#include "superjet/supermap.hpp"

namespace superjet {

struct ConnectionSampling {
  int max_degree = 2;
  int terms = 2;
  /// Probability (in percent) that an independent entry is non-zero.
  int density = 60;
};

/// Random symmetric Christoffel symbols with polynomial entries.
TorsionFreeConnection random_connection(Rng& rng, const Chart& chart, const ConnectionSampling& s = {});

/// Random degree-preserving bundle connection.
BundleConnection random_bundle_connection(Rng& rng, const Chart& chart, const FiberGenerators& fibers,
                                          const ConnectionSampling& s = {});

/// Chart with coordinates prefix1..prefixN (or just the prefix when dim is 1).
Chart numbered_chart(const std::string& name, const std::string& prefix, std::size_t dim);
FiberGenerators numbered_fibers(const std::string& prefix, std::size_t rank);

struct MorphismSampling {
  int base_degree = 2;
  int terms = 3;
};

/// Random morphism: polynomial base map plus random even (resp. odd) nilpotent parts. With
/// parameters the x pullbacks may carry parameter-only nilpotent terms and the odd pullbacks
/// may have any odd parameter/theta mix.
SuperMorphism random_morphism(Rng& rng, const SuperManifoldPresentation& source,
                              const SuperManifoldPresentation& target, const std::vector<std::string>& parameters = {},
                              const MorphismSampling& s = {});

}  // namespace superjet
