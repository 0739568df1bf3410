#include "superjet/random.hpp"

#include <bit>
#include <limits>

#include "superjet/errors.hpp"

namespace superjet {

int Rng::uniform(int lo, int hi) {
  if (hi < lo) throw DomainError("empty random range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

double Rng::real(double lo, double hi) {
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

Scalar Rng::rational() {
  int p = uniform(1, 5);
  if (coin()) p = -p;
  return make_scalar(p, uniform(1, 3));
}

namespace {

// Random composition of `total` into `parts` non-negative pieces.
std::vector<std::uint16_t> split_degree(Rng& rng, int total, std::size_t parts) {
  std::vector<std::uint16_t> out(parts, 0);
  if (parts == 0) return out;
  for (int i = 0; i < total; ++i) ++out[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(parts) - 1))];
  return out;
}

}  // namespace

SuperPoly random_poly(Rng& rng, const TablePtr& table, const RandomPolyOptions& options) {
  const GeneratorTable& t = *table;
  const int max_formal = t.formal_count() == 0 ? 0 : options.max_formal_degree.value_or(t.truncation());
  const int min_formal = t.formal_count() == 0 ? 0 : options.min_formal_degree;
  const int q = static_cast<int>(t.odd_count());
  const int max_odd = std::min(options.max_odd_degree.value_or(q), q);
  const int min_odd = options.min_odd_degree;

  SuperPoly out(table);
  if (min_formal > max_formal || min_odd > max_odd) return out;
  for (int n = 0; n < options.terms; ++n) {
    Monomial m;
    m.base = split_degree(rng, t.base_count() ? rng.uniform(0, options.max_base_degree) : 0, t.base_count());
    m.formal = split_degree(rng, rng.uniform(min_formal, max_formal), t.formal_count());
    int d = rng.uniform(min_odd, max_odd);
    if (options.parity && d % 2 != *options.parity) {
      if (d + 1 <= max_odd) {
        ++d;
      } else if (d - 1 >= min_odd) {
        --d;
      } else {
        continue;
      }
    }
    // Choose d distinct odd generators.
    std::uint64_t mask = 0;
    while (std::popcount(mask) < d) mask |= std::uint64_t{1} << rng.uniform(0, q - 1);
    m.odd = mask;
    out.add_term(m, rng.rational());
  }
  return out;
}

}  // namespace superjet
