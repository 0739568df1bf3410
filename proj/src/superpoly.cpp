#include "superjet/superpoly.hpp"

#include <bit>
#include <numeric>
#include <sstream>

#include "superjet/errors.hpp"

namespace superjet {

namespace {

int sum(const std::vector<std::uint16_t>& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Graded-lex where a larger exponent on an earlier generator sorts first: x1 before x2.
int compare_graded(const std::vector<std::uint16_t>& a, const std::vector<std::uint16_t>& b) {
  const int da = sum(a);
  const int db = sum(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

int compare_odd(std::uint64_t a, std::uint64_t b) {
  if (a == b) return 0;
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb ? -1 : 1;
  // Same size: the subset holding the lowest differing index comes first.
  const std::uint64_t diff = a ^ b;
  const std::uint64_t lowest = diff & (~diff + 1);
  return (a & lowest) ? -1 : 1;
}

void require_same(const SuperPoly& a, const SuperPoly& b) {
  if (!same_table(a.table_ptr(), b.table_ptr()))
    throw MismatchError("operands are defined over different generator tables");
}

std::string monomial_factors(const GeneratorTable& t, const Monomial& m) {
  std::string out;
  auto emit = [&out](const std::string& name, unsigned e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += name;
    if (e > 1) out += '^' + std::to_string(e);
  };
  for (std::size_t i = 0; i < m.base.size(); ++i) emit(t.base()[i], m.base[i]);
  for (std::size_t i = 0; i < m.formal.size(); ++i) emit(t.formal()[i], m.formal[i]);
  for (std::size_t i = 0; i < t.odd_count(); ++i)
    if (m.odd >> i & 1U) emit(t.odd()[i], 1);
  return out;
}

Monomial unit_monomial(const GeneratorTable& t) {
  Monomial m;
  m.base.assign(t.base_count(), 0);
  m.formal.assign(t.formal_count(), 0);
  return m;
}

}  // namespace

int Monomial::base_degree() const noexcept { return sum(base); }
int Monomial::formal_degree() const noexcept { return sum(formal); }
int Monomial::odd_degree() const noexcept { return std::popcount(odd); }

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const noexcept {
  if (int c = compare_graded(a.formal, b.formal)) return c < 0;
  if (int c = compare_odd(a.odd, b.odd)) return c < 0;
  return compare_graded(a.base, b.base) < 0;
}

int koszul_sign(std::uint64_t left, std::uint64_t right) noexcept {
  // Count inversions: pairs (i in left, j in right) with i > j.
  int inversions = 0;
  for (std::uint64_t r = right; r != 0; r &= r - 1) {
    const int j = std::countr_zero(r);
    const std::uint64_t above = j >= 63 ? 0 : (~std::uint64_t{0} << (j + 1));
    inversions += std::popcount(left & above);
  }
  return inversions % 2 == 0 ? 1 : -1;
}

SuperPoly::SuperPoly(TablePtr table) : table_(std::move(table)) {
  if (!table_) throw MismatchError("null generator table");
}

SuperPoly::SuperPoly(TablePtr table, const Scalar& constant) : SuperPoly(std::move(table)) {
  add_term(unit_monomial(*table_), constant);
}

SuperPoly SuperPoly::generator(TablePtr table, std::string_view name) {
  SuperPoly p(std::move(table));
  const GenRef ref = p.table().lookup(name);
  Monomial m = unit_monomial(p.table());
  switch (ref.kind) {
    case GenKind::base: m.base[ref.index] = 1; break;
    case GenKind::formal: m.formal[ref.index] = 1; break;
    case GenKind::odd: m.odd = std::uint64_t{1} << ref.index; break;
  }
  p.add_term(m, Scalar(1));
  return p;
}

SuperPoly SuperPoly::term(TablePtr table, Monomial m, const Scalar& c) {
  SuperPoly p(std::move(table));
  if (m.base.size() != p.table().base_count() || m.formal.size() != p.table().formal_count() ||
      (p.table().odd_count() < 64 && (m.odd >> p.table().odd_count()) != 0))
    throw ShapeError("monomial does not fit the generator table");
  p.add_term(m, c);
  return p;
}

void SuperPoly::add_term(const Monomial& m, const Scalar& c) {
  if (sgn(c) == 0) return;
  if (m.formal_degree() > table_->truncation()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Parity SuperPoly::parity() const noexcept {
  bool has_even = false;
  bool has_odd = false;
  for (const auto& [m, c] : terms_) (m.odd_degree() % 2 ? has_odd : has_even) = true;
  if (has_even && has_odd) return Parity::mixed;
  return has_odd ? Parity::odd : Parity::even;
}

int SuperPoly::min_formal_degree() const noexcept {
  int best = table_->truncation() + 1;
  for (const auto& [m, c] : terms_) best = std::min(best, m.formal_degree());
  return best;
}

SuperPoly SuperPoly::filter(const std::function<bool(const Monomial&)>& keep) const {
  SuperPoly out(table_);
  for (const auto& [m, c] : terms_)
    if (keep(m)) out.terms_.emplace_hint(out.terms_.end(), m, c);
  return out;
}

SuperPoly SuperPoly::formal_homogeneous(int degree) const {
  return filter([degree](const Monomial& m) { return m.formal_degree() == degree; });
}

SuperPoly SuperPoly::base_part() const {
  return filter([](const Monomial& m) { return m.odd == 0 && m.formal_degree() == 0; });
}

SuperPoly SuperPoly::odd_free_part() const {
  return filter([](const Monomial& m) { return m.odd == 0; });
}

SuperPoly SuperPoly::coefficient(const std::vector<std::uint16_t>& formal, std::uint64_t odd) const {
  SuperPoly out(table_);
  for (const auto& [m, c] : terms_) {
    if (m.formal != formal || m.odd != odd) continue;
    Monomial b = m;
    std::fill(b.formal.begin(), b.formal.end(), 0);
    b.odd = 0;
    out.add_term(b, c);
  }
  return out;
}

SuperPoly SuperPoly::operator-() const {
  SuperPoly out(*this);
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

SuperPoly& SuperPoly::operator+=(const SuperPoly& b) {
  require_same(*this, b);
  for (const auto& [m, c] : b.terms_) add_term(m, c);
  return *this;
}

SuperPoly& SuperPoly::operator-=(const SuperPoly& b) {
  require_same(*this, b);
  for (const auto& [m, c] : b.terms_) add_term(m, -c);
  return *this;
}

SuperPoly operator+(const SuperPoly& a, const SuperPoly& b) {
  SuperPoly out(a);
  out += b;
  return out;
}

SuperPoly operator-(const SuperPoly& a, const SuperPoly& b) {
  SuperPoly out(a);
  out -= b;
  return out;
}

SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) { return mul(a, b); }

SuperPoly operator*(const Scalar& c, const SuperPoly& a) {
  SuperPoly out(a.table_ptr());
  if (sgn(c) == 0) return out;
  for (const auto& [m, v] : a.terms_) out.terms_.emplace_hint(out.terms_.end(), m, c * v);
  return out;
}

bool operator==(const SuperPoly& a, const SuperPoly& b) {
  return same_table(a.table_, b.table_) && a.terms_ == b.terms_;
}

std::string SuperPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const Scalar magnitude = abs(c);
    const std::string factors = monomial_factors(*table_, m);
    if (factors.empty()) {
      out += superjet::to_string(magnitude);
    } else {
      if (magnitude != 1) out += superjet::to_string(magnitude) + '*';
      out += factors;
    }
  }
  return out;
}

SuperPoly mul(const SuperPoly& a, const SuperPoly& b) {
  require_same(a, b);
  SuperPoly out(a.table_ptr());
  const int k = a.table().truncation();
  Monomial m;
  for (const auto& [ma, ca] : a.terms()) {
    const int fa = ma.formal_degree();
    for (const auto& [mb, cb] : b.terms()) {
      if (ma.odd & mb.odd) continue;
      if (fa + mb.formal_degree() > k) continue;
      m.base = ma.base;
      for (std::size_t i = 0; i < m.base.size(); ++i) m.base[i] += mb.base[i];
      m.formal = ma.formal;
      for (std::size_t i = 0; i < m.formal.size(); ++i) m.formal[i] += mb.formal[i];
      m.odd = ma.odd | mb.odd;
      Scalar c = ca * cb;
      if (koszul_sign(ma.odd, mb.odd) < 0) c = -c;
      out.add_term(m, c);
    }
  }
  return out;
}

SuperPoly power(const SuperPoly& a, unsigned exponent) {
  SuperPoly result(a.table_ptr(), Scalar(1));
  SuperPoly base = a;
  while (exponent > 0) {
    if (exponent & 1U) result = mul(result, base);
    exponent >>= 1;
    if (exponent > 0) base = mul(base, base);
  }
  return result;
}

namespace {

// Cached powers of one generator image.
class PowerCache {
 public:
  explicit PowerCache(SuperPoly image) : powers_{SuperPoly(image.table_ptr(), Scalar(1)), image} {}

  const SuperPoly& get(unsigned e) {
    while (powers_.size() <= e) powers_.push_back(mul(powers_.back(), powers_[1]));
    return powers_[e];
  }

 private:
  std::vector<SuperPoly> powers_;
};

}  // namespace

SuperPoly substitute(const SuperPoly& p, const Assignments& assignments, TablePtr target) {
  if (!target) target = p.table_ptr();
  const GeneratorTable& src = p.table();

  for (const auto& [name, value] : assignments) {
    if (!src.find(name)) throw UnknownGeneratorError("assignment to unknown generator '" + name + "'");
    if (!same_table(value.table_ptr(), target))
      throw MismatchError("assignment for '" + name + "' is not over the target table");
  }

  auto image_of = [&](GenKind kind, std::size_t index) -> SuperPoly {
    const std::string& name = src.name(GenRef{kind, index});
    auto it = assignments.find(name);
    SuperPoly img = it != assignments.end() ? it->second : SuperPoly::generator(target, name);
    const Parity par = img.parity();
    if (kind == GenKind::odd) {
      if (par != Parity::odd && !img.is_zero())
        throw ParityError("odd generator '" + name + "' must map to an odd value");
    } else if (par != Parity::even) {
      throw ParityError("even generator '" + name + "' must map to an even value");
    }
    if (kind == GenKind::formal && !img.base_part().is_zero())
      throw DomainError("formal generator '" + name + "' must map into the augmentation ideal");
    return img;
  };

  std::vector<PowerCache> base_pow;
  std::vector<PowerCache> formal_pow;
  std::vector<SuperPoly> odd_img;
  for (std::size_t i = 0; i < src.base_count(); ++i) base_pow.emplace_back(image_of(GenKind::base, i));
  for (std::size_t i = 0; i < src.formal_count(); ++i)
    formal_pow.emplace_back(image_of(GenKind::formal, i));
  for (std::size_t i = 0; i < src.odd_count(); ++i) odd_img.push_back(image_of(GenKind::odd, i));

  SuperPoly out(target);
  const SuperPoly one(target, Scalar(1));
  for (const auto& [m, c] : p.terms()) {
    SuperPoly acc = one;
    for (std::size_t i = 0; i < m.base.size() && !acc.is_zero(); ++i)
      if (m.base[i]) acc = mul(acc, base_pow[i].get(m.base[i]));
    for (std::size_t i = 0; i < m.formal.size() && !acc.is_zero(); ++i)
      if (m.formal[i]) acc = mul(acc, formal_pow[i].get(m.formal[i]));
    for (std::size_t i = 0; i < odd_img.size() && !acc.is_zero(); ++i)
      if (m.odd >> i & 1U) acc = mul(acc, odd_img[i]);
    out += c * acc;
  }
  return out;
}

SuperPoly embed(const SuperPoly& p, const TablePtr& target) {
  if (same_table(p.table_ptr(), target)) return p;
  // Generators p does not use may be absent from the target.
  const GeneratorTable& src = p.table();
  Assignments zeros;
  std::vector<bool> used_base(src.base_count()), used_formal(src.formal_count());
  std::uint64_t used_odd = 0;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.base.size(); ++i) used_base[i] = used_base[i] || m.base[i];
    for (std::size_t i = 0; i < m.formal.size(); ++i) used_formal[i] = used_formal[i] || m.formal[i];
    used_odd |= m.odd;
  }
  auto check = [&](GenKind kind, std::size_t i, bool used) {
    const std::string& name = src.name(GenRef{kind, i});
    if (target->find(name)) return;
    if (used) throw UnknownGeneratorError("generator '" + name + "' is missing from the target table");
    zeros.emplace(name, SuperPoly(target));
  };
  for (std::size_t i = 0; i < src.base_count(); ++i) check(GenKind::base, i, used_base[i]);
  for (std::size_t i = 0; i < src.formal_count(); ++i) check(GenKind::formal, i, used_formal[i]);
  for (std::size_t i = 0; i < src.odd_count(); ++i) check(GenKind::odd, i, used_odd >> i & 1U);
  return substitute(p, zeros, target);
}

SuperPoly derive(const SuperPoly& p, std::string_view generator) {
  const GenRef ref = p.table().lookup(generator);
  SuperPoly out(p.table_ptr());
  for (const auto& [m, c] : p.terms()) {
    Monomial d = m;
    Scalar coeff = c;
    switch (ref.kind) {
      case GenKind::base:
        if (m.base[ref.index] == 0) continue;
        coeff *= m.base[ref.index];
        --d.base[ref.index];
        break;
      case GenKind::formal:
        if (m.formal[ref.index] == 0) continue;
        coeff *= m.formal[ref.index];
        --d.formal[ref.index];
        break;
      case GenKind::odd: {
        const std::uint64_t bit = std::uint64_t{1} << ref.index;
        if (!(m.odd & bit)) continue;
        if (std::popcount(m.odd & (bit - 1)) % 2) coeff = -coeff;
        d.odd &= ~bit;
        break;
      }
    }
    out.add_term(d, coeff);
  }
  return out;
}

}  // namespace superjet
