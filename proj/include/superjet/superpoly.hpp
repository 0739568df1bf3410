#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "superjet/generators.hpp"
#include "superjet/scalar.hpp"

namespace superjet {

/// Exponent data of one term. `odd` is a bitmask over the odd generators; the term stands for
/// the product of the odd generators in ascending index order (the sign normal form).
struct Monomial {
  std::vector<std::uint16_t> base;
  std::vector<std::uint16_t> formal;
  std::uint64_t odd = 0;

  int base_degree() const noexcept;
  int formal_degree() const noexcept;
  int odd_degree() const noexcept;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical term order: formal part graded-lex (earlier generators dominate), then odd
/// subsets by size and ascending index list, then the base part graded-lex.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept;
};

using TermMap = std::map<Monomial, Scalar, MonomialOrder>;

enum class Parity { even, odd, mixed };

/// Sign (+1/-1) of the product (odd generators of a)(odd generators of b) once reordered into
/// ascending order. Undefined if the masks overlap.
int koszul_sign(std::uint64_t left, std::uint64_t right) noexcept;

/// Element of the graded-commutative algebra generated by a GeneratorTable, truncated in the
/// formal generators and nilpotent in the odd ones. Values are immutable once built; all
/// operations return fresh values.
class SuperPoly {
 public:
  explicit SuperPoly(TablePtr table);
  SuperPoly(TablePtr table, const Scalar& constant);

  static SuperPoly generator(TablePtr table, std::string_view name);
  static SuperPoly term(TablePtr table, Monomial m, const Scalar& c);

  const GeneratorTable& table() const noexcept { return *table_; }
  const TablePtr& table_ptr() const noexcept { return table_; }
  const TermMap& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Parity of a homogeneous element; zero counts as even.
  Parity parity() const noexcept;

  /// Lowest formal degree among the terms (or truncation+1 for zero).
  int min_formal_degree() const noexcept;

  /// Sub-polynomial of the terms for which `keep` returns true.
  SuperPoly filter(const std::function<bool(const Monomial&)>& keep) const;
  SuperPoly formal_homogeneous(int degree) const;
  /// Terms with no formal and no odd factor.
  SuperPoly base_part() const;
  /// Terms with no odd factor.
  SuperPoly odd_free_part() const;

  /// Coefficient of the monomial with the given formal and odd exponents, as a polynomial in the
  /// base generators (over the same table).
  SuperPoly coefficient(const std::vector<std::uint16_t>& formal, std::uint64_t odd) const;

  SuperPoly operator-() const;
  friend SuperPoly operator+(const SuperPoly& a, const SuperPoly& b);
  friend SuperPoly operator-(const SuperPoly& a, const SuperPoly& b);
  friend SuperPoly operator*(const SuperPoly& a, const SuperPoly& b);
  friend SuperPoly operator*(const Scalar& c, const SuperPoly& a);
  SuperPoly& operator+=(const SuperPoly& b);
  SuperPoly& operator-=(const SuperPoly& b);

  friend bool operator==(const SuperPoly& a, const SuperPoly& b);

  /// Canonical text, e.g. "x^2 + 2*x*xi - 1/2*th1*th2".
  std::string to_string() const;

  /// Adds c * m in place, honoring truncation; a zero result removes the term.
  void add_term(const Monomial& m, const Scalar& c);

 private:
  TablePtr table_;
  TermMap terms_;
};

/// Graded-commutative product with truncation and odd nilpotency.
SuperPoly mul(const SuperPoly& a, const SuperPoly& b);
SuperPoly power(const SuperPoly& a, unsigned exponent);

using Assignments = std::map<std::string, SuperPoly, std::less<>>;

/// Algebra homomorphism defined on generators. Each generator of p's table is sent to its
/// assignment, or, when unassigned, to the generator of the same name in `target` (which
/// defaults to p's table). Even generators must map to even values and odd ones to odd
/// values; formal generators must map into the augmentation ideal (no pure-base terms).
SuperPoly substitute(const SuperPoly& p, const Assignments& assignments, TablePtr target = nullptr);

/// Re-expresses p over another table that contains all generators used by p.
SuperPoly embed(const SuperPoly& p, const TablePtr& target);

/// Partial derivative. Odd generators use the left derivative: theta^a is moved to the front
/// (picking up the Koszul sign) and removed.
SuperPoly derive(const SuperPoly& p, std::string_view generator);

}  // namespace superjet
