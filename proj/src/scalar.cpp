#include "superjet/scalar.hpp"

#include "superjet/errors.hpp"

namespace superjet {

Scalar make_scalar(long numerator, long denominator) {
  if (denominator == 0) throw DomainError("zero denominator");
  Scalar s(numerator, denominator);
  s.canonicalize();
  return s;
}

Scalar parse_scalar(const std::string& text) {
  Scalar s;
  if (text.empty() || s.set_str(text, 10) != 0) throw DomainError("invalid rational literal '" + text + "'");
  if (s.get_den() == 0) throw DomainError("zero denominator in '" + text + "'");
  s.canonicalize();
  return s;
}

std::string to_string(const Scalar& value) { return value.get_str(10); }

double to_double(const Scalar& value) { return value.get_d(); }

Scalar factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Scalar(f);
}

}  // namespace superjet
