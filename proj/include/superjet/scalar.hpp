#pragma once

#include <gmpxx.h>

#include <string>

namespace superjet {

/// Exact rational coefficient. mpq_class keeps values canonical (reduced, positive denominator)
/// as long as every construction from a numerator/denominator pair goes through make_scalar.
using Scalar = mpq_class;

Scalar make_scalar(long numerator, long denominator = 1);

/// Parses "p", "-p" or "p/q" (decimal integers of any length).
Scalar parse_scalar(const std::string& text);

std::string to_string(const Scalar& value);
double to_double(const Scalar& value);

Scalar factorial(unsigned n);

}  // namespace superjet
