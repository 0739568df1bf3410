#pragma once

#include <string_view>

#include "superjet/superpoly.hpp"

namespace superjet {

/// Parses a polynomial expression over `table`.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' unary) | ('/' integer))*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' integer)?
///   primary := integer | identifier | '(' expr ')'
///
/// Whitespace is ignored, exponents are non-negative integers, division is only by a
/// non-zero integer literal (so "1/2*x" is the rational literal 1/2 times x). Identifiers
/// ([A-Za-z_][A-Za-z0-9_']*) must name generators of the table. Products follow the Koszul rule,
/// so "th2*th1" is -th1*th2. Errors carry 1-based line/column positions.
SuperPoly parse_poly(std::string_view text, const TablePtr& table);

}  // namespace superjet
