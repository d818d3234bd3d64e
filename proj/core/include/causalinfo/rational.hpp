#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace causalinfo {

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime parts). Every probability mass in the library is one of these.
using Rational = mpq_class;

/// Parses "INT" or "INT/INT" (optional leading '-'). Returns nullopt on
/// malformed text or a zero denominator. The result is canonicalized.
std::optional<Rational> parse_rational(std::string_view text);

/// "num/den", or just "num" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// log2 of a strictly positive rational, evaluated as
/// log2(numerator) - log2(denominator) so huge operands never overflow.
double log2(const Rational& value);

}  // namespace causalinfo
