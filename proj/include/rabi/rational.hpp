#pragma once

#include <gmpxx.h>
#include <string>

namespace rabi {

// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
using Rational = mpq_class;

// Accepts "p/q", plain integers, and exact decimal strings ("1.2" -> 6/5).
Rational rational_from_string(const std::string& text);

// Exact conversion of the binary double value.
Rational rational_from_double(double x);

double to_double(const Rational& q);
int sign(const Rational& q);
std::string to_string(const Rational& q);

} // namespace rabi
