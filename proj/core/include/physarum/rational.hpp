#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace physarum {

using Integer = mpz_class;
using Rational = mpq_class;

// num/den in canonical form. mpq_class(num, den) does not reduce.
Rational ratio(long num, long den);

// "3/5", "-2", "0"
std::string to_fraction(const Rational& r);

// Accepts integers, fractions ("3/5") and decimals ("0.125", "1e-3").
// Decimal input is converted exactly, so "0.1" becomes 1/10.
Rational parse_rational(std::string_view text);

// Exact rational for the shortest decimal that round-trips to v.
Rational rational_from_double(double v);

double to_double(const Rational& r);

bool is_integer(const Rational& r);

Rational abs(const Rational& r);

Integer gcd(const Integer& a, const Integer& b);

}  // namespace physarum
