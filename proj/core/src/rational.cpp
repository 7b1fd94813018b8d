#include "physarum/rational.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "physarum/errors.hpp"

namespace physarum {

Rational ratio(long num, long den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_fraction(const Rational& r) { return r.get_str(); }

namespace {

Integer parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) return 0;
  for (char ch : s)
    if (ch < '0' || ch > '9')
      throw Error(ErrorKind::InvalidArgument, "bad number '" + std::string(whole) + "'");
  return Integer(std::string(s), 10);
}

Integer pow10(long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorKind::InvalidArgument, "empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    Rational out = num / den;
    out.canonicalize();
    return out;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    std::string_view es = s.substr(epos + 1);
    bool eneg = false;
    if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
      eneg = es.front() == '-';
      es.remove_prefix(1);
    }
    if (es.empty()) throw Error(ErrorKind::InvalidArgument, "bad exponent in '" + std::string(text) + "'");
    auto res = std::from_chars(es.data(), es.data() + es.size(), exponent);
    if (res.ec != std::errc() || res.ptr != es.data() + es.size())
      throw Error(ErrorKind::InvalidArgument, "bad exponent in '" + std::string(text) + "'");
    if (eneg) exponent = -exponent;
    s = s.substr(0, epos);
  }
  std::string_view int_part = s, frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty())
    throw Error(ErrorKind::InvalidArgument, "bad number '" + std::string(text) + "'");

  Integer mant = parse_digits(std::string(int_part) + std::string(frac_part), text);
  exponent -= static_cast<long>(frac_part.size());
  Rational out(mant);
  if (exponent > 0) out *= Rational(pow10(exponent));
  if (exponent < 0) out /= Rational(pow10(-exponent));
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace physarum
