#pragma once
// Exact rationals backed by GMP, plus string conversion in "p/q" / "n" form.

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace tropls {

using Rational = mpq_class;
using Integer = mpz_class;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw input_error("empty rational");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw input_error("malformed rational '" + s + "'");
  Rational q;
  try {
    std::string t = (s[0] == '+') ? s.substr(1) : s;
    q.set_str(t, 10);
  } catch (const std::invalid_argument&) {
    throw input_error("malformed rational '" + s + "'");
  }
  if (q.get_den() == 0) throw input_error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

// Reduced fraction n/d (the two-argument mpq constructor does not reduce).
inline Rational ratio(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline long to_long(const Rational& q) {
  if (!is_integer(q)) throw std::logic_error("non-integer rational " + q.get_str());
  if (!q.get_num().fits_slong_p()) throw std::overflow_error("integer overflow");
  return q.get_num().get_si();
}

inline Rational floor_div(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::size_t hash_rational(const Rational& q) {
  return std::hash<std::string>{}(q.get_str());
}

}  // namespace tropls
