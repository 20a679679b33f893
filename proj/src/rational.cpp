#include "nplab/rational.hpp"

#include <sstream>

#include "nplab/error.hpp"

namespace nplab {

Integer floor_q(const Rational& r) {
  Integer q, rem;
  bmp::divide_qr(num(r), den(r), q, rem);
  if (rem < 0) q -= 1;  // truncation went toward zero
  return q;
}

Integer ceil_q(const Rational& r) { return -floor_q(-r); }

Rational frac_q(const Rational& r) { return r - Rational(floor_q(r)); }

std::string to_string(const Rational& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "bad rational '" + s + "'");
  }
}

std::string to_decimal(const Rational& r, int digits) {
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational s = r * Rational(scale);
  // round half away from zero
  Integer v = s >= 0 ? floor_q(s + Rational(1, 2)) : -floor_q(-s + Rational(1, 2));
  bool neg = v < 0;
  if (neg) v = -v;
  std::string body = v.str();
  if ((int)body.size() <= digits) body = std::string(digits + 1 - body.size(), '0') + body;
  std::string out = body.substr(0, body.size() - digits) + "." + body.substr(body.size() - digits);
  return neg ? "-" + out : out;
}

long to_long(const Integer& z) {
  if (z > Integer(std::numeric_limits<long>::max()) || z < Integer(std::numeric_limits<long>::min()))
    throw Error(ErrorCode::Domain, "integer out of range: " + z.str());
  return z.convert_to<long>();
}

}  // namespace nplab
