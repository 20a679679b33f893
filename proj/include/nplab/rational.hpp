#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Core>
#include <string>
#include <vector>

namespace nplab {

namespace bmp = boost::multiprecision;

// expression templates off: keeps Eigen and auto happy
using Integer = bmp::number<bmp::gmp_int, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;

using IMat = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = std::vector<long>;
using QMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using QVec = std::vector<Rational>;

inline Integer num(const Rational& r) { return bmp::numerator(r); }
inline Integer den(const Rational& r) { return bmp::denominator(r); }

Integer floor_q(const Rational& r);
Integer ceil_q(const Rational& r);
Rational frac_q(const Rational& r);

// "num/den" (den omitted when 1)
std::string to_string(const Rational& r);
Rational rational_from_string(const std::string& s);
// decimal with a fixed number of digits, for plot tables only
std::string to_decimal(const Rational& r, int digits = 6);

long to_long(const Integer& z);

}  // namespace nplab
