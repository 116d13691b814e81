#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace dmdst {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(int e) {
  if (e < 0) throw std::invalid_argument("pow2: negative exponent");
  BigInt r = 1;
  r <<= static_cast<unsigned>(e);
  return r;
}

/// Exact test of `lhs <= factor * 2^e` for finite positive `factor`.
/// A double is M * 2^E with integer M, so both sides stay integral.
inline bool le_scaled_pow2(const BigInt& lhs, double factor, int e) {
  int fexp = 0;
  const double frac = std::frexp(factor, &fexp);  // factor = frac * 2^fexp, frac in [0.5, 1)
  const auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
  const int shift = fexp - 53 + e;
  if (shift >= 0) return lhs <= (BigInt(mant) << static_cast<unsigned>(shift));
  return (lhs << static_cast<unsigned>(-shift)) <= BigInt(mant);
}

}  // namespace dmdst
