#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace autfn {

  using Integer = mpz_class;

  // x = sign * 2^valuation * odd with odd > 0. Undefined for x = 0.
  struct TwoAdic {
    unsigned long valuation = 0;
    Integer       odd;
  };

  TwoAdic split_two(Integer const& x);

  // x = +-2^k, i.e. x is a unit in Z[1/2].
  bool is_two_power_unit(Integer const& x);
  bool is_two_power_unit(std::int64_t x);

  std::string to_string(Integer const& x);

  // Extended gcd: g = s*a + t*b, g >= 0.
  void xgcd(Integer& g, Integer& s, Integer& t, Integer const& a, Integer const& b);

}  // namespace autfn
