#include "autfn/integer.hpp"

#include "autfn/error.hpp"

namespace autfn {

  TwoAdic split_two(Integer const& x) {
    if (x == 0) {
      throw PreconditionError("2-adic split of zero");
    }
    TwoAdic t;
    t.valuation = mpz_scan1(x.get_mpz_t(), 0);
    t.odd       = abs(x);
    mpz_tdiv_q_2exp(t.odd.get_mpz_t(), t.odd.get_mpz_t(), t.valuation);
    return t;
  }

  bool is_two_power_unit(Integer const& x) {
    return x != 0 && split_two(x).odd == 1;
  }

  bool is_two_power_unit(std::int64_t x) {
    if (x == 0 || x == INT64_MIN) {
      return false;
    }
    std::uint64_t u = static_cast<std::uint64_t>(x < 0 ? -x : x);
    return (u & (u - 1)) == 0;
  }

  std::string to_string(Integer const& x) {
    return x.get_str();
  }

  void xgcd(Integer& g, Integer& s, Integer& t, Integer const& a, Integer const& b) {
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }

}  // namespace autfn
