#include "lacunar/bigint.hpp"

#include <cmath>
#include <limits>

#include "lacunar/error.hpp"

namespace lacunar {

BigInt parse_bigint(std::string_view decimal) {
  std::string s(decimal);
  if (s.empty()) throw ValidationError("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw ValidationError("integer literal has no digits: " + s);
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ValidationError("not a decimal integer: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

std::string to_decimal(const BigInt& n) { return n.get_str(10); }

std::size_t bit_length(const BigInt& n) {
  if (sgn(n) == 0) return 0;
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

double log2_abs(const BigInt& n) {
  if (sgn(n) == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

double to_double_saturating(const BigInt& n) {
  if (bit_length(n) > 1024) {
    return sgn(n) > 0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::ldexp(mant, static_cast<int>(exp));
}

double abs_to_double_upper(const BigInt& n) {
  const std::size_t bits = bit_length(n);
  if (bits == 0) return 0.0;
  if (bits > 1024) return std::numeric_limits<double>::infinity();
  const double truncated = std::fabs(to_double_saturating(n));
  if (bits <= 53 || mpz_scan1(n.get_mpz_t(), 0) >= bits - 53) return truncated;
  return std::nextafter(truncated, std::numeric_limits<double>::infinity());
}

bool fits_u64(const BigInt& n) { return sgn(n) >= 0 && bit_length(n) <= 64; }

std::uint64_t to_u64(const BigInt& n) {
  if (!fits_u64(n)) throw ValidationError("integer does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

std::uint64_t mod_u64(const BigInt& n, std::uint64_t m) {
  if (m == 0) throw ValidationError("modulus must be >= 1");
  if (m <= std::numeric_limits<unsigned long>::max()) {
    return mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(m));
  }
  BigInt r;
  BigInt mm;
  mpz_import(mm.get_mpz_t(), 1, -1, sizeof(m), 0, 0, &m);
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), mm.get_mpz_t());
  return to_u64(r);
}

BigInt pow2(std::uint64_t exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, exponent);
  return out;
}

}  // namespace lacunar
