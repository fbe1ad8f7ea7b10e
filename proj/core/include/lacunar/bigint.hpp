#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace lacunar {

using BigInt = mpz_class;

BigInt parse_bigint(std::string_view decimal);
std::string to_decimal(const BigInt& n);

// Number of bits in |n|; 0 for n == 0.
std::size_t bit_length(const BigInt& n);

// log2|n| accurate to double precision for any size; -inf for n == 0.
double log2_abs(const BigInt& n);

// Approximate double value of n (truncated toward zero), +/-inf on overflow.
double to_double_saturating(const BigInt& n);

// Smallest double >= |n|, +inf on overflow. Used wherever a certified-high
// magnitude is needed.
double abs_to_double_upper(const BigInt& n);

bool fits_u64(const BigInt& n);
std::uint64_t to_u64(const BigInt& n);

// n mod m in [0, m), m >= 1.
std::uint64_t mod_u64(const BigInt& n, std::uint64_t m);

// 2^exponent.
BigInt pow2(std::uint64_t exponent);

}  // namespace lacunar
