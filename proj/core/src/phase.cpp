#include "lacunar/phase.hpp"

#include <mpfr.h>

#include <array>
#include <cmath>
#include <mutex>
#include <shared_mutex>

#include "lacunar/error.hpp"

namespace lacunar {
namespace {

using u128 = unsigned __int128;

constexpr double kTwoPiHi = 0x1.921fb54442d18p+2;
constexpr double kTwoPiLo = 0x1.1a62633145c07p-52;
// Slack for the double-double product and the 2^-128 fraction truncation.
constexpr double kProductSlack = 0x1p-98;

// floor(2^bits / (2*pi)), i.e. the first `bits` binary digits of 1/(2*pi).
// The last digit may be off by one; callers budget one unit at that place.
BigInt inverse_two_pi_bits(std::size_t bits) {
  mpfr_t x;
  mpfr_init2(x, static_cast<mpfr_prec_t>(bits + 64));
  mpfr_const_pi(x, MPFR_RNDN);
  mpfr_mul_2ui(x, x, 1, MPFR_RNDN);
  mpfr_ui_div(x, 1, x, MPFR_RNDN);
  mpfr_mul_2ui(x, x, static_cast<unsigned long>(bits), MPFR_RNDN);
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), x, MPFR_RNDD);
  mpfr_clear(x);
  return out;
}

// Limbs of 1/(2*pi) for the 64-bit fast path, most significant first.
constexpr std::size_t kFastLimbs = 20;

const std::array<std::uint64_t, kFastLimbs>& fast_table() {
  static const std::array<std::uint64_t, kFastLimbs> table = [] {
    std::array<std::uint64_t, kFastLimbs> limbs{};
    BigInt w = inverse_two_pi_bits(64 * kFastLimbs);
    for (std::size_t i = 0; i < kFastLimbs; ++i) {
      BigInt limb = w & ((BigInt(1) << 64) - 1);
      limbs[kFastLimbs - 1 - i] = to_u64(limb);
      w >>= 64;
    }
    return limbs;
  }();
  return table;
}

// Bits at positions [s, s + 64) of 1/(2*pi), position i weighing 2^-i.
std::uint64_t fast_window(long s) {
  const auto& table = fast_table();
  auto bit_block = [&](long pos) -> std::uint64_t {
    // 64 bits starting at a multiple-of-64 offset pos (1-based position pos+1).
    if (pos < 0 || pos >= static_cast<long>(64 * kFastLimbs)) return 0;
    return table[static_cast<std::size_t>(pos / 64)];
  };
  const long offset = s - 1;  // 0-based offset of the first bit
  const long base = offset >= 0 ? (offset / 64) * 64 : -(((-offset) + 63) / 64) * 64;
  const int shift = static_cast<int>(offset - base);
  const std::uint64_t hi = bit_block(base);
  const std::uint64_t lo = bit_block(base + 64);
  if (shift == 0) return hi;
  return (hi << shift) | (lo >> (64 - shift));
}

class GeneralTable {
 public:
  // Returns floor(2^bits / (2*pi)) with at least `bits` digits.
  BigInt window(std::size_t bits) {
    {
      std::shared_lock lock(mutex_);
      if (bits_ >= bits) return value_ >> static_cast<mp_bitcnt_t>(bits_ - bits);
    }
    std::unique_lock lock(mutex_);
    if (bits_ < bits) {
      bits_ = std::max(bits, 2 * bits_);
      value_ = inverse_two_pi_bits(bits_);
    }
    return value_ >> static_cast<mp_bitcnt_t>(bits_ - bits);
  }

 private:
  std::shared_mutex mutex_;
  std::size_t bits_ = 0;
  BigInt value_;
};

GeneralTable& general_table() {
  static GeneralTable table;
  return table;
}

struct Fraction128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
};

Fraction128 negate(Fraction128 f) {
  u128 v = (static_cast<u128>(f.hi) << 64) | f.lo;
  v = ~v + 1;
  return {static_cast<std::uint64_t>(v >> 64), static_cast<std::uint64_t>(v)};
}

// angle = 2*pi * fraction, evaluated in double-double and rounded once.
// A clamp at the top moves the value by less than 2*pi - kTwoPiHi, which is
// below half an ulp of kTwoPiHi.
double fraction_to_angle(Fraction128 f) {
  const double f_hi = std::ldexp(static_cast<double>(f.hi >> 11), -53);
  const u128 rest = (static_cast<u128>(f.hi & 0x7FF) << 64) | f.lo;
  const double f_lo = std::ldexp(static_cast<double>(rest), -128);
  const double p = f_hi * kTwoPiHi;
  double err = std::fma(f_hi, kTwoPiHi, -p);
  err += f_hi * kTwoPiLo + f_lo * kTwoPiHi;
  double angle = p + err;
  if (angle > kTwoPiHi) angle = kTwoPiHi;
  return angle;
}

double half_ulp(double x) {
  if (x == 0.0) return 0.0;
  return (std::nextafter(x, INFINITY) - x) / 2.0;
}

ReducedPhase finish(Fraction128 f, bool negative, double truncation_turns,
                    std::size_t precision, double target_error) {
  if (negative) f = negate(f);
  ReducedPhase out;
  out.angle = fraction_to_angle(f);
  out.error_bound = kTwoPiHi * 1.0000001 * truncation_turns +
                    half_ulp(out.angle) + kProductSlack;
  out.precision_bits = precision;
  if (out.error_bound > target_error) {
    throw NumericalError("phase reduction cannot reach target error " +
                         std::to_string(target_error) + " (achievable " +
                         std::to_string(out.error_bound) + ")");
  }
  return out;
}

// frac(|n| * |t| / (2*pi)) for |n| < 2^64.
ReducedPhase reduce_small(std::uint64_t n, bool n_negative, double t, double target_error) {
  int exp2 = 0;
  const double mant = std::frexp(std::fabs(t), &exp2);
  const auto m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  const long e = static_cast<long>(exp2) - 53;  // |t| = m * 2^e
  const u128 x = static_cast<u128>(n) * m;
  const std::array<std::uint64_t, 2> xs{static_cast<std::uint64_t>(x),
                                        static_cast<std::uint64_t>(x >> 64)};
  // Window of 192 bits at positions e+1 .. e+192, least significant limb first.
  const std::array<std::uint64_t, 3> ws{fast_window(e + 129), fast_window(e + 65),
                                        fast_window(e + 1)};
  std::array<std::uint64_t, 3> r{};
  for (std::size_t i = 0; i < 2; ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; i + j < 3; ++j) {
      const u128 cur = static_cast<u128>(xs[i]) * ws[j] + r[i + j] + carry;
      r[i + j] = static_cast<std::uint64_t>(cur);
      carry = static_cast<std::uint64_t>(cur >> 64);
    }
  }
  const double x_bits = x == 0 ? 0.0 : std::log2(static_cast<double>(x)) + 1.0;
  // Dropped window bits plus the unit of uncertainty in the table's last digit.
  const double truncation = 2.0 * std::exp2(x_bits - 192.0) + 0x1p-128;
  const bool negative = n_negative != (t < 0);
  return finish({r[2], r[1]}, negative, truncation, 192, target_error);
}

ReducedPhase reduce_big(const BigInt& magnitude, bool n_negative, double t,
                        double target_error) {
  int exp2 = 0;
  const double mant = std::frexp(std::fabs(t), &exp2);
  const auto m = static_cast<unsigned long>(std::ldexp(mant, 53));
  const long e = static_cast<long>(exp2) - 53;
  const BigInt x = magnitude * m;
  const std::size_t b = bit_length(x);
  const std::size_t width = b + 130;
  const long top = e + static_cast<long>(width);  // last window position
  BigInt window;
  if (top > 0) {
    window = general_table().window(static_cast<std::size_t>(top));
    if (e > 0) window &= (BigInt(1) << static_cast<mp_bitcnt_t>(width)) - 1;
  }
  BigInt product = x * window;
  product &= (BigInt(1) << static_cast<mp_bitcnt_t>(width)) - 1;
  product >>= static_cast<mp_bitcnt_t>(width - 128);
  const BigInt mask64 = (BigInt(1) << 64) - 1;
  const Fraction128 f{to_u64(BigInt(product >> 64)), to_u64(BigInt(product & mask64))};
  const double truncation = 2.0 * 0x1p-130 + 0x1p-128;
  const bool negative = n_negative != (t < 0);
  return finish(f, negative, truncation, width, target_error);
}

ReducedPhase reduce_rational(const BigInt& n, std::int64_t p, std::uint64_t q,
                             double target_error) {
  // residue = (n * p) mod q, computed without overflow.
  const std::uint64_t n_mod = mod_u64(n, q);
  const std::uint64_t p_mod = mod_u64(BigInt(static_cast<long>(p)), q);
  const auto residue = static_cast<std::uint64_t>(static_cast<u128>(n_mod) * p_mod % q);
  // fraction = residue / q to 128 bits.
  const u128 num_hi = static_cast<u128>(residue) << 64;
  const auto hi = static_cast<std::uint64_t>(num_hi / q);
  const u128 rem = num_hi % q;
  const auto lo = static_cast<std::uint64_t>((rem << 64) / q);
  return finish({hi, lo}, false, 0x1p-128, 128, target_error);
}

}  // namespace

Angle Angle::turns(std::int64_t p, std::uint64_t q) {
  if (q == 0) throw ValidationError("exact angle needs a nonzero denominator");
  return Angle(0.0, p, q);
}

double Angle::radians_approx() const {
  if (!exact()) return radians_;
  return 2.0 * M_PI * static_cast<double>(p_) / static_cast<double>(q_);
}

PhaseReducer::PhaseReducer(BigInt n) : n_(std::move(n)) {
  magnitude_ = abs(n_);
  negative_ = sgn(n_) < 0;
  small_ = fits_u64(magnitude_);
  if (small_) small_value_ = to_u64(magnitude_);
}

ReducedPhase PhaseReducer::reduce(const Angle& t, double target_error) const {
  if (!(target_error > 0.0)) throw ValidationError("target error must be positive");
  if (t.exact()) {
    if (t.numerator() == 0 || sgn(n_) == 0) return {0.0, 0.0, 0};
    return reduce_rational(n_, t.numerator(), t.denominator(), target_error);
  }
  const double x = t.radians_value();
  if (!std::isfinite(x)) throw ValidationError("angle is not finite");
  if (x == 0.0 || sgn(n_) == 0) return {0.0, 0.0, 0};
  if (small_) return reduce_small(small_value_, negative_, x, target_error);
  return reduce_big(magnitude_, negative_, x, target_error);
}

ReducedPhase reduce_phase(const BigInt& n, const Angle& t, double target_error) {
  return PhaseReducer(n).reduce(t, target_error);
}

std::uint64_t grid_phase(const BigInt& n, std::uint64_t j, std::uint64_t m) {
  if (m == 0) throw ValidationError("grid size must be >= 1");
  if (j >= m) throw ValidationError("grid index out of range");
  const std::uint64_t r = mod_u64(n, m);
  return static_cast<std::uint64_t>(static_cast<u128>(r) * j % m);
}

}  // namespace lacunar
