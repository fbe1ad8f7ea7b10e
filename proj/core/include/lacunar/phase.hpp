#pragma once

#include <cstddef>
#include <cstdint>

#include "lacunar/bigint.hpp"

namespace lacunar {

// An angle given either as a machine float (radians) or exactly as the
// rational multiple 2*pi*p/q.
class Angle {
 public:
  static Angle radians(double t) { return Angle(t, 0, 0); }
  static Angle turns(std::int64_t p, std::uint64_t q);

  bool exact() const { return q_ != 0; }
  double radians_approx() const;
  double radians_value() const { return radians_; }
  std::int64_t numerator() const { return p_; }
  std::uint64_t denominator() const { return q_; }

 private:
  Angle(double t, std::int64_t p, std::uint64_t q) : radians_(t), p_(p), q_(q) {}
  double radians_;
  std::int64_t p_;
  std::uint64_t q_;
};

// (n * t) mod 2*pi in [0, 2*pi) with a certified absolute error bound.
struct ReducedPhase {
  double angle = 0.0;
  double error_bound = 0.0;
  std::size_t precision_bits = 0;
};

inline constexpr double kDefaultPhaseTolerance = 0x1p-50;

// Payne-Hanek style reduction: the bits of 1/(2*pi) that can influence the
// fractional part of n*t/(2*pi) are selected by the exponent of t and
// multiplied by the exact integer |n| * mantissa(t). The working width is
// bit_length(n) + 53 + 130 bits. Exact-rational angles reduce as
// 2*pi*((n*p) mod q)/q in integer arithmetic.
//
// Throws NumericalError when target_error is below what a double result can
// carry, ValidationError when t is not finite or target_error <= 0.
ReducedPhase reduce_phase(const BigInt& n, const Angle& t,
                          double target_error = kDefaultPhaseTolerance);

// Pre-digested |n| for repeated reductions of the same frequency.
class PhaseReducer {
 public:
  explicit PhaseReducer(BigInt n);
  ReducedPhase reduce(const Angle& t, double target_error = kDefaultPhaseTolerance) const;
  const BigInt& frequency() const { return n_; }

 private:
  BigInt n_;
  BigInt magnitude_;
  bool negative_ = false;
  bool small_ = false;  // |n| < 2^64
  std::uint64_t small_value_ = 0;
};

// (n * j) mod m in exact integer arithmetic; the sampled phase at grid point
// t_j = 2*pi*j/m is exactly 2*pi*residue/m.
std::uint64_t grid_phase(const BigInt& n, std::uint64_t j, std::uint64_t m);

}  // namespace lacunar
