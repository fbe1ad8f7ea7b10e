#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "lacunar/error.hpp"
#include "lacunar/phase.hpp"
#include "support/phase_oracle.hpp"

using namespace lacunar;

namespace {

void check_against(const BigInt& n, double t, double expected) {
  const ReducedPhase r = reduce_phase(n, Angle::radians(t));
  CHECK(r.angle >= 0.0);
  CHECK(r.angle < 2 * std::numbers::pi);
  CHECK(r.error_bound <= kDefaultPhaseTolerance);
  CHECK(oracle::circular_distance(r.angle, expected) <= r.error_bound + 1e-30);
}

}  // namespace

TEST_CASE("reduce_phase against frozen 200-bit values") {
  check_against(BigInt(1), 65536.0, 2.377246116913045669259025);
  check_against(pow2(64), 1.0, 3.117991952841885396877628);
  check_against(pow2(64), 3.0, 3.070790551346069713707596);
  check_against(pow2(256), 1.0, 2.694543447970685806885144);
  check_against(pow2(256), 0.7, 2.801378557437309054714719);
  check_against(-(pow2(512) + 3), 2.5, 4.624414085868742958521409);
  check_against(pow2(1000) + 12345, 1e-3, 5.150392090148750041407544);
  check_against(BigInt(1), 1e22, 5.263007914620499503607085);
  BigInt three600;
  mpz_pow_ui(three600.get_mpz_t(), BigInt(3).get_mpz_t(), 600);
  check_against(three600, -1.75, 3.012609235402092587417251);
}

TEST_CASE("reduce_phase trivial inputs") {
  CHECK(reduce_phase(BigInt(0), Angle::radians(12.5)).angle == 0.0);
  CHECK(reduce_phase(BigInt(7), Angle::radians(0.0)).angle == 0.0);
  const auto r = reduce_phase(BigInt(1), Angle::radians(1.0));
  CHECK(std::fabs(r.angle - 1.0) <= r.error_bound);
}

TEST_CASE("reduce_phase rejects bad input") {
  CHECK_THROWS_AS(reduce_phase(BigInt(1), Angle::radians(INFINITY)), ValidationError);
  CHECK_THROWS_AS(reduce_phase(BigInt(1), Angle::radians(NAN)), ValidationError);
  CHECK_THROWS_AS(reduce_phase(BigInt(1), Angle::radians(1.0), 0.0), ValidationError);
  CHECK_THROWS_AS(reduce_phase(BigInt(1), Angle::radians(1.0), 1e-300), NumericalError);
}

TEST_CASE("reduce_phase agrees with the cpp_int oracle on random inputs") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 400; ++i) {
    const unsigned bits = 1 + rng() % 1024;
    BigInt n = 0;
    for (unsigned b = 0; b < bits; b += 32) n = (n << 32) + static_cast<unsigned long>(rng() & 0xffffffffu);
    n >>= (((bits + 31) / 32) * 32 - bits);
    if (rng() & 1) n = -n;
    const double t = std::ldexp(static_cast<double>(rng() >> 11) * 0x1p-53, static_cast<int>(rng() % 40) - 20) *
                     ((rng() & 1) ? 1.0 : -1.0);
    const ReducedPhase r = reduce_phase(n, Angle::radians(t));
    CHECK(oracle::distance(to_decimal(n), t, r.angle) <= r.error_bound);
  }
}

TEST_CASE("reduce_phase at a rounding tie") {
  // 370 * t lies exactly halfway between two doubles.
  const double t = 0x1.7d78ec0819f8p-17;
  const auto r = reduce_phase(BigInt(370), Angle::radians(t));
  CHECK(oracle::distance("370", t, r.angle) <= r.error_bound);
  CHECK(std::fabs(r.angle - 0x1.13ac6291dac44p-8) <= 0x1p-60);
}

TEST_CASE("PhaseReducer matches reduce_phase") {
  const BigInt n = pow2(130) + 17;
  PhaseReducer reducer(n);
  for (double t : {0.1, -2.0, 1e5, 3.0e-7}) {
    const auto a = reducer.reduce(Angle::radians(t));
    const auto b = reduce_phase(n, Angle::radians(t));
    CHECK(a.angle == b.angle);
  }
}

TEST_CASE("exact rational angles") {
  // 2^(2^k) mod 3 == 1 for k >= 1, so n * (2*pi/3) reduces to 2*pi/3.
  const auto r = reduce_phase(pow2(16), Angle::turns(1, 3));
  CHECK(std::fabs(r.angle - 2 * std::numbers::pi / 3) <= r.error_bound + 0x1p-51);
  CHECK(reduce_phase(BigInt(6), Angle::turns(1, 3)).angle == 0.0);
  const auto neg = reduce_phase(BigInt(-1), Angle::turns(1, 4));
  CHECK(std::fabs(neg.angle - 1.5 * std::numbers::pi) <= neg.error_bound + 0x1p-51);
}

TEST_CASE("grid_phase equals long division") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    BigInt n = 0;
    const int limbs = 1 + static_cast<int>(rng() % 20);
    for (int l = 0; l < limbs; ++l) n = (n << 64) + BigInt(std::to_string(rng()));
    if (rng() & 1) n = -n;
    const std::uint64_t m = 2 + rng() % 100000;
    const std::uint64_t j = rng() % m;
    CHECK(grid_phase(n, j, m) == oracle::residue(to_decimal(n), j, m));
  }
  CHECK(grid_phase(BigInt(5), 3, 7) == 1);
  CHECK_THROWS_AS(grid_phase(BigInt(5), 7, 7), ValidationError);
  CHECK_THROWS_AS(grid_phase(BigInt(5), 0, 0), ValidationError);
}

TEST_CASE("tiny products keep relative accuracy") {
  for (double h : {1e-24, 3.5e-100, 1e-8}) {
    const auto r = reduce_phase(BigInt(4), Angle::radians(h));
    CHECK(r.angle == doctest::Approx(4 * h).epsilon(1e-15));
    const auto big = reduce_phase(pow2(256), Angle::radians(h));
    CHECK(oracle::distance(to_decimal(pow2(256)), h, big.angle) <= big.error_bound);
  }
}
