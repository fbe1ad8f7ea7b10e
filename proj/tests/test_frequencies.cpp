#include <doctest.h>

#include "lacunar/error.hpp"
#include "lacunar/frequencies.hpp"
#include "lacunar/phase.hpp"

using namespace lacunar;

TEST_CASE("geometric family values") {
  const auto g2 = FrequencySequence::geometric(2, true);
  CHECK(g2.at(5) == 32);
  CHECK(g2.at(1) == 2);
  CHECK(FrequencySequence::geometric(3, true).at(4) == 81);
  CHECK_FALSE(g2.defined(-1));
  CHECK_THROWS_AS(FrequencySequence::geometric(1, true), ValidationError);
  const auto sym = FrequencySequence::geometric(2, false);
  CHECK(sym.at(-3) == -8);
}

TEST_CASE("double exponential family values") {
  const auto d = FrequencySequence::double_exponential();
  CHECK(d.at(3) == 256);
  CHECK(d.at(5) == BigInt("4294967296"));
  CHECK(d.at(1) == 4);
  CHECK(d.at(-2) == -16);
  CHECK(d.bit_length(10) == 1025);
}

TEST_CASE("explicit family validation") {
  CHECK_NOTHROW(FrequencySequence::explicit_values({{1, 1}, {2, 3}, {3, 4}}));
  CHECK_THROWS_AS(FrequencySequence::explicit_values({{1, 3}, {2, 3}}), ValidationError);
  CHECK_THROWS_AS(FrequencySequence::explicit_values({{1, -1}}), ValidationError);
  CHECK_THROWS_AS(FrequencySequence::explicit_values({{-1, 2}}), ValidationError);
  CHECK_THROWS_AS(FrequencySequence::explicit_values({{0, 2}}), ValidationError);
}

TEST_CASE("classify the geometric and double-exponential families") {
  CHECK(classify(FrequencySequence::geometric(2, true), 10).verdict == Lacunarity::Lacunar);
  CHECK(classify(FrequencySequence::double_exponential(), 6).verdict == Lacunarity::Superlacunar);
  std::map<std::int64_t, BigInt> linear;
  for (int k = 1; k <= 11; ++k) linear[k] = k;
  const auto lin = classify(FrequencySequence::explicit_values(linear), 10);
  CHECK(lin.verdict == Lacunarity::NonLacunar);
  CHECK(lin.positive.ratios.size() == 10);
}

TEST_CASE("classification is stable across windows") {
  for (std::int64_t k = 3; k <= 8; ++k) {
    CHECK(classify(FrequencySequence::geometric(2, true), k).verdict == Lacunarity::Lacunar);
    CHECK(classify(FrequencySequence::double_exponential(), k).verdict == Lacunarity::Superlacunar);
  }
}

TEST_CASE("classification report invariants") {
  const auto c = classify(FrequencySequence::double_exponential(), 6);
  CHECK(c.observed_min_ratio > 1.0);
  CHECK(c.window == 6);
  CHECK(c.tail == 3);
  const auto one = classify(FrequencySequence::geometric(2, true), 4);
  CHECK_FALSE(one.negative.present);
  CHECK(one.note.find("vacuous") != std::string::npos);
}

TEST_CASE("classify rejects bad windows") {
  CHECK_THROWS_AS(classify(FrequencySequence::geometric(2, true), 1), ValidationError);
  CHECK_THROWS_AS(
      classify(FrequencySequence::explicit_values({{1, 1}, {2, 3}, {3, 4}}), 5), ValidationError);
}

TEST_CASE("frequency JSON round trip") {
  for (const auto& f : {FrequencySequence::geometric(3, false), FrequencySequence::double_exponential(),
                        FrequencySequence::explicit_values({{1, 5}, {2, BigInt("123456789012345678901234567890")}})}) {
    const auto j = f.to_json();
    const auto back = FrequencySequence::from_json(j);
    CHECK(back.to_json() == j);
  }
  const auto j = FrequencySequence::explicit_values({{1, BigInt("123456789012345678901234567890")}}).to_json();
  CHECK(j.dump().find("\"123456789012345678901234567890\"") != std::string::npos);
  CHECK_THROWS_AS(FrequencySequence::from_json({{"family", "nope"}}), ValidationError);
}

TEST_CASE("grid_phase examples") {
  CHECK(grid_phase(BigInt(5), 3, 8) == 7);
  CHECK(grid_phase(BigInt(65536), 1, 1024) == 0);
  CHECK(grid_phase(BigInt(65536), 1, 1021) == 192);
}

TEST_CASE("grid_phase depends on n only through n mod M") {
  const BigInt n = pow2(300) + 987654321;
  for (std::uint64_t m : {2, 1021, 65521, 1048573}) {
    const BigInt r = n % BigInt(std::to_string(m));
    for (std::uint64_t j : {std::uint64_t{0}, std::uint64_t{1}, m / 3, m - 1}) CHECK(grid_phase(n, j, m) == grid_phase(r, j, m));
  }
}
