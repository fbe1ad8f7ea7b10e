#include <doctest.h>

#include "lacunar/io.hpp"

using namespace lacunar;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(1.0) == "1");
  CHECK(format_shortest(-2.5e-300) == "-2.5e-300");
  CHECK(std::stod(format_shortest(0.1 + 0.2)) == 0.1 + 0.2);
  CHECK(format_shortest(INFINITY) == "inf");
  CHECK(format_17(0.1) == "0.10000000000000001");
}

TEST_CASE("grid CSV") {
  const auto grid = sample_grid(single_term(BigInt(0), {1.0, 0.0}), 2);
  CHECK(grid_csv(grid) == "j,t,re,im\n0,0,1,0\n1,3.1415926535897931,1,0\n");
  const auto j = grid_json(grid);
  CHECK(j.at("size") == 2);
  CHECK(j.at("re").size() == 2);
}

TEST_CASE("modulus and bounds CSV headers") {
  ModulusCurve c;
  c.points = {{0.5, 0.25}};
  CHECK(modulus_csv(c) == "delta,omega,provenance\n0.5,0.25,EmpiricalGrid\n");
  BoundEvaluation b;
  b.delta = 0.5;
  b.n_star = 3;
  b.sigma1 = 1.5;
  b.sigma2 = 0.125;
  b.total = 0.875;
  CHECK(bounds_csv({b}) == "delta,N_star,sigma1,sigma2,total,variant\n0.5,3,1.5,0.125,0.875,Tight\n");
}
