#include "forgetting/errors.hpp"
#include "forgetting/orderings.hpp"
#include "forgetting/philox.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace forgetting;

TEST_CASE("philox4x64-10 known answers") {
  const PhiloxCounter zero = philox4x64_10({0, 0, 0, 0}, {0, 0});
  CHECK(zero == PhiloxCounter{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL,
                              0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL});
  const std::uint64_t ones = ~0ULL;
  const PhiloxCounter full = philox4x64_10({0, 0, 0, 0}, {ones, ones});
  CHECK(full == PhiloxCounter{0x44b7493d1acfc229ULL, 0x6636af8e997921ddULL,
                              0x3f73e132b5b3780eULL, 0x605644dde03b01b1ULL});
}

TEST_CASE("RandomStream words follow counter blocks under the key {seed, stream}") {
  RandomStream rng(42, 3);
  std::vector<std::uint64_t> words;
  for (int i = 0; i < 40; ++i) words.push_back(rng.next_u64());
  // Blocks 8 and 9 of the stream hold these words.
  const std::vector<std::uint64_t> expected = {
      0x5bc163fe1368a0f6ULL, 0xc5c2efc08312bfbeULL, 0x775903c47662c17dULL,
      0xe9cd58a9536d2666ULL, 0x1741631c3ea4cd2bULL, 0xa26895d94797d1a0ULL,
      0x416870f3e4c65215ULL, 0x735ae9bd44c4cbbbULL};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(words[32 + i] == expected[i]);
  const PhiloxCounter block8 = philox4x64_10({8, 0, 0, 0}, {42, 3});
  for (std::size_t i = 0; i < 4; ++i) CHECK(block8[i] == expected[i]);
}

TEST_CASE("uniform and normal draws have the right moments") {
  RandomStream rng(2024);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("realize: cyclic and identity") {
  CHECK(Ordering::cyclic(3).realize(7) == std::vector<std::size_t>{0, 1, 2, 0, 1, 2, 0});
  CHECK(Ordering::identity(4).realize(4) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(Ordering::cyclic(3).realize(0).empty());
  CHECK_THROWS_AS(Ordering::identity(4).realize(5), InvalidInput);
}

TEST_CASE("realize: explicit sequences") {
  const Ordering o = Ordering::explicit_sequence(3, {2, 0, 2, 1});
  CHECK(o.realize(3) == std::vector<std::size_t>{2, 0, 2});
  CHECK_THROWS_AS(o.realize(5), InvalidInput);
  CHECK_THROWS_AS(Ordering::explicit_sequence(2, {0, 2}), InvalidInput);
}

TEST_CASE("realize: random ordering is uniform and reproducible") {
  const Ordering o = Ordering::random(2, 17);
  const auto seq = o.realize(100000);
  std::size_t first = 0;
  for (std::size_t v : seq) first += v == 0;
  const double freq = double(first) / double(seq.size());
  CHECK(freq >= 0.49);
  CHECK(freq <= 0.51);
  CHECK(o.realize(100000) == seq);
  CHECK(Ordering::random(2, 17).realize(50) == Ordering::random(2, 17).realize(50));
  CHECK(Ordering::random(2, 18).realize(50) != Ordering::random(2, 17).realize(50));
  // Prefix property: a longer realization extends a shorter one.
  const auto longer = Ordering::random(5, 3).realize(64);
  const auto shorter = Ordering::random(5, 3).realize(20);
  CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST_CASE("orderings reject empty task sets") {
  CHECK_THROWS_AS(Ordering::cyclic(0), InvalidInput);
  CHECK(to_string(OrderingKind::random) == "random");
}
