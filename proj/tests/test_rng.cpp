#include <doctest.h>

#include <cstdlib>
#include <set>

#include "riskclt/rng.hpp"

using namespace riskclt;

TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(Philox4x32::block(A4{0, 0, 0, 0}, A2{0, 0}) ==
        A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  const std::uint32_t f = 0xffffffffu;
  CHECK(Philox4x32::block(A4{f, f, f, f}, A2{f, f}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          A2{0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and separated") {
  auto a = make_stream(42, 7, StreamTag::design);
  auto b = make_stream(42, 7, StreamTag::design);
  for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed : {1u, 2u})
    for (std::uint64_t idx : {0u, 1u, 2u})
      for (auto tag : {StreamTag::design, StreamTag::beta, StreamTag::noise}) {
        auto s = make_stream(seed, idx, tag);
        firsts.insert(s());
      }
  CHECK(firsts.size() == 18);
}

TEST_CASE("output bits are balanced") {
  auto s = make_stream(3, 0, StreamTag::misc);
  const int m = 20000;
  std::array<int, 64> ones{};
  for (int i = 0; i < m; ++i) {
    const std::uint64_t v = s();
    for (int b = 0; b < 64; ++b) ones[b] += static_cast<int>((v >> b) & 1u);
  }
  // 5 binomial standard deviations around m/2
  for (int b = 0; b < 64; ++b) CHECK(std::abs(ones[b] - m / 2) < 5 * 71);
}
